import os

import numpy as np
import pytest

from quivalg import algcore as ac
from quivalg import presentation as pr

CORPUS = os.path.join(
    os.path.dirname(pr.__file__), "corpus")


def corpus_path(name):
    return os.path.join(CORPUS, name + ".alg")


def load(name):
    return pr.build_algebra(pr.parse_file(corpus_path(name)))


def load_ext(name):
    alg = load(name)
    gens = pr.subalgebra_elements(alg)
    sub = ac.subalgebra_closure(alg, gens)
    return alg, sub


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260826)
