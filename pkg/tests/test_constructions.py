import numpy as np
import pytest

from quivalg import algcore as ac
from quivalg import constructions as cn
from quivalg import exactlin as ex
from quivalg import modcat as mc
from quivalg import presentation as pr
from quivalg import relative as rel
from quivalg.algcore import AlgebraError
from quivalg.bimod import (Bimodule, regular_bimodule, sub_bimodule,
                           zero_bimodule)

from conftest import corpus_path, load


def _point():
    """The one-dimensional algebra k on a single vertex."""
    return pr.build_algebra(pr.parse_presentation(
        "FIELD 101\nVERTICES 1\n"))


def _k_bimodule(k):
    e = ex.eye(k.field, 1)
    return Bimodule(k, k, [e.copy()], [e.copy()])


def test_triangular_matrix_algebra_structure():
    k = _point()
    m = _k_bimodule(k)
    alg, sub = cn.triangular_matrix_algebra(
        k, k, k, _k_bimodule(k), m, zero_bimodule(k, k))
    assert alg.dim == 5
    alg.check_unit_and_idempotents()
    assert sub.dim == 2
    # the two off-diagonal slots square to zero
    for i in range(3, 5):
        for j in range(3, 5):
            assert not np.any(alg.mult_basis(i, j))


def test_triangular_matrix_algebra_with_rho():
    k = _point()
    m = _k_bimodule(k)
    rho = np.ones((1, 1), dtype=np.int64)
    alg, sub = cn.triangular_matrix_algebra(
        k, k, k, m, _k_bimodule(k), _k_bimodule(k), rho=rho)
    assert alg.dim == 6
    alg.check_unit_and_idempotents()
    # the product of the two inner corner generators lands in the outer one
    prod = alg.mult_basis(3, 4)
    assert prod[5] == 1 and np.count_nonzero(prod) == 1


def test_trivial_extension_squares_to_zero():
    b = load("k2")
    m = regular_bimodule(b)
    alg, sub = cn.trivial_extension(b, m)
    assert alg.dim == 6
    alg.check_unit_and_idempotents()
    assert sub.dim == 3
    for i in range(b.dim, alg.dim):
        for j in range(b.dim, alg.dim):
            assert not np.any(alg.mult_basis(i, j))


def test_tensor_algebra_of_radical():
    b = load("k2")
    arrow = b.basis_vec(b.basis_words.index(("a",)))
    incl = arrow.reshape(-1, 1)
    m = sub_bimodule(regular_bimodule(b), incl)
    alg = cn.tensor_algebra(b, m)
    # the arrow squares to zero, so the tensor algebra is b + m
    assert alg.dim == b.dim + m.dim
    alg.check_unit_and_idempotents()


def test_tensor_algebra_requires_nilpotency():
    k = _point()
    with pytest.raises(AlgebraError):
        cn.tensor_algebra(k, _k_bimodule(k), power_cap=5)


def test_weakly_triangular_instance_tri3():
    pres = pr.parse_file(corpus_path("tri3"))
    alg, sub, cert = cn.weakly_triangular_instance(
        pres, [["3"], ["2"], ["1"]])
    assert cert.parts == 3
    assert cert.bound == 2
    assert cert.enveloping_bound == 4
    assert "loops-in-subalgebra" in cert.checks
    for m in rel.default_test_modules(alg):
        r = rel.rel_pd(alg, sub, m, dmax=cert.bound + 2)
        assert r.is_finite and r.value <= cert.bound


def test_weakly_triangular_instance_rejects_upward_arrow():
    pres = pr.parse_file(corpus_path("tri3"))
    with pytest.raises(AlgebraError):
        cn.weakly_triangular_instance(pres, [["1"], ["2"], ["3"]])


def test_weakly_triangular_instance_rejects_bad_partition():
    pres = pr.parse_file(corpus_path("tri3"))
    with pytest.raises(AlgebraError):
        cn.weakly_triangular_instance(pres, [["3"], ["2"]])


def test_random_weakly_triangular_accepted(rng):
    for _ in range(5):
        pres, partition = cn.random_weakly_triangular(rng, max_parts=3)
        alg, sub, cert = cn.weakly_triangular_instance(pres, partition)
        assert alg.dim <= 22
        assert cert.parts == len(partition)
        assert sub.dim >= 1
        alg.check_unit_and_idempotents()
