import numpy as np
import pytest

from quivalg import algcore as ac
from quivalg import exactlin as ex
from quivalg import extensions as et
from quivalg import modcat as mc
from quivalg.algcore import AlgebraError, EnvelopingPair
from quivalg.bimod import Bimodule, regular_bimodule

from conftest import load, load_ext


def _free_bimodule(b):
    """The free rank-one bimodule B (x) B."""
    f = b.field
    eye = ex.eye(f, b.dim)
    lmats = [np.kron(b.left_mult_mat(i), eye) % f.p for i in range(b.dim)]
    rmats = [np.kron(eye, b.right_mult_mat(j)) % f.p for j in range(b.dim)]
    return Bimodule(b, b, lmats, rmats, validate=False)


def test_extension_quotient_dimension():
    for name in ("k2", "tri3", "loop_x2", "gps3"):
        alg, sub = load_ext(name)
        aquo = et.extension_quotient(alg, sub)
        assert aquo.dim == alg.dim - sub.dim


def test_fast_projectivity_matches_dense():
    cases = []
    for name in ("k2", "tri3", "loop_x2", "gps3", "cycle3"):
        alg, sub = load_ext(name)
        b = sub.algebra
        cases.append((sub, et.extension_quotient(alg, sub)))
        cases.append((sub, regular_bimodule(b)))
        cases.append((sub, _free_bimodule(b)))
    for sub, bim in cases:
        fast = et._fast_bimodule_projective(sub.algebra, bim)
        if fast is None:
            continue
        benv = et._benv(sub)
        assert fast == mc.is_projective(bim.as_env_module(benv))


def test_free_bimodule_is_projective():
    for name in ("k2", "tri3", "cycle3"):
        alg, sub = load_ext(name)
        assert et._bimodule_projective(sub, _free_bimodule(sub.algebra))


def test_regular_bimodule_not_projective_for_cycle():
    # the cycle algebra is not separable, so A is not projective over A^e
    for name in ("cycle3", "tri3"):
        alg = load(name)
        sub = ac.subalgebra_closure(
            alg, [alg.basis_vec(i) for i in range(alg.dim)])
        assert not et._bimodule_projective(sub, regular_bimodule(alg))


def test_sliced_tensor_matches_generic(monkeypatch):
    alg, sub = load_ext("gps3")
    b = sub.algebra
    aquo = et.extension_quotient(alg, sub)
    fast = et.tensor_bimodule(b, aquo, aquo)
    monkeypatch.setattr(et, "_diag_slices", lambda *a, **k: None)
    slow = et.tensor_bimodule(b, aquo, aquo)
    assert fast.dim == slow.dim
    for q in range(b.dim):
        assert int(ex.rank(b.field, fast.lmats[q])) == int(
            ex.rank(b.field, slow.lmats[q]))
        assert int(ex.rank(b.field, fast.rmats[q])) == int(
            ex.rank(b.field, slow.rmats[q]))


def test_tensor_unit_bimodule():
    # B (x)_B B = B
    for name in ("k2", "tri3"):
        alg, sub = load_ext(name)
        b = sub.algebra
        t = et.tensor_bimodule(b, regular_bimodule(b), regular_bimodule(b))
        assert t.dim == b.dim


def test_check_proj_bounded_loop_x2():
    alg, sub = load_ext("loop_x2")
    rep = et.check_proj_bounded(alg, sub)
    assert rep.proj_bounded is True
    assert rep.strongly is False
    assert rep.r.kind == "infinite"
    assert rep.r.witness


def test_check_proj_bounded_gps3():
    alg, sub = load_ext("gps3")
    rep = et.check_proj_bounded(alg, sub)
    assert rep.strongly is True
    assert rep.r.is_finite
    assert rep.jz_bound is not None


def test_check_trivial_extension_b_equals_a():
    alg = load("cycle3")
    sub = ac.subalgebra_closure(
        alg, [alg.basis_vec(i) for i in range(alg.dim)])
    rep = et.check_proj_bounded(alg, sub)
    assert rep.u.value == 0
    assert rep.p == 1
    assert rep.p_certified == "vanishing-power"
    assert rep.proj_bounded is True
    assert rep.strongly is True
    jz = et.jz_verify(alg, sub, report=rep)
    assert jz.passed
    # the relative homology vanishes in positive degrees
    assert all(d == 0 for d in jz.dims_rel[1:])


def test_jz_requires_certified_bound():
    alg, sub = load_ext("cycle3")
    rep = et.check_proj_bounded(alg, sub)
    if rep.jz_bound is None:
        with pytest.raises(AlgebraError):
            et.jz_verify(alg, sub, report=rep)
    else:
        et.jz_verify(alg, sub, report=rep)


def test_jz_rejects_nontrivial_coefficients():
    alg, sub = load_ext("loop_x2")
    with pytest.raises(AlgebraError):
        et.jz_verify(alg, sub, x=mc.regular_module(alg))


def test_matrix_extension_check_point_case():
    from quivalg import presentation as pr

    k = pr.build_algebra(pr.parse_presentation("FIELD 101\nVERTICES 1\n"))
    e = ex.eye(k.field, 1)
    m = Bimodule(k, k, [e.copy()], [e.copy()])
    verdict, witness = et.matrix_extension_check(
        k, k, k, m, Bimodule(k, k, [e.copy()], [e.copy()]))
    assert verdict is True
    assert witness["direct"] == witness["one_sided"] is True


def test_restricted_projective_pd_check_tri3():
    alg, sub = load_ext("tri3")
    out = et.restricted_projective_pd_check(alg, sub)
    assert out["hypothesis"] in (True, False)
    if out["hypothesis"]:
        assert out["holds"] is True


def test_induced_pd_check_tri3():
    alg, sub = load_ext("tri3")
    for _, s, p in mc.simples_and_projectives(sub.algebra):
        for y in (s, p):
            out = et.induced_pd_check(alg, sub, y)
            if out["hypothesis"]:
                assert out["holds"] is True


def test_projective_tensor_check():
    alg, sub = load_ext("tri3")
    p_bim = _free_bimodule(sub.algebra)
    for _, s, p in mc.simples_and_projectives(sub.algebra):
        out = et.projective_tensor_check(sub, p_bim, s)
        assert out["hypothesis"] is True
        assert out["holds"] is True


def test_restricted_pd_check_tri3():
    alg, sub = load_ext("tri3")
    for _, s, p in mc.simples_and_projectives(alg):
        out = et.restricted_pd_check(alg, sub, p)
        if out["hypothesis"]:
            assert out["holds"] is True


def test_preservation_report_vacuous():
    alg, sub = load_ext("loop_x2")
    out = et.preservation_report(alg, sub)
    assert out["vacuous"] is True
    assert out["checks"] == []


def test_preservation_report_gps3():
    alg, sub = load_ext("gps3")
    mods = [s for _, s, _ in mc.simples_and_projectives(alg)]
    out = et.preservation_report(alg, sub, modules=mods)
    assert out["vacuous"] is False
    assert out["checks"]
    assert all(v != "FAIL" for _, v in out["checks"])
