"""Finitely generated left modules over a finite-dimensional algebra.

A module is a list of action matrices, one per algebra basis element.
Everything here is dense exact linear algebra; structured large bimodules
live in the bimod module.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import exactlin as ex
from .algcore import AlgebraError, FDAlgebra, Subalgebra, opposite

__all__ = [
    "Module",
    "ModuleMap",
    "regular_module",
    "left_projective",
    "zero_module",
    "direct_sum",
    "submodule",
    "quotient_module",
    "simples_and_projectives",
    "radical_submodule_rows",
    "top_of",
    "projective_cover",
    "kernel_of_map",
    "is_projective",
    "Presentation0",
    "maps_from_p0",
    "split_of_surjection",
    "hom_space",
    "is_isomorphic",
    "restrict",
    "tensor_over",
    "induce",
]


class Module:
    def __init__(self, algebra: FDAlgebra, mats, validate=False):
        self.algebra = algebra
        self.mats = mats  # list of (d, d) arrays, one per basis element
        self.dim = 0 if not mats else mats[0].shape[0]
        self._gen_mats = None
        self._idem_mats = None
        if validate:
            self.check()

    @property
    def field(self):
        return self.algebra.field

    def act_basis(self, i, block):
        return ex.mm(self.field, self.mats[i], block)

    def act_elem(self, x, block):
        f = self.field
        d = self.dim
        k = block.shape[1]
        acc = ex.zeros(f, d, k)
        for i in np.nonzero(x)[0]:
            acc = acc + x[i] * ex.mm(f, self.mats[int(i)], block)
        if f.is_prime_field:
            acc %= f.p
        return acc

    def elem_mat(self, x):
        """Dense matrix of the action of the algebra element x."""
        f = self.field
        acc = ex.zeros(f, self.dim, self.dim)
        for i in np.nonzero(x)[0]:
            acc = acc + x[i] * self.mats[int(i)]
        if f.is_prime_field:
            acc %= f.p
        return acc

    def gen_mats(self):
        if self._gen_mats is None:
            self._gen_mats = [
                (lab, self.elem_mat(g)) for lab, g in self.algebra.generators
            ]
        return self._gen_mats

    def idem_mats(self):
        if self._idem_mats is None:
            self._idem_mats = [self.elem_mat(e) for e in self.algebra.idempotents]
        return self._idem_mats

    def idem_slice_dims(self):
        return [int(ex.rank(self.field, m)) for m in self.idem_mats()]

    def check(self):
        f = self.field
        alg = self.algebra
        d = self.dim
        one = self.elem_mat(alg.unit())
        if not np.array_equal(one, ex.eye(f, d)):
            raise AlgebraError("unit does not act as identity")
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = ex.mm(f, self.mats[i], self.mats[j])
                rhs = self.elem_mat(alg.mult_basis(i, j))
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError(
                        f"action not multiplicative at basis ({i}, {j})"
                    )


class ModuleMap:
    def __init__(self, source: Module, target: Module, mat):
        self.source = source
        self.target = target
        self.mat = mat  # target.dim x source.dim

    def is_zero(self):
        return not np.any(self.mat)


def zero_module(alg) -> Module:
    f = alg.field
    return Module(alg, [ex.zeros(f, 0, 0) for _ in range(alg.dim)])


def regular_module(alg) -> Module:
    return Module(alg, [alg.left_mult_mat(i) for i in range(alg.dim)])


def left_projective(alg, idem_index) -> tuple:
    """(Ae, inclusion into the regular module) for a primitive idempotent."""
    f = alg.field
    e = alg.idempotents[idem_index]
    re = alg.right_mult_elem(e)  # columns: b_j * e
    incl = ex.image_basis(f, re).T.copy()
    reg = regular_module(alg)
    sub, _ = submodule(reg, incl)
    return sub, incl


def direct_sum(alg, modules) -> tuple:
    """(sum module, list of (inclusion, projection) matrices)."""
    f = alg.field
    dims = [m.dim for m in modules]
    total = sum(dims)
    mats = []
    for i in range(alg.dim):
        big = ex.zeros(f, total, total)
        off = 0
        for m in modules:
            big[off : off + m.dim, off : off + m.dim] = m.mats[i]
            off += m.dim
        mats.append(big)
    embeds = []
    off = 0
    for m in modules:
        incl = ex.zeros(f, total, m.dim)
        proj = ex.zeros(f, m.dim, total)
        for j in range(m.dim):
            incl[off + j, j] = _one(f)
            proj[j, off + j] = _one(f)
        embeds.append((incl, proj))
        off += m.dim
    return Module(alg, mats), embeds


def _one(f):
    return 1 if f.is_prime_field else Fraction(1)


def submodule(parent: Module, incl) -> tuple:
    """Module structure on the column span of incl (must be invariant).

    Returns (module, proj) with proj a left inverse of incl.
    """
    f = parent.field
    alg = parent.algebra
    d = incl.shape[1]
    if d == 0:
        return zero_module(alg), ex.zeros(f, 0, parent.dim)
    mats = []
    for i in range(alg.dim):
        img = ex.mm(f, parent.mats[i], incl)
        coords = ex.solve_many(f, incl, img)
        if coords is None:
            raise AlgebraError("column span is not a submodule")
        mats.append(coords)
    # a left inverse: solve incl proj = projection onto span along free coords
    proj = ex.solve_many(f, incl, _span_projector(f, incl))
    return Module(alg, mats), proj


def _span_projector(f, incl):
    """A projector of the ambient space onto the column span of incl."""
    rows, pivots = ex.row_echelon(f, incl.T, reduced=True)
    amb = incl.shape[0]
    out = ex.zeros(f, amb, amb)
    basis = rows.T  # amb x d
    for r, c in enumerate(pivots):
        out[:, c] = basis[:, r]
    return out


def quotient_module(parent: Module, sub_rows) -> tuple:
    """Quotient by the row-span (an invariant subspace).

    Returns (module, proj map parent->quotient, section quotient->parent).
    """
    f = parent.field
    alg = parent.algebra
    quo = ex.Quotient(f, parent.dim, sub_rows)
    sect = quo.section()
    d = sect.shape[1]
    if d == 0:
        z = zero_module(alg)
        return z, ex.zeros(f, 0, parent.dim), ex.zeros(f, parent.dim, 0)
    projmat = quo.project(ex.eye(f, parent.dim))
    mats = [quo.project(ex.mm(f, parent.mats[i], sect)) for i in range(alg.dim)]
    return Module(alg, mats), projmat, sect


def radical_submodule_rows(mod: Module):
    """Rows spanning rad(A) . M."""
    f = mod.field
    rad = mod.algebra.radical_basis()
    if rad.shape[0] == 0 or mod.dim == 0:
        return ex.zeros(f, 0, mod.dim)
    cols = [ex.mm(f, mod.elem_mat(r), ex.eye(f, mod.dim)) for r in rad]
    rows = np.concatenate([c.T for c in cols], axis=0)
    out, _ = ex.row_echelon(f, rows, reduced=True)
    return out


def top_of(mod: Module):
    """(top module, projection, section) where top = M / rad M."""
    return quotient_module(mod, radical_submodule_rows(mod))


def _check_basic(alg):
    """Covers below assume a split basic algebra: e_i (A/rad A) e_j = δ_ij k."""
    f = alg.field
    rad = alg.radical_basis()
    quo = ex.Quotient(f, alg.dim, rad)
    for i, e in enumerate(alg.idempotents):
        for j, e2 in enumerate(alg.idempotents):
            le = alg.left_mult_elem(e)
            re = alg.right_mult_elem(e2)
            corner = ex.mm(f, le, ex.mm(f, re, quo.section()))
            r = ex.rank(f, quo.project(corner))
            want = 1 if i == j else 0
            if r != want:
                raise AlgebraError(
                    "projective covers need a split basic algebra "
                    f"(corner ({i},{j}) has dimension {r})"
                )


def simples_and_projectives(alg):
    """[(idempotent index, simple module, projective cover module)]."""
    out = []
    for i in range(len(alg.idempotents)):
        p, _ = left_projective(alg, i)
        s, _, _ = top_of(p)
        out.append((i, s, p))
    return out


def projective_cover(mod: Module):
    """(P, cover: ModuleMap P -> M, summands list of idempotent indices)."""
    f = mod.field
    alg = mod.algebra
    if getattr(alg, "_basic_checked", None) is None:
        _check_basic(alg)
        alg._basic_checked = True
    topm, topproj, _ = top_of(mod)
    if topm.dim == 0:
        z = zero_module(alg)
        return z, ModuleMap(z, mod, ex.zeros(f, mod.dim, 0)), []
    # choose generators of M: lifts of a basis of each e_i . top
    summand_idx = []
    gens = []
    for i, e in enumerate(alg.idempotents):
        em_top = topm.elem_mat(e)
        # a basis of e . top, as columns
        img = ex.image_basis(f, em_top).T.copy()
        if img.shape[1] == 0:
            continue
        # lift each column to e.M
        lifts = ex.solve_many(f, topproj, img)
        if lifts is None:
            raise AlgebraError("internal: top projection not surjective")
        em_mod = mod.elem_mat(e)
        lifts = ex.mm(f, em_mod, lifts)  # move the lift into e.M
        if not np.array_equal(ex.mm(f, topproj, lifts), img):
            raise AlgebraError("internal: idempotent lift failed")
        for c in range(img.shape[1]):
            summand_idx.append(i)
            gens.append(lifts[:, c])
    projs = []
    incls = []
    for i in summand_idx:
        p, incl = left_projective(alg, i)
        projs.append((p, incl))
    big, embeds = direct_sum(alg, [p for p, _ in projs])
    cover = ex.zeros(f, mod.dim, big.dim)
    off = 0
    for (p, incl), g in zip(projs, gens):
        # basis column c of P corresponds to algebra element incl[:, c];
        # send it to (that element) . g
        for c in range(p.dim):
            cover[:, off + c] = mod.act_elem(incl[:, c], g.reshape(-1, 1))[:, 0]
        off += p.dim
    if ex.rank(f, cover) != mod.dim:
        raise AlgebraError("internal: cover is not surjective")
    return big, ModuleMap(big, mod, cover), summand_idx


def kernel_of_map(m: ModuleMap):
    """(kernel module, inclusion into source)."""
    f = m.source.field
    incl = ex.nullspace(f, m.mat)
    mod, _ = submodule(m.source, incl)
    return mod, incl


def is_projective(mod: Module) -> bool:
    _, cover, _ = projective_cover(mod)
    return ex.nullspace(mod.field, cover.mat).shape[1] == 0


class Presentation0:
    """A projective presentation P1 -> P0 -> M with cover data.

    gens0[t] = (idempotent index, inclusion matrix of the t-th summand of
    P0 into the regular module); cover: P0 -> M; d1: P1 -> P0 with image
    equal to ker(cover).
    """

    def __init__(self, m: Module):
        alg = m.algebra
        f = m.field
        self.module = m
        p0, cover, idx0 = projective_cover(m)
        self.p0 = p0
        self.cover = cover.mat
        ker, incl = kernel_of_map(cover)
        p1, cover1, idx1 = projective_cover(ker)
        self.d1 = ex.mm(f, incl, cover1.mat)
        self.p1 = p1
        # per-summand data for P0: idempotent index and algebra elements
        self.summands = []
        off = 0
        for i in idx0:
            pmod, pincl = left_projective(alg, i)
            self.summands.append((i, pincl, off))
            off += pmod.dim
        assert off == p0.dim


def maps_from_p0(pres: Presentation0, target: Module):
    """Parametrize Hom_A(P0, T) by generator images in idempotent slices.

    Returns (slices, phi) where slices[t] is a (T.dim x n_t) basis of
    e_{i_t}.T and phi is a (P0.dim) list of (T.dim x n_total) blocks: the
    map P0 -> T determined by coefficients u sends the c-th basis vector of
    P0 to phi[c] @ u.
    """
    f = target.field
    slices = []
    widths = []
    for i, _, _ in pres.summands:
        em = target.idem_mats()[i]
        sl = ex.image_basis(f, em).T.copy()
        slices.append(sl)
        widths.append(sl.shape[1])
    total = sum(widths)
    phi = [ex.zeros(f, target.dim, total) for _ in range(pres.p0.dim)]
    col0 = 0
    for (i, pincl, off), sl, w in zip(pres.summands, slices, widths):
        for c in range(pincl.shape[1]):
            # the (off + c)-th basis vector of P0 is the algebra element
            # pincl[:, c] acting on the summand generator
            phi[off + c][:, col0 : col0 + w] = target.act_elem(pincl[:, c], sl)
        col0 += w
    return slices, phi


def split_of_surjection(pi: ModuleMap):
    """An A-linear section of the surjection pi : T -> M, or None.

    Works through a projective presentation of M, so the unknowns are the
    generator images rather than a full dim(T) x dim(M) matrix.
    """
    t, m = pi.source, pi.target
    f = m.field
    if m.dim == 0:
        return ex.zeros(f, t.dim, 0)
    pres = Presentation0(m)
    slices, phi = maps_from_p0(pres, t)
    total = phi[0].shape[1] if phi else 0
    # phi . d1 = 0  and  pi . phi = cover
    rows = []
    rhs = []
    for x in range(pres.p1.dim):
        acc = ex.zeros(f, t.dim, total)
        col = pres.d1[:, x]
        for c in np.nonzero(col)[0]:
            acc = acc + col[c] * phi[int(c)]
        if f.is_prime_field:
            acc %= f.p
        rows.append(acc)
        rhs.append(ex.zeros(f, t.dim, 1)[:, 0])
    for c in range(pres.p0.dim):
        rows.append(ex.mm(f, pi.mat, phi[c]))
        rhs.append(pres.cover[:, c])
    big = np.concatenate(rows, axis=0)
    rhsv = np.concatenate(rhs, axis=0)
    sol = ex.solve(f, big, rhsv)
    if sol is None:
        return None
    # sigma on M: columns are phi(lift of basis vectors of M)
    lifts = ex.solve_many(f, pres.cover, ex.eye(f, m.dim))
    sigma = ex.zeros(f, t.dim, m.dim)
    for j in range(m.dim):
        acc = ex.zeros(f, t.dim, 1)[:, 0]
        lift = lifts[:, j]
        for c in np.nonzero(lift)[0]:
            acc = acc + lift[c] * ex.mm(f, phi[int(c)], sol.reshape(-1, 1))[:, 0]
        if f.is_prime_field:
            acc %= f.p
        sigma[:, j] = acc
    return sigma


def hom_space(m: Module, n: Module):
    """Basis of Hom_A(M, N) as a list of (n.dim x m.dim) matrices."""
    f = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    rows = []
    for (_, gm), (_, gn) in zip(m.gen_mats(), n.gen_mats()):
        # N_g H - H M_g = 0 on vec(H), column-major H of shape (dn, dm)
        a = np.kron(ex.eye(f, dm), gn) - np.kron(gm.T, ex.eye(f, dn))
        if f.is_prime_field:
            a %= f.p
        rows.append(a)
    big = np.concatenate(rows, axis=0)
    ker = ex.nullspace(f, big)
    out = []
    for c in range(ker.shape[1]):
        out.append(ker[:, c].reshape(dm, dn).T.copy())
    return out


def is_isomorphic(m: Module, n: Module, tries=64, seed=0):
    """(True, iso matrix) / (False, None) / (None, None) for unknown."""
    f = m.field
    if m.dim != n.dim:
        return False, None
    if m.dim == 0:
        return True, ex.zeros(f, 0, 0)
    if m.idem_slice_dims() != n.idem_slice_dims():
        return False, None
    if _radical_series(m) != _radical_series(n):
        return False, None
    homs = hom_space(m, n)
    if not homs:
        return False, None
    for h in homs:
        if ex.rank(f, h) == m.dim:
            return True, h
    if f.is_prime_field:
        rng = np.random.default_rng(seed)
        for _ in range(tries):
            co = rng.integers(0, f.p, size=len(homs))
            cand = sum(int(c) * h for c, h in zip(co, homs)) % f.p
            if ex.rank(f, cand) == m.dim:
                return True, cand
        # exhaustive only when the search space is small
        if f.p ** len(homs) <= 100000:
            cand = _exhaustive_iso(f, homs, m.dim)
            if cand is not None:
                return True, cand
            return False, None
    return None, None


def _exhaustive_iso(f, homs, d):
    import itertools

    for combo in itertools.product(range(f.p), repeat=len(homs)):
        if not any(combo):
            continue
        cand = sum(c * h for c, h in zip(combo, homs)) % f.p
        if ex.rank(f, cand) == d:
            return cand
    return None


def _radical_series(mod: Module):
    f = mod.field
    dims = []
    cur = mod
    for _ in range(mod.algebra.dim + 1):
        rows = radical_submodule_rows(cur)
        dims.append(rows.shape[0])
        if rows.shape[0] == 0:
            break
        cur, _ = submodule(cur, rows.T)
    return dims


def restrict(mod: Module, sub: Subalgebra) -> Module:
    """The restriction of an ambient-algebra module to a subalgebra."""
    mats = [mod.elem_mat(sub.embed(sub.algebra.basis_vec(j)))
            for j in range(sub.dim)]
    return Module(sub.algebra, mats)


class TensorSpace:
    """X (x)_C Y as a quotient of the full tensor product.

    X is a right C-module given as a left module over C^op; Y is a left
    C-module.  Supplies coordinates for pure tensors and the quotient maps.
    """

    def __init__(self, c_alg, x_right: Module, y_left: Module):
        f = c_alg.field
        self.f = f
        self.x = x_right
        self.y = y_left
        dx, dy = x_right.dim, y_left.dim
        self.full_dim = dx * dy
        eye_x = ex.eye(f, dx)
        eye_y = ex.eye(f, dy)
        rows = ex.zeros(f, 0, self.full_dim)
        # relation blocks are echelonized one generator at a time so that
        # only a single full-size block is ever resident
        for _, g in c_alg.generators:
            xc = x_right.elem_mat(g)  # right action of g on X
            cy = y_left.elem_mat(g)
            # column (i, j) is the relation (x_i.g)(x)y_j - x_i(x)(g.y_j)
            rel = np.kron(xc, eye_y) - np.kron(eye_x, cy)
            if f.is_prime_field:
                rel %= f.p
            rows = np.concatenate([rows, rel.T], axis=0)
            rows, _ = ex.row_echelon(f, rows)
        self.quo = ex.Quotient(f, self.full_dim, rows)
        self.section = self.quo.section()
        self.dim = self.section.shape[1]

    def project(self, full_cols):
        return self.quo.project(full_cols)

    def tensor_vec(self, xv, yv):
        full = np.kron(xv, yv)
        if self.f.is_prime_field:
            full %= self.f.p
        return self.project(full.reshape(-1, 1))[:, 0]


def tensor_over(c_alg, x_right: Module, y_left: Module) -> TensorSpace:
    return TensorSpace(c_alg, x_right, y_left)


def induce(alg: FDAlgebra, sub: Subalgebra, v: Module):
    """(A (x)_B V as a left A-module, tensor space, mu: A(x)V -> V map).

    v is a module over sub.algebra; the returned mu collapses a (x) m to
    a.m for the A-module structure on the source of the original module
    when v is a restriction; callers that only need the induced module and
    the unit section can ignore mu.
    """
    f = alg.field
    # A as a right B-module: left module over B^op, action b: a -> a.embed(b)
    bop_mats = [
        alg.right_mult_elem(sub.embed(sub.algebra.basis_vec(j)))
        for j in range(sub.dim)
    ]
    x = Module(opposite(sub.algebra), bop_mats)
    ts = TensorSpace(sub.algebra, x, v)
    # left A-action through the first factor
    eye_v = ex.eye(f, v.dim)
    mats = []
    for i in range(alg.dim):
        big = np.kron(alg.left_mult_mat(i), eye_v)
        if f.is_prime_field:
            big %= f.p
        mats.append(self_project(ts, big))
    return Module(alg, mats), ts


def self_project(ts: TensorSpace, big):
    """Induced map on the quotient from a map of the full tensor space."""
    return ts.project(ex.mm(ts.f, big, ts.section))


def unit_section(alg, ts: TensorSpace, v: Module):
    """The B-linear section m -> 1 (x) m of mu, as a (ts.dim x v.dim) matrix."""
    f = alg.field
    cols = []
    one = alg.unit()
    for j in range(v.dim):
        yv = ex.zeros(f, v.dim, 1)[:, 0]
        yv[j] = _one(f)
        cols.append(ts.tensor_vec(one, yv))
    return np.stack(cols, axis=1)
