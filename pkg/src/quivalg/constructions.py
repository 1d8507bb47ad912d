"""Algebra constructions: triangular matrix algebras, trivial extensions,
finite tensor algebras, and weakly-triangular instances with certified
relative-global-dimension bounds.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import exactlin as ex
from . import modcat as mc
from . import presentation as pr
from .algcore import AlgebraError, FDAlgebra, Subalgebra, TableAlgebra, \
    subalgebra_closure
from .bimod import Bimodule

__all__ = [
    "triangular_matrix_algebra",
    "trivial_extension",
    "tensor_algebra",
    "weakly_triangular_instance",
    "random_weakly_triangular",
    "WeaklyTriangularCertificate",
]


def _table_from_mult(f, n, mult_fn):
    if f.is_prime_field:
        table = np.zeros((n, n, n), dtype=np.int64)
    else:
        table = np.full((n, n, n), Fraction(0), dtype=object)
    for i in range(n):
        for j in range(n):
            table[i, j] = mult_fn(i, j)
    return table


def _unitvec(f, n, i):
    v = ex.zeros(f, n, 1)[:, 0]
    v[i] = mc._one(f)
    return v


def _check_rho(rho, m2: Bimodule, m1: Bimodule, m21: Bimodule):
    """rho : m2 (x)_bbar m1 -> m21 must be balanced and outer-equivariant."""
    f = m21.field
    eye2 = ex.eye(f, m2.dim)
    eye1 = ex.eye(f, m1.dim)
    bbar = m2.right_alg
    for j in range(bbar.dim):
        bal = np.kron(m2.rmats[j], eye1) - np.kron(eye2, m1.lmats[j])
        if f.is_prime_field:
            bal %= f.p
        if np.count_nonzero(ex.mm(f, rho, bal)):
            raise AlgebraError("rho is not balanced over the middle algebra")
    a2 = m2.left_alg
    for i in range(a2.dim):
        lhs = ex.mm(f, rho, np.kron(m2.lmats[i], eye1) % f.p
                    if f.is_prime_field else np.kron(m2.lmats[i], eye1))
        rhs = ex.mm(f, m21.lmats[i], rho)
        if not np.array_equal(lhs, rhs):
            raise AlgebraError("rho is not left-equivariant")
    a1 = m1.right_alg
    for j in range(a1.dim):
        big = np.kron(eye2, m1.rmats[j])
        if f.is_prime_field:
            big %= f.p
        lhs = ex.mm(f, rho, big)
        rhs = ex.mm(f, m21.rmats[j], rho)
        if not np.array_equal(lhs, rhs):
            raise AlgebraError("rho is not right-equivariant")


def triangular_matrix_algebra(a2: FDAlgebra, bbar: FDAlgebra, a1: FDAlgebra,
                              m2: Bimodule, m1: Bimodule, m21: Bimodule,
                              rho=None):
    """The 3x3 triangular matrix algebra

        [ a2   m2   m21 ]
        [ 0    bbar m1  ]
        [ 0    0    a1  ]

    with m2 an (a2,bbar)-bimodule, m1 a (bbar,a1)-bimodule, m21 an
    (a2,a1)-bimodule and rho : m2 (x)_bbar m1 -> m21 a bimodule map
    (the matrix of rho on pure-tensor coordinates; zero if omitted).
    Returns (algebra, subalgebra) where the subalgebra is bbar + span{E}
    with E the sum of the two outer corner units.
    """
    f = a2.field
    dims = [a2.dim, bbar.dim, a1.dim, m2.dim, m1.dim, m21.dim]
    off = np.cumsum([0] + dims)
    n = int(off[-1])
    if rho is None:
        rho = ex.zeros(f, m21.dim, m2.dim * m1.dim)
    rho = np.asarray(rho)
    _check_rho(rho, m2, m1, m21)

    def block_of(i):
        for b in range(6):
            if off[b] <= i < off[b + 1]:
                return b, i - off[b]
        raise IndexError

    def put(block, vec):
        out = ex.zeros(f, n, 1)[:, 0]
        out[off[block]:off[block + 1]] = vec
        return out

    algs = [a2, bbar, a1]

    def mult_fn(i, j):
        bi, li = block_of(i)
        bj, lj = block_of(j)
        zero = ex.zeros(f, n, 1)[:, 0]
        if bi < 3 and bj < 3:
            return put(bi, algs[bi].mult_basis(li, lj)) if bi == bj else zero
        if bi == 0 and bj == 3:  # a2 . m2
            return put(3, m2.lmats[li][:, lj])
        if bi == 3 and bj == 1:  # m2 . bbar
            return put(3, m2.rmats[lj][:, li])
        if bi == 1 and bj == 4:  # bbar . m1
            return put(4, m1.lmats[li][:, lj])
        if bi == 4 and bj == 2:  # m1 . a1
            return put(4, m1.rmats[lj][:, li])
        if bi == 0 and bj == 5:  # a2 . m21
            return put(5, m21.lmats[li][:, lj])
        if bi == 5 and bj == 2:  # m21 . a1
            return put(5, m21.rmats[lj][:, li])
        if bi == 3 and bj == 4:  # m2 . m1 via rho
            return put(5, rho[:, li * m1.dim + lj])
        return zero

    table = _table_from_mult(f, n, mult_fn)
    unit = ex.zeros(f, n, 1)[:, 0]
    for b, alg in enumerate(algs):
        unit[off[b]:off[b + 1]] = alg.unit()
    idems = []
    for b, alg in enumerate(algs):
        for e in alg.idempotents:
            idems.append(put(b, e))
    labels = []
    tags = ["t", "m", "b", "u2", "u1", "u21"]
    for b in range(3):
        labels += [f"{tags[b]}.{lab}" for lab in getattr(
            algs[b], "labels", [str(k) for k in range(dims[b])])]
    for b in range(3, 6):
        labels += [f"{tags[b]}.{k}" for k in range(dims[b])]
    alg = TableAlgebra(f, labels, table, unit, idems)
    corner = ex.zeros(f, n, 1)[:, 0]
    corner[off[0]:off[1]] = a2.unit()
    corner[off[2]:off[3]] = a1.unit()
    gens = [put(1, bbar.basis_vec(k)) for k in range(bbar.dim)] + [corner]
    return alg, subalgebra_closure(alg, gens)


def trivial_extension(b: FDAlgebra, m: Bimodule):
    """The trivial extension b + m with m.m = 0; returns (algebra, subalgebra)."""
    f = b.field
    n = b.dim + m.dim

    def mult_fn(i, j):
        out = ex.zeros(f, n, 1)[:, 0]
        if i < b.dim and j < b.dim:
            out[: b.dim] = b.mult_basis(i, j)
        elif i < b.dim:
            out[b.dim:] = m.lmats[i][:, j - b.dim]
        elif j < b.dim:
            out[b.dim:] = m.rmats[j][:, i - b.dim]
        return out

    table = _table_from_mult(f, n, mult_fn)
    unit = ex.zeros(f, n, 1)[:, 0]
    unit[: b.dim] = b.unit()
    idems = []
    for e in b.idempotents:
        v = ex.zeros(f, n, 1)[:, 0]
        v[: b.dim] = e
        idems.append(v)
    labels = [f"b.{lab}" for lab in getattr(
        b, "labels", [str(k) for k in range(b.dim)])]
    labels += [f"m.{k}" for k in range(m.dim)]
    alg = TableAlgebra(f, labels, table, unit, idems)
    embedded = []
    for k in range(b.dim):
        v = ex.zeros(f, n, 1)[:, 0]
        v[k] = mc._one(f)
        embedded.append(v)
    return alg, subalgebra_closure(alg, embedded)


def tensor_algebra(b: FDAlgebra, m: Bimodule, power_cap=8) -> TableAlgebra:
    """The finite tensor algebra b + m + m(x)_b m + ...; requires some tensor
    power of m over b to vanish within power_cap steps."""
    f = b.field
    mr = m.as_right_module()
    levels = []  # per power q >= 1: (dim, lmats-over-b, section, prev_dim)
    cur = m.as_left_module()
    cur_l = [mat.copy() for mat in m.lmats]
    cur_r = [mat.copy() for mat in m.rmats]
    levels.append({"dim": m.dim, "l": cur_l, "r": cur_r, "ts": None})
    while levels[-1]["dim"] > 0:
        if len(levels) >= power_cap:
            raise AlgebraError(
                f"tensor powers do not vanish within power_cap={power_cap}")
        prev = levels[-1]
        prev_mod = mc.Module(b, prev["l"])
        ts = mc.tensor_over(b, mr, prev_mod)
        eye_prev = ex.eye(f, prev["dim"])
        lmats = []
        rmats = []
        for i in range(b.dim):
            big = np.kron(m.lmats[i], eye_prev)
            if f.is_prime_field:
                big %= f.p
            lmats.append(mc.self_project(ts, big))
            big = np.kron(ex.eye(f, m.dim), prev["r"][i])
            if f.is_prime_field:
                big %= f.p
            rmats.append(mc.self_project(ts, big))
        levels.append({"dim": ts.dim, "l": lmats, "r": rmats, "ts": ts})
    n0 = len(levels)  # levels[q-1] is power q; last level is zero
    dims = [b.dim] + [lv["dim"] for lv in levels]
    off = np.cumsum([0] + dims)
    n = int(off[-1])

    def level_mult(qi, u, qj, v):
        """Product of u in power qi with v in power qj (qi, qj >= 1)."""
        q = qi + qj
        if q > n0 or levels[q - 1]["dim"] == 0:
            return ex.zeros(f, 0, 1)[:, 0] if q > n0 else ex.zeros(
                f, levels[q - 1]["dim"], 1)[:, 0]
        if qi == 1:
            ts = levels[q - 1]["ts"]
            full = np.kron(u, v)
            if f.is_prime_field:
                full %= f.p
            return ts.project(full.reshape(-1, 1))[:, 0]
        sec = levels[qi - 1]["ts"].section
        peeled = ex.mm(f, sec, u.reshape(-1, 1))[:, 0]
        spread = peeled.reshape(m.dim, levels[qi - 2]["dim"])
        out = ex.zeros(f, levels[q - 1]["dim"], 1)[:, 0]
        ts = levels[q - 1]["ts"]
        for k in range(m.dim):
            w = spread[k]
            if not np.count_nonzero(w):
                continue
            t = level_mult(qi - 1, w, qj, v)
            full = np.kron(_unitvec(f, m.dim, k), t)
            if f.is_prime_field:
                full %= f.p
            out = out + ts.project(full.reshape(-1, 1))[:, 0]
        return out % f.p if f.is_prime_field else out

    def mult_fn(i, j):
        out = ex.zeros(f, n, 1)[:, 0]
        qi = int(np.searchsorted(off, i, side="right")) - 1
        qj = int(np.searchsorted(off, j, side="right")) - 1
        li, lj = i - off[qi], j - off[qj]
        if qi == 0 and qj == 0:
            out[: b.dim] = b.mult_basis(li, lj)
        elif qi == 0:
            out[off[qj]:off[qj + 1]] = levels[qj - 1]["l"][li][:, lj]
        elif qj == 0:
            out[off[qi]:off[qi + 1]] = levels[qi - 1]["r"][lj][:, li]
        else:
            q = qi + qj
            if q <= n0 and levels[q - 1]["dim"] > 0:
                out[off[q]:off[q + 1]] = level_mult(
                    qi, _unitvec(f, levels[qi - 1]["dim"], li), qj,
                    _unitvec(f, levels[qj - 1]["dim"], lj))
        return out

    table = _table_from_mult(f, n, mult_fn)
    unit = ex.zeros(f, n, 1)[:, 0]
    unit[: b.dim] = b.unit()
    idems = []
    for e in b.idempotents:
        v = ex.zeros(f, n, 1)[:, 0]
        v[: b.dim] = e
        idems.append(v)
    labels = [f"p0.{lab}" for lab in getattr(
        b, "labels", [str(k) for k in range(b.dim)])]
    for q in range(1, n0 + 1):
        labels += [f"p{q}.{k}" for k in range(dims[q])]
    return TableAlgebra(f, labels, table, unit, idems)


class WeaklyTriangularCertificate:
    """Mechanically checked input conditions plus the resulting bounds."""

    def __init__(self, parts, checks):
        self.parts = parts
        self.bound = parts - 1
        self.enveloping_bound = 2 * parts - 2
        self.checks = checks


def weakly_triangular_instance(pres: pr.Presentation, partition):
    """Build (algebra, subalgebra, certificate) from a presentation whose
    quiver admits a vertex partition V_1..V_n with arrows only inside parts
    (loops) or from higher parts to lower ones, and whose SUBALGEBRA section
    lists the vertices and arrows of a generating quiver R.

    Checks, mechanically: the partition conditions; that each idempotent
    generator is a sum of distinct vertices; that each arrow generator has a
    unique start per start vertex and a unique end per end vertex; and that
    every loop of the quiver lies in e.B for its vertex e.  The certificate
    records the bound n-1 on the relative global dimension (and 2n-2 for the
    enveloping extension).
    """
    q = pres.quiver
    flat = [v for part in partition for v in part]
    if sorted(flat) != sorted(q.vertices) or len(flat) != len(set(flat)):
        raise AlgebraError("partition does not partition the vertex set")
    pidx = {}
    for k, part in enumerate(partition):
        for v in part:
            pidx[v] = k
    checks = []
    for name, s, t in q.arrows:
        if pidx[s] < pidx[t]:
            raise AlgebraError(
                f"clause 1 violated: arrow {name} goes from part "
                f"{pidx[s] + 1} to higher part {pidx[t] + 1}")
        if pidx[s] == pidx[t] and s != t:
            raise AlgebraError(
                f"clause 2 violated: arrow {name} joins distinct vertices "
                f"inside part {pidx[s] + 1}")
    checks.append("partition-clauses-1-2")

    if not pres.subalgebra:
        raise AlgebraError("no subalgebra generators given")
    for terms in pres.subalgebra:
        stationary = [term for term in terms if term[1][0] == "E"]
        moving = [term for term in terms if term[1][0] != "E"]
        if stationary and moving:
            raise AlgebraError(
                "generator mixes vertices and arrows; not an element of a "
                "generating quiver")
        if stationary:
            verts = [term[1][1] for term in stationary]
            coeffs = [term[0] for term in stationary]
            if len(set(verts)) != len(verts) or any(
                    c != mc._one(pres.field) and c != 1 for c in coeffs):
                raise AlgebraError(
                    "idempotent generator is not a sum of distinct vertices")
        else:
            by_src = {}
            by_tgt = {}
            for c, w, s, t in moving:
                by_src.setdefault(s, set()).add(t)
                by_tgt.setdefault(t, set()).add(s)
            for e, tgts in by_src.items():
                if len(tgts) > 1:
                    raise AlgebraError(
                        f"arrow generator has no unique end point from {e}")
            for e, srcs in by_tgt.items():
                if len(srcs) > 1:
                    raise AlgebraError(
                        f"arrow generator has no unique start point into {e}")
    checks.append("generating-quiver-clauses-i-ii")

    alg = pr.build_algebra(pres)
    sub = subalgebra_closure(alg, pr.subalgebra_elements(alg))
    f = alg.field
    for name, s, t in q.arrows:
        if s != t:
            continue
        gamma = alg.basis_vec(alg.basis_words.index((name,)))
        e = alg.idempotents[q.vindex[s]]
        cols = ex.mm(f, alg.left_mult_elem(e), sub.inclusion)
        if ex.solve(f, cols, gamma) is None:
            raise AlgebraError(
                f"loop clause violated: loop {name} is not of the form e.b "
                f"with b in the subalgebra")
    checks.append("loops-in-subalgebra")
    return alg, sub, WeaklyTriangularCertificate(len(partition), checks)


def random_weakly_triangular(rng, max_parts=4, field="101", dim_cap=22):
    """A random presentation + partition accepted by weakly_triangular_instance.

    Returns (presentation, partition).  Arrows run from higher parts to lower
    ones, loops are squared to zero, and the generating quiver R consists of
    sums of vertices, every loop, and a random selection of single arrows.
    Presentations whose algebra would exceed dim_cap are resampled with more
    relations, keeping the instances small enough for full test-set runs.
    """
    while True:
        pres, partition = _sample_weakly_triangular(rng, max_parts, field)
        alg = pr.build_algebra(pres)
        if alg.dim <= dim_cap:
            return pres, partition


def _sample_weakly_triangular(rng, max_parts, field):
    n_parts = int(rng.integers(1, max_parts + 1))
    partition = []
    names = []
    v = 0
    for _ in range(n_parts):
        part = []
        for _ in range(int(rng.integers(1, 3))):
            v += 1
            part.append(str(v))
            names.append(str(v))
        partition.append(part)
    arrows = []
    loops = []
    k = 0
    for vert in names:
        if rng.random() < 0.4:
            k += 1
            arrows.append((f"l{k}", vert, vert))
            loops.append(f"l{k}")
    for hi in range(1, n_parts):
        for s in partition[hi]:
            for lo in range(hi):
                for t in partition[lo]:
                    if rng.random() < 0.4:
                        k += 1
                        arrows.append((f"a{k}", s, t))
    lines = [f"FIELD {field}", "VERTICES " + " ".join(names), "ARROWS"]
    for name, s, t in arrows:
        lines.append(f"  {name}: {s} -> {t}")
    rel_lines = [f"  {l}*{l}" for l in loops]
    # random extra monomial relations between composable arrows
    comp = [(a, b) for a, _, t1 in arrows for b, s2, _ in arrows
            if t1 == s2 and a != b]
    for a, b in comp:
        if rng.random() < 0.5:
            rel_lines.append(f"  {b}*{a}")
    if rel_lines:
        lines.append("RELATIONS")
        lines += sorted(set(rel_lines))
    lines.append("SUBALGEBRA")
    # R-vertices: a random coarsening of the vertex set into sums
    shuffled = list(names)
    rng.shuffle(shuffled)
    groups = []
    i = 0
    while i < len(shuffled):
        size = int(rng.integers(1, 3))
        groups.append(shuffled[i:i + size])
        i += size
    for g in groups:
        lines.append("  " + " + ".join(f"e_{vert}" for vert in sorted(g)))
    for l in loops:
        lines.append(f"  {l}")
    for name, s, t in arrows:
        if s != t and rng.random() < 0.4:
            lines.append(f"  {name}")
    pres = pr.parse_presentation("\n".join(lines) + "\n")
    return pres, partition
