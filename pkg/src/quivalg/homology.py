"""Resolutions, projective dimension, Tor, and Hochschild homology.

Projective dimensions come with three-way verdicts: finite (with the
value), infinite (with a syzygy-periodicity witness), or unknown when the
cutoff was reached without either certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactlin as ex
from . import modcat as mc
from .algcore import AlgebraError, CapExceeded, EnvelopingPair, FDAlgebra, enveloping

__all__ = [
    "PdResult",
    "MinimalResolution",
    "minimal_resolution",
    "projective_dimension",
    "global_dimension",
    "chain_homology_dims",
    "tor_dims",
    "bimodule_of",
    "right_module_over_env",
    "hochschild",
    "bar_hochschild",
    "bar_complex",
    "hochschild_tower",
    "DEFAULT_DMAX",
    "DEFAULT_NMAX",
    "BAR_DIM_CAP",
]

DEFAULT_DMAX = 12
DEFAULT_NMAX = 6
BAR_DIM_CAP = 2_000_000
BAR_ENTRY_CAP = 200_000_000  # largest single bar differential, in entries


@dataclass
class PdResult:
    kind: str  # "finite" | "infinite" | "unknown"
    value: int | None = None
    witness: dict | None = None

    @property
    def is_finite(self):
        return self.kind == "finite"

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        return self.kind


class MinimalResolution:
    """... -> P_1 -> P_0 -> M -> 0 with projective covers at every step.

    steps[q] = (P_q, cover map P_q -> K_{q-1}, summand idempotent indices);
    syzygies[q] = (K_q, inclusion of K_q into P_q), with K_{-1} = M.
    """

    def __init__(self, module: mc.Module, dmax: int, dim_cap=None):
        self.module = module
        self.steps = []
        self.syzygies = []
        self.complete = False  # True when some syzygy is zero
        self.truncated = False  # True when a syzygy outgrew dim_cap
        cur = module
        for _ in range(dmax + 1):
            if dim_cap is not None and cur.dim > dim_cap:
                self.truncated = True
                break
            p, cover, summands = mc.projective_cover(cur)
            self.steps.append((p, cover, summands))
            ker, incl = mc.kernel_of_map(cover)
            self.syzygies.append((ker, incl))
            if ker.dim == 0:
                self.complete = True
                break
            cur = ker

    @property
    def length(self):
        return len(self.steps)

    def differential(self, q):
        """Matrix of P_q -> P_{q-1} (q >= 1), or the augmentation for q=0."""
        if q == 0:
            return self.steps[0][1].mat
        _, cover, _ = self.steps[q]
        _, incl = self.syzygies[q - 1]
        return ex.mm(self.module.field, incl, cover.mat)

    def pd_if_complete(self):
        if not self.complete:
            return None
        # K_q = 0 means pd <= q; minimality gives equality unless P_q = 0
        q = len(self.steps) - 1
        while q >= 0 and self.steps[q][0].dim == 0:
            q -= 1
        return q if q >= 0 else 0


RES_DIM_CAP = 600


def minimal_resolution(module: mc.Module, dmax=DEFAULT_DMAX,
                       dim_cap=RES_DIM_CAP) -> MinimalResolution:
    return MinimalResolution(module, dmax, dim_cap=dim_cap)


def _periodicity_witness(syzygies, projective_test=None):
    """Look for K_i ~ K_j (i < j); returns a witness dict or None.

    If every syzygy in the repeating window fails projective_test (default:
    nonzero syzygies of a minimal resolution are never projective), the
    dimension is infinite.
    """
    mods = [k for k, _ in syzygies if k.dim > 0]
    n = len(mods)
    for i in range(n):
        for j in range(i + 1, n):
            ok, iso = mc.is_isomorphic(mods[i], mods[j])
            if ok:
                if projective_test is not None:
                    if any(projective_test(mods[t]) for t in range(i, j)):
                        return None
                return {"i": i, "j": j, "iso": iso}
    return None


def projective_dimension(module: mc.Module, dmax=DEFAULT_DMAX) -> PdResult:
    if module.dim == 0:
        return PdResult("finite", 0)
    res = minimal_resolution(module, dmax)
    if res.complete:
        return PdResult("finite", res.pd_if_complete())
    wit = _periodicity_witness(res.syzygies)
    if wit is not None:
        return PdResult("infinite", witness=wit)
    return PdResult("unknown")


def global_dimension(alg: FDAlgebra, dmax=DEFAULT_DMAX) -> PdResult:
    """Left global dimension as the maximum over pd of the simples."""
    best = 0
    unknown = False
    for _, simple, _ in mc.simples_and_projectives(alg):
        r = projective_dimension(simple, dmax)
        if r.kind == "infinite":
            return PdResult("infinite", witness=r.witness)
        if r.kind == "unknown":
            unknown = True
        else:
            best = max(best, r.value)
    if unknown:
        return PdResult("unknown")
    return PdResult("finite", best)


def chain_homology_dims(field, diffs, dims):
    """Homology dimensions of a chain complex.

    dims[q] is the dimension of C_q; diffs[q] is the matrix of
    d_q : C_q -> C_{q-1} for q >= 1 (diffs[0] unused / may be None).
    """
    ranks = [0] * (len(dims) + 1)
    for q in range(1, len(dims)):
        ranks[q] = int(ex.rank(field, diffs[q])) if diffs[q] is not None else 0
    out = []
    for q in range(len(dims) - 1):
        out.append(dims[q] - ranks[q] - ranks[q + 1])
    return out


def tor_dims(c_alg, x_right: mc.Module, y_left: mc.Module, nmax=DEFAULT_NMAX,
             dmax=None):
    """dim Tor_q^C(X, Y) for q = 0..nmax via a minimal resolution of Y."""
    f = c_alg.field
    if dmax is None:
        dmax = nmax + 1
    res = minimal_resolution(y_left, max(dmax, nmax + 1))
    spaces = []
    diffs = [None]
    upto = min(nmax + 2, res.length)
    tspaces = []
    for q in range(upto):
        p = res.steps[q][0]
        tspaces.append(mc.tensor_over(c_alg, x_right, p))
    for q in range(upto):
        spaces.append(tspaces[q].dim)
        if q >= 1:
            d = res.differential(q)
            # induced map X (x) P_q -> X (x) P_{q-1}
            full = np.kron(ex.eye(f, x_right.dim), d)
            if f.is_prime_field:
                full %= f.p
            ind = tspaces[q - 1].project(
                ex.mm(f, full, tspaces[q].section)
            )
            diffs.append(ind)
    if res.complete and res.length <= nmax + 1:
        # pad with zero groups beyond the end of the resolution
        while len(spaces) < nmax + 2:
            spaces.append(0)
            diffs.append(ex.zeros(f, spaces[-2], 0))
    else:
        if len(spaces) < nmax + 2:
            raise CapExceeded("resolution cutoff reached inside tor")
    h = chain_homology_dims(f, diffs, spaces)
    return h[: nmax + 1]


def bimodule_of(alg: FDAlgebra, env: EnvelopingPair | None = None) -> mc.Module:
    """A as a left module over A^e."""
    if env is None:
        env = enveloping(alg)
    mats = []
    for k in range(env.dim):
        i, j = env.unpair(k)
        li = alg.left_mult_mat(i)
        rj = alg.right_mult_mat(j)
        mats.append(ex.mm(alg.field, li, rj))
    return mc.Module(env, mats)


def right_module_over_env(alg: FDAlgebra, env: EnvelopingPair) -> mc.Module:
    """A as a right A^e-module: a . (x (x) y) = y a x."""
    mats = []
    for k in range(env.dim):
        i, j = env.unpair(k)
        ri = alg.right_mult_mat(i)
        lj = alg.left_mult_mat(j)
        mats.append(ex.mm(alg.field, lj, ri))
    return mc.Module(env, mats)


def hochschild(alg: FDAlgebra, nmax=DEFAULT_NMAX, env_cap=None):
    """dim HH_q(A) for q = 0..nmax, as Tor over the enveloping algebra."""
    kw = {} if env_cap is None else {"cap": env_cap}
    env = enveloping(alg, **kw)
    x = right_module_over_env(alg, env)
    y = bimodule_of(alg, env)
    return tor_dims(env, x, y, nmax=nmax)


# ---------------------------------------------------------------------------
# bar-complex oracle


def _bar_mats(alg, lmats, rmats):
    n = alg.dim
    if lmats is None:
        lmats = [alg.left_mult_mat(i) for i in range(n)]
    if rmats is None:
        rmats = [alg.right_mult_mat(i) for i in range(n)]
    return lmats, rmats


def bar_differential(alg: FDAlgebra, q, lmats, rmats):
    """Matrix of d_q : C_q -> C_{q-1} of the bar complex of a bimodule X.

    C_q = X (x) A^{(x) q}; d(m,a1..aq) = (m.a1, a2..aq)
    + sum (-1)^i (m, a1, .., a_i a_{i+1}, .., aq) + (-1)^q (aq.m, a1..a_{q-1}).
    """
    f = alg.field
    n = alg.dim
    dx = lmats[0].shape[0]
    rows, cols = dx * n ** (q - 1), dx * n**q
    dq = ex.zeros(f, rows, cols)
    for idx in range(cols):
        rest = idx
        word = []
        for _ in range(q):
            word.append(rest % n)
            rest //= n
        word.reverse()  # a1..aq
        m = rest
        col = ex.zeros(f, rows, 1)[:, 0]
        # face 0: (m.a1, a2..aq)
        tail = 0
        for a in word[1:]:
            tail = tail * n + a
        mv = rmats[word[0]][:, m]
        for mm_i in np.nonzero(mv)[0]:
            col[int(mm_i) * n ** (q - 1) + tail] += mv[mm_i]
        # middle faces
        sign = 1
        for i in range(1, q):
            sign = -sign
            prod = alg.mult_basis(word[i - 1], word[i])
            for b in np.nonzero(prod)[0]:
                neww = word[: i - 1] + [int(b)] + word[i + 1 :]
                t = m
                for a in neww:
                    t = t * n + a
                col[t] += sign * prod[b]
        # last face: (aq.m, a1..a_{q-1})
        sign = (-1) ** q
        mv = lmats[word[-1]][:, m]
        tail = 0
        for a in word[:-1]:
            tail = tail * n + a
        for mm_i in np.nonzero(mv)[0]:
            col[int(mm_i) * n ** (q - 1) + tail] += sign * mv[mm_i]
        if f.is_prime_field:
            col %= f.p
        dq[:, idx] = col
    return dq


def bar_complex(alg: FDAlgebra, nmax, lmats=None, rmats=None, cap=BAR_DIM_CAP):
    """(dims, diffs) of the bar complex; holds all differentials at once.

    Use bar_hochschild for plain dimension lists: it streams and needs far
    less memory.
    """
    f = alg.field
    n = alg.dim
    lmats, rmats = _bar_mats(alg, lmats, rmats)
    dx = lmats[0].shape[0]
    dims = [dx * n**q for q in range(nmax + 2)]
    if max(dims) > cap:
        raise CapExceeded(f"bar complex dimension {max(dims)} exceeds cap {cap}")
    entries = max(dims[q - 1] * dims[q] for q in range(1, nmax + 2))
    if entries > BAR_ENTRY_CAP:
        raise CapExceeded(
            f"bar differential would hold {entries} entries "
            f"(cap {BAR_ENTRY_CAP})")
    diffs = [None]
    for q in range(1, nmax + 2):
        diffs.append(bar_differential(alg, q, lmats, rmats))
    return dims, diffs


def bar_hochschild(alg: FDAlgebra, nmax=DEFAULT_NMAX, lmats=None, rmats=None,
                   cap=BAR_DIM_CAP):
    """dim HH_q via the explicit bar complex (independent oracle).

    Differentials are built and eliminated one at a time to keep only a
    single bar matrix in memory.
    """
    f = alg.field
    n = alg.dim
    lmats, rmats = _bar_mats(alg, lmats, rmats)
    dx = lmats[0].shape[0]
    dims = [dx * n**q for q in range(nmax + 2)]
    if max(dims) > cap:
        raise CapExceeded(f"bar complex dimension {max(dims)} exceeds cap {cap}")
    entries = max(dims[q - 1] * dims[q] for q in range(1, nmax + 2))
    if entries > BAR_ENTRY_CAP:
        raise CapExceeded(
            f"bar differential would hold {entries} entries "
            f"(cap {BAR_ENTRY_CAP})")
    ranks = [0]
    for q in range(1, nmax + 2):
        dq = bar_differential(alg, q, lmats, rmats)
        ranks.append(int(ex.rank(f, dq)))
        del dq
    return [dims[q] - ranks[q] - ranks[q + 1] for q in range(nmax + 1)]


def _homology_reps(f, diffs, dims, q):
    """(cycle basis Z, boundary matrix B) at degree q."""
    if q == 0:
        z = ex.eye(f, dims[0])
    else:
        z = ex.nullspace(f, diffs[q])
    b = diffs[q + 1] if q + 1 < len(diffs) and diffs[q + 1] is not None else (
        ex.zeros(f, dims[q], 0)
    )
    return z, b


def induced_homology_rank(f, src, tgt, chain_map, q):
    """Rank of the map induced on H_q by a chain map.

    src/tgt are (dims, diffs) pairs; chain_map[q] maps C_q(src) -> C_q(tgt).
    """
    sdims, sdiffs = src
    tdims, tdiffs = tgt
    zs, bs = _homology_reps(f, sdiffs, sdims, q)
    zt, bt = _homology_reps(f, tdiffs, tdims, q)
    img = ex.mm(f, chain_map[q], zs)
    # rank of img modulo (boundaries of target), minus nothing: the induced
    # rank is rank([img | bt]) - rank(bt)
    both = np.concatenate([img, bt], axis=1)
    return int(ex.rank(f, both) - ex.rank(f, bt))


def hochschild_tower(build_truncated, truncations, nmax=DEFAULT_NMAX,
                     cap=BAR_DIM_CAP):
    """HH dims along a tower of truncations, with comparison map ranks.

    build_truncated(m) must return (algebra, surjection matrix to the
    previous truncation or None).  Returns a list of entries
    {"m": m, "hh": [...], "comparison_ranks": [...] or None}.
    """
    out = []
    prev = None
    for m in truncations:
        alg, surj = build_truncated(m)
        dims, diffs = bar_complex(alg, nmax, cap=cap)
        hh = chain_homology_dims(alg.field, diffs, dims)[: nmax + 1]
        entry = {"m": m, "hh": hh, "comparison_ranks": None}
        if prev is not None and surj is not None:
            palg, pdims, pdiffs = prev
            f = alg.field
            cmaps = []
            for q in range(nmax + 1):
                cm = _bar_map_from_algebra_map(f, alg, palg, surj, q)
                cmaps.append(cm)
            ranks = [
                induced_homology_rank(
                    f, (dims, diffs), (pdims, pdiffs), cmaps, q
                )
                for q in range(nmax + 1)
            ]
            entry["comparison_ranks"] = ranks
        out.append(entry)
        prev = (alg, dims, diffs)
    return out


def _bar_map_from_algebra_map(f, src_alg, tgt_alg, phi, q):
    """C_q(src) -> C_q(tgt) applying an algebra map phi slotwise."""
    n, m = src_alg.dim, tgt_alg.dim
    mats = [phi] * (q + 1)
    out = mats[0]
    for mat in mats[1:]:
        out = np.kron(out, mat)
        if f.is_prime_field:
            out %= f.p
    return out
