"""Exact dense linear algebra over a prime field or the rationals.

Everything downstream (ranks of differentials, kernels of multiplication
maps, splitting systems) reduces to the routines in this module.  Over a
prime field matrices are numpy int64 arrays with entries in [0, p); over
the rationals they are numpy object arrays of Fraction.  No floating point
result ever leaves this module: float64 BLAS is used internally only where
the products provably fit in the 2**53 integer window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "FieldSpec",
    "GF101",
    "QQ",
    "zeros",
    "eye",
    "as_matrix",
    "mm",
    "rref",
    "row_echelon",
    "nullspace",
    "rank",
    "solve",
    "solve_many",
    "image_basis",
    "Quotient",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: GF(p) for prime p, or the rationals when p is None."""

    p: int | None = 101

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def inv(self, x):
        if self.p is None:
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / x
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def __str__(self):
        return "Q" if self.p is None else f"GF({self.p})"


GF101 = FieldSpec(101)
QQ = FieldSpec(None)


def zeros(field: FieldSpec, r: int, c: int):
    if field.is_prime_field:
        return np.zeros((r, c), dtype=np.int64)
    m = np.empty((r, c), dtype=object)
    m[:] = Fraction(0)
    return m


def eye(field: FieldSpec, n: int):
    m = zeros(field, n, n)
    for i in range(n):
        m[i, i] = 1 if field.is_prime_field else Fraction(1)
    return m


def as_matrix(field: FieldSpec, rows):
    """Build a matrix from nested sequences of ints / Fractions."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if field.is_prime_field:
        p = field.p
        out = np.zeros(arr.shape, dtype=np.int64)
        for idx, v in np.ndenumerate(arr):
            if isinstance(v, Fraction):
                out[idx] = v.numerator * field.inv(v.denominator % p) % p
            else:
                out[idx] = int(v) % p
        return out
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


# ---------------------------------------------------------------------------
# multiplication

# K * (p-1)^2 must stay below 2^53 for the float64 product to be exact.
_F64_SAFE = 2**53


def mm(field: FieldSpec, a, b):
    """Exact matrix product."""
    if not field.is_prime_field:
        if a.shape[1] == 0:
            return zeros(field, a.shape[0], b.shape[1])
        return a @ b
    p = field.p
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, _F64_SAFE // ((p - 1) ** 2))
    if k <= step:
        return ((a.astype(np.float64) @ b.astype(np.float64)) % p).astype(np.int64)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        e = min(k, s + step)
        acc += ((a[:, s:e].astype(np.float64) @ b[s:e].astype(np.float64)) % p).astype(
            np.int64
        )
        acc %= p
    return acc


# ---------------------------------------------------------------------------
# elimination

_PANEL = 96


def _echelon_gf(a: np.ndarray, p: int):
    """Forward elimination mod p, blocked so trailing updates run on BLAS.

    Returns (matrix in row echelon form, pivot column list).  Pivoting rule:
    leftmost nonzero column, first available row, so results are
    deterministic.  Within a panel of columns the elimination touches panel
    entries only, recording multipliers; the columns right of the panel are
    then fixed with a single exact matrix product.
    """
    a = (a % p).astype(np.int64, copy=True)
    fld = FieldSpec(p)
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    c = 0
    while r < m and c < n:
        w = min(_PANEL, n - c)
        panel = a[r:, c : c + w]  # view into a
        nb = m - r
        M = np.zeros((nb, min(w, nb)), dtype=np.int64)  # multipliers, row-aligned
        invs: list[int] = []
        local_pivots: list[int] = []
        rr = 0
        for lc in range(w):
            nz = np.nonzero(panel[rr:, lc])[0]
            if nz.size == 0:
                continue
            i = rr + int(nz[0])
            if i != rr:
                a[[r + rr, r + i]] = a[[r + i, r + rr]]
                M[[rr, i]] = M[[i, rr]]
            inv = pow(int(panel[rr, lc]), p - 2, p)
            panel[rr, lc:] = panel[rr, lc:] * inv % p
            j = len(local_pivots)
            M[rr + 1 :, j] = panel[rr + 1 :, lc]
            if rr + 1 < nb:
                panel[rr + 1 :, lc:] = (
                    panel[rr + 1 :, lc:] - np.outer(M[rr + 1 :, j], panel[rr, lc:])
                ) % p
            invs.append(inv)
            local_pivots.append(lc)
            rr += 1
            if rr >= nb:
                break
        k = len(local_pivots)
        if k:
            tail = a[r:, c + w :]
            if tail.shape[1]:
                # process the tail in column chunks to bound temporaries
                chunk = max(1024, 60_000_000 // max(nb, 1))
                for c0 in range(0, tail.shape[1], chunk):
                    seg = tail[:, c0 : c0 + chunk]
                    # pivot rows: scale, subtract earlier panel pivot rows
                    for j in range(k):
                        seg[j] = seg[j] * invs[j] % p
                        if j:
                            corr = mm(fld, M[j : j + 1, :j], seg[:j])[0]
                            seg[j] = (seg[j] - corr * invs[j]) % p
                    if k < nb:
                        seg[k:] = (seg[k:] - mm(fld, M[k:, :k], seg[:k])) % p
            pivots.extend(c + lp for lp in local_pivots)
            r += k
        c += w
    return a, pivots


def _echelon_qq(a: np.ndarray):
    a = a.copy()
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(r + 1, m):
            if a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def _back_substitute(field: FieldSpec, a, pivots):
    """Clear entries above each pivot (a is in echelon form)."""
    if not pivots:
        return a
    if field.is_prime_field:
        p = field.p
        for j in range(len(pivots) - 1, 0, -1):
            c = pivots[j]
            col = a[:j, c].copy()
            if np.any(col):
                a[:j] = (a[:j] - np.outer(col, a[j])) % p
    else:
        for j in range(len(pivots) - 1, -1, -1):
            c = pivots[j]
            for i in range(j):
                if a[i, c] != 0:
                    a[i] = a[i] - a[i, c] * a[j]
    return a


def row_echelon(field: FieldSpec, a, reduced: bool = True):
    """Return (rows, pivots): nonzero rows of the (reduced) echelon form."""
    if a.shape[0] == 0 or a.shape[1] == 0:
        return zeros(field, 0, a.shape[1]), []
    if field.is_prime_field:
        e, pivots = _echelon_gf(a, field.p)
    else:
        e, pivots = _echelon_qq(a)
    e = e[: len(pivots)]
    if reduced:
        e = _back_substitute(field, e, pivots)
    return e, pivots


def rank(field: FieldSpec, a) -> int:
    return len(row_echelon(field, a, reduced=False)[1])


def nullspace(field: FieldSpec, a):
    """Columns spanning the right kernel of a, echelonized deterministically."""
    n = a.shape[1]
    e, pivots = row_echelon(field, a, reduced=True)
    free = [c for c in range(n) if c not in set(pivots)]
    ker = zeros(field, n, len(free))
    one = 1 if field.is_prime_field else Fraction(1)
    for idx, f in enumerate(free):
        ker[f, idx] = one
        for j, c in enumerate(pivots):
            v = e[j, f]
            if field.is_prime_field:
                ker[c, idx] = (-int(v)) % field.p
            else:
                ker[c, idx] = -v
    return ker


def rref(field: FieldSpec, a):
    """Spec surface: (rank, kernel_basis columns, pivot column indices)."""
    e, pivots = row_echelon(field, a, reduced=True)
    return len(pivots), nullspace(field, a), list(pivots)


def image_basis(field: FieldSpec, a):
    """Echelonized basis (rows) of the column space of a."""
    return row_echelon(field, a.T, reduced=True)[0]


def solve_many(field: FieldSpec, a, b):
    """Solve a @ X = b for a block of right-hand sides.

    Returns X or None when any column is inconsistent.
    """
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    aug = np.concatenate([a, b], axis=1)
    e, pivots = row_echelon(field, aug, reduced=True)
    for c in pivots:
        if c >= n:
            return None
    x = zeros(field, n, b.shape[1])
    for j, c in enumerate(pivots):
        x[c] = e[j, n:]
    return x


def solve(field: FieldSpec, a, b):
    """Solve a @ x = b for a single right-hand side (column vector or 1-d)."""
    col = b.reshape(-1, 1)
    x = solve_many(field, a, col)
    return None if x is None else x[:, 0]


class Quotient:
    """A quotient of k^n by an explicit subspace.

    Stores the reduced echelon rows of the subspace; quotient coordinates are
    the non-pivot coordinates of the reduced vector, which makes projection
    and section deterministic.
    """

    def __init__(self, field: FieldSpec, n: int, sub_rows):
        self.field = field
        self.n = n
        rows, pivots = row_echelon(field, sub_rows, reduced=True)
        self.rows = rows
        self.pivots = list(pivots)
        pivset = set(self.pivots)
        self.free = [c for c in range(n) if c not in pivset]
        self.dim = len(self.free)

    def project(self, vecs):
        """Project columns of vecs (n x k) to quotient coordinates (dim x k)."""
        if vecs.ndim == 1:
            vecs = vecs.reshape(-1, 1)
        red = vecs.copy()
        if self.pivots:
            coeff = red[self.pivots, :]
            red = red - mm(self.field, self.rows.T, coeff)
            if self.field.is_prime_field:
                red %= self.field.p
        return red[self.free, :]

    def section(self):
        """n x dim matrix sending quotient coordinates to representatives."""
        s = zeros(self.field, self.n, self.dim)
        one = 1 if self.field.is_prime_field else Fraction(1)
        for i, f in enumerate(self.free):
            s[f, i] = one
        return s
