"""Finite-dimensional algebras as bases with structure constants.

Two concrete kinds: TableAlgebra stores the full multiplication table;
EnvelopingPair represents A (x) B^op lazily, which keeps enveloping algebras
of large algebras usable without cubing their dimension.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import exactlin as ex
from .exactlin import FieldSpec

__all__ = [
    "AlgebraError",
    "CapExceeded",
    "RadicalUnknown",
    "FDAlgebra",
    "TableAlgebra",
    "EnvelopingPair",
    "Subalgebra",
    "opposite",
    "enveloping",
    "subalgebra_closure",
    "conjugate",
    "radical_rows",
]

DEFAULT_ENVELOPING_CAP = 4096


class AlgebraError(Exception):
    pass


class CapExceeded(AlgebraError):
    pass


class RadicalUnknown(AlgebraError):
    pass


class FDAlgebra:
    """Interface: a unital associative algebra with a distinguished basis."""

    field: FieldSpec
    dim: int
    labels: list

    def unit(self):
        raise NotImplementedError

    def mult_basis(self, i: int, j: int):
        """Coefficient vector of b_i * b_j."""
        raise NotImplementedError

    def left_mult_mat(self, i: int):
        """Matrix L with L[:, j] = b_i * b_j."""
        raise NotImplementedError

    def right_mult_mat(self, i: int):
        """Matrix R with R[:, j] = b_j * b_i."""
        raise NotImplementedError

    def left_mult_elem(self, x):
        cols = [self.mult_elem_basis(x, j) for j in range(self.dim)]
        return np.stack(cols, axis=1)

    def right_mult_elem(self, x):
        cols = [self.mult_basis_elem(j, x) for j in range(self.dim)]
        return np.stack(cols, axis=1)

    def mult_elem_basis(self, x, j):
        acc = ex.zeros(self.field, self.dim, 1)[:, 0]
        for i in np.nonzero(x)[0]:
            acc = acc + x[i] * self.mult_basis(int(i), j)
        return acc % self.field.p if self.field.is_prime_field else acc

    def mult_basis_elem(self, i, y):
        acc = ex.zeros(self.field, self.dim, 1)[:, 0]
        for j in np.nonzero(y)[0]:
            acc = acc + y[j] * self.mult_basis(i, int(j))
        return acc % self.field.p if self.field.is_prime_field else acc

    def mult(self, x, y):
        acc = ex.zeros(self.field, self.dim, 1)[:, 0]
        for i in np.nonzero(x)[0]:
            acc = acc + x[i] * self.mult_basis_elem(int(i), y)
        return acc % self.field.p if self.field.is_prime_field else acc

    # unit decomposition into orthogonal (primitive) idempotents
    idempotents: list

    # algebra generators as (label, coefficient vector); include idempotents
    generators: list

    def radical_basis(self):
        """Rows spanning the Jacobson radical, or raise RadicalUnknown."""
        raise NotImplementedError

    def basis_vec(self, i: int):
        v = ex.zeros(self.field, self.dim, 1)[:, 0]
        v[i] = 1 if self.field.is_prime_field else Fraction(1)
        return v

    def elem_from(self, combo: dict):
        """Element from {basis index: coefficient}."""
        v = ex.zeros(self.field, self.dim, 1)[:, 0]
        for i, c in combo.items():
            v[i] = (
                int(c) % self.field.p if self.field.is_prime_field else Fraction(c)
            )
        return v

    def check_unit_and_idempotents(self):
        one = self.unit()
        tot = ex.zeros(self.field, self.dim, 1)[:, 0]
        for e in self.idempotents:
            tot = tot + e
        if self.field.is_prime_field:
            tot %= self.field.p
        if not np.array_equal(tot, one):
            raise AlgebraError("idempotents do not sum to the unit")
        for a, e in enumerate(self.idempotents):
            for b, f in enumerate(self.idempotents):
                prod = self.mult(e, f)
                want = e if a == b else ex.zeros(self.field, self.dim, 1)[:, 0]
                if not np.array_equal(prod, want):
                    raise AlgebraError("idempotents not orthogonal")


class TableAlgebra(FDAlgebra):
    def __init__(
        self,
        field: FieldSpec,
        labels,
        table,
        unit_vec,
        idempotents,
        generators=None,
        radical=None,
        grading=None,
        source=None,
        target=None,
        validate=None,
    ):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = table  # table[i, j] = coefficient vector of b_i b_j
        self._unit = unit_vec
        self.idempotents = list(idempotents)
        self.generators = list(generators) if generators is not None else [
            (labels[i], self.basis_vec(i)) for i in range(self.dim)
        ]
        self._radical = radical  # rows or None
        self.grading = grading  # per-basis path length, when presented
        # when every basis element b satisfies e_s b e_t = b for unique
        # idempotents, source[i]/target[i] record those indices
        self.source = source
        self.target = target
        if validate is None:
            validate = self.dim <= 40
        if validate:
            self._validate()

    def _validate(self):
        f = self.field
        n = self.dim
        one = self._unit
        for j in range(n):
            bj = self.basis_vec(j)
            if not np.array_equal(self.mult(one, bj), bj) or not np.array_equal(
                self.mult(bj, one), bj
            ):
                raise AlgebraError(f"unit axiom fails at basis {self.labels[j]}")
        # associativity via L being multiplicative
        lmats = [self.left_mult_mat(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                lhs = ex.mm(f, lmats[i], lmats[j])
                rhs = self.left_mult_elem(self.table[i, j])
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError(
                        f"associativity fails at ({self.labels[i]}, {self.labels[j]})"
                    )
        self.check_unit_and_idempotents()

    def unit(self):
        return self._unit

    def mult_basis(self, i, j):
        return self.table[i, j]

    def left_mult_mat(self, i):
        return self.table[i].T.copy()

    def right_mult_mat(self, i):
        return self.table[:, i].T.copy()

    def left_mult_elem(self, x):
        f = self.field
        acc = np.tensordot(x, self.table, axes=(0, 0)).T
        if f.is_prime_field:
            acc %= f.p
        return acc

    def right_mult_elem(self, x):
        f = self.field
        acc = np.tensordot(x, self.table, axes=(0, 1)).T
        if f.is_prime_field:
            acc %= f.p
        return acc

    def mult(self, x, y):
        f = self.field
        acc = np.tensordot(y, np.tensordot(x, self.table, axes=(0, 0)), axes=(0, 0))
        if f.is_prime_field:
            acc %= f.p
        return acc

    def radical_basis(self):
        if self._radical is None:
            self._radical = _compute_radical(self)
        return self._radical

    @property
    def basis_idem_split(self):
        return self.source is not None


def _compute_radical(alg: TableAlgebra):
    """Radical via the path grading or the regular trace form.

    The trace form criterion (rad = radical of (x, y) -> tr(L_{xy})) holds in
    characteristic zero and in characteristic p > dim; outside that range the
    candidate is still verified and rejected, never silently wrong.
    """
    f = alg.field
    n = alg.dim
    if alg.grading is not None:
        rows = [alg.basis_vec(i) for i in range(n) if alg.grading[i] > 0]
        return (
            np.stack(rows) if rows else ex.zeros(f, 0, n)
        )
    lmats = [alg.left_mult_mat(i) for i in range(n)]
    gram = ex.zeros(f, n, n)
    for i in range(n):
        for j in range(n):
            prod_diag = (lmats[i] * lmats[j].T).sum()
            gram[i, j] = prod_diag % f.p if f.is_prime_field else prod_diag
    ker = ex.nullspace(f, gram)
    cand = ker.T  # rows
    guaranteed = (f.p is None) or (f.p > n)
    # the candidate always contains the radical, so if it verifies as a
    # nilpotent two-sided ideal it equals the radical (which is the largest
    # nilpotent ideal) in any characteristic
    if _is_nilpotent_ideal(alg, cand):
        return cand
    if guaranteed:
        raise AlgebraError("internal: trace-form radical failed verification")
    raise RadicalUnknown(
        f"radical not certified over {f} for dim {n}; use a larger prime"
    )


def _is_nilpotent_ideal(alg: FDAlgebra, rows):
    f = alg.field
    if rows.shape[0] == 0:
        return True
    n = alg.dim
    # closure under multiplication by basis elements
    prods = []
    for i in range(n):
        li = alg.left_mult_mat(i)
        ri = alg.right_mult_mat(i)
        prods.append(ex.mm(f, li, rows.T).T)
        prods.append(ex.mm(f, ri, rows.T).T)
    allrows = np.concatenate([rows] + prods, axis=0)
    base, _ = ex.row_echelon(f, rows, reduced=True)
    closed, _ = ex.row_echelon(f, allrows, reduced=True)
    if base.shape[0] != closed.shape[0]:
        return False
    # nilpotency: powers of the subspace
    cur = rows
    for _ in range(n + 1):
        if cur.shape[0] == 0:
            return True
        nxt = []
        for r in cur:
            lm = alg.left_mult_elem(r)
            nxt.append(ex.mm(f, lm, rows.T).T)
        cur, _ = ex.row_echelon(f, np.concatenate(nxt, axis=0), reduced=True)
        if cur.shape[0] >= rows.shape[0] and _rows_equal(f, cur, rows):
            return False
    return cur.shape[0] == 0


def _rows_equal(f, a, b):
    ea, _ = ex.row_echelon(f, a, reduced=True)
    eb, _ = ex.row_echelon(f, b, reduced=True)
    return ea.shape == eb.shape and np.array_equal(ea, eb)


def radical_rows(alg: FDAlgebra):
    """The radical operation: echelonized rows, or RadicalUnknown."""
    rows = alg.radical_basis()
    out, _ = ex.row_echelon(alg.field, rows, reduced=True)
    return out


class EnvelopingPair(FDAlgebra):
    """A (x) B^op, basis a_i (x) b_j at index i*dim(B)+j, built lazily.

    Modules over this algebra are (A, B)-bimodules; the product follows
    (a (x) b)(a' (x) b') = aa' (x) b'b.
    """

    def __init__(self, A: FDAlgebra, B: FDAlgebra, cap=DEFAULT_ENVELOPING_CAP):
        if A.field != B.field:
            raise AlgebraError("mixed fields")
        if cap is not None and A.dim * B.dim > cap:
            raise CapExceeded(
                f"enveloping dimension {A.dim * B.dim} exceeds cap {cap}"
            )
        self.A = A
        self.B = B
        self.field = A.field
        self.dim = A.dim * B.dim
        self.labels = [f"{la}(x){lb}" for la in A.labels for lb in B.labels]
        self.idempotents = [
            np.kron(ea, eb) % self.field.p
            if self.field.is_prime_field
            else np.kron(ea, eb)
            for ea in A.idempotents
            for eb in B.idempotents
        ]
        oneA, oneB = A.unit(), B.unit()
        self._unit = np.kron(oneA, oneB)
        self.generators = [
            (f"{lab}(x)1", np.kron(g, oneB)) for lab, g in A.generators
        ] + [(f"1(x){lab}", np.kron(oneA, g)) for lab, g in B.generators]
        self.grading = None
        self.source = None
        self.target = None

    def pair(self, i, j):
        return i * self.B.dim + j

    def unpair(self, k):
        return divmod(k, self.B.dim)

    def unit(self):
        return self._unit

    def mult_basis(self, i, j):
        ia, ib = self.unpair(i)
        ja, jb = self.unpair(j)
        va = self.A.mult_basis(ia, ja)
        vb = self.B.mult_basis(jb, ib)  # opposite order on the second factor
        out = np.kron(va, vb)
        return out % self.field.p if self.field.is_prime_field else out

    def left_mult_mat(self, i):
        ia, ib = self.unpair(i)
        la = self.A.left_mult_mat(ia)
        rb = self.B.right_mult_mat(ib)
        out = np.kron(la, rb)
        return out % self.field.p if self.field.is_prime_field else out

    def right_mult_mat(self, i):
        ia, ib = self.unpair(i)
        ra = self.A.right_mult_mat(ia)
        lb = self.B.left_mult_mat(ib)
        out = np.kron(ra, lb)
        return out % self.field.p if self.field.is_prime_field else out

    def mult(self, x, y):
        f = self.field
        nA, nB = self.A.dim, self.B.dim
        xm = x.reshape(nA, nB)
        ym = y.reshape(nA, nB)
        acc = ex.zeros(f, nA * nB, 1)[:, 0]
        for ia, ib in zip(*np.nonzero(xm)):
            for ja, jb in zip(*np.nonzero(ym)):
                c = xm[ia, ib] * ym[ja, jb]
                va = self.A.mult_basis(int(ia), int(ja))
                vb = self.B.mult_basis(int(jb), int(ib))
                acc = acc + c * np.kron(va, vb)
        if f.is_prime_field:
            acc %= f.p
        return acc

    def radical_basis(self):
        # rad(A (x) B^op) = rad A (x) B + A (x) rad B over a perfect field
        f = self.field
        radA = self.A.radical_basis()
        radB = self.B.radical_basis()
        rows = []
        eyeA = ex.eye(f, self.A.dim)
        eyeB = ex.eye(f, self.B.dim)
        for r in radA:
            for j in range(self.B.dim):
                rows.append(np.kron(r, eyeB[j]))
        for i in range(self.A.dim):
            for r in radB:
                rows.append(np.kron(eyeA[i], r))
        if not rows:
            return ex.zeros(f, 0, self.dim)
        out, _ = ex.row_echelon(f, np.stack(rows), reduced=True)
        return out

    def materialize(self) -> TableAlgebra:
        """Dense table form; only for small dimensions (tests, tiny inputs)."""
        n = self.dim
        if n > 144:
            raise CapExceeded(f"refusing to materialize table of dim {n}")
        f = self.field
        table = (
            np.zeros((n, n, n), dtype=np.int64)
            if f.is_prime_field
            else np.full((n, n, n), Fraction(0), dtype=object)
        )
        for i in range(n):
            for j in range(n):
                table[i, j] = self.mult_basis(i, j)
        return TableAlgebra(
            f,
            self.labels,
            table,
            self._unit,
            self.idempotents,
            generators=self.generators,
            radical=self.radical_basis(),
            validate=False,
        )


def _unitvec(f, n, i):
    v = ex.zeros(f, n, 1)[:, 0]
    v[i] = 1 if f.is_prime_field else Fraction(1)
    return v


def opposite(alg: FDAlgebra) -> TableAlgebra:
    """Same basis, reversed multiplication."""
    f = alg.field
    n = alg.dim
    table = (
        np.zeros((n, n, n), dtype=np.int64)
        if f.is_prime_field
        else np.full((n, n, n), Fraction(0), dtype=object)
    )
    for i in range(n):
        for j in range(n):
            table[i, j] = alg.mult_basis(j, i)
    rad = None
    try:
        rad = alg.radical_basis()
    except (RadicalUnknown, NotImplementedError):
        rad = None
    return TableAlgebra(
        f,
        alg.labels,
        table,
        alg.unit(),
        alg.idempotents,
        generators=alg.generators,
        radical=rad,
        grading=getattr(alg, "grading", None),
        source=getattr(alg, "target", None),
        target=getattr(alg, "source", None),
        validate=False,
    )


def enveloping(alg: FDAlgebra, cap=DEFAULT_ENVELOPING_CAP) -> EnvelopingPair:
    """A^e = A (x) A^op as a lazy pair algebra."""
    return EnvelopingPair(alg, alg, cap=cap)


# ---------------------------------------------------------------------------
# subalgebras


class Subalgebra:
    """A unital subalgebra with an echelonized basis in ambient coordinates."""

    def __init__(self, ambient: FDAlgebra, inclusion, algebra: TableAlgebra):
        self.ambient = ambient
        self.inclusion = inclusion  # ambient.dim x algebra.dim, columns = basis
        self.algebra = algebra

    @property
    def dim(self):
        return self.algebra.dim

    def embed(self, v):
        """Subalgebra coordinates -> ambient element."""
        out = ex.mm(self.ambient.field, self.inclusion, v.reshape(-1, 1))[:, 0]
        return out

    def coords(self, x):
        """Ambient element -> subalgebra coordinates (None if outside)."""
        return ex.solve(self.ambient.field, self.inclusion, x)


def _span_algebra(ambient: FDAlgebra, rows):
    """Close a spanning set (rows) under multiplication; returns echelon rows."""
    f = ambient.field
    cur, _ = ex.row_echelon(f, rows, reduced=True)
    while True:
        prods = [cur]
        for x in cur:
            lm = ambient.left_mult_elem(x)
            prods.append(ex.mm(f, lm, cur.T).T)
        nxt, _ = ex.row_echelon(f, np.concatenate(prods, axis=0), reduced=True)
        if nxt.shape[0] == cur.shape[0]:
            return nxt
        cur = nxt


def subalgebra_closure(ambient: FDAlgebra, generators) -> Subalgebra:
    """Smallest unital subalgebra containing the generators."""
    f = ambient.field
    rows = [ambient.unit()] + [np.asarray(g) for g in generators]
    basis_rows = _span_algebra(ambient, np.stack(rows))
    return _subalgebra_from_rows(ambient, basis_rows, gen_elems=generators)


def _subalgebra_from_rows(ambient, basis_rows, gen_elems=None):
    f = ambient.field
    d = basis_rows.shape[0]
    incl = basis_rows.T.copy()
    n = ambient.dim
    # structure constants
    table = (
        np.zeros((d, d, d), dtype=np.int64)
        if f.is_prime_field
        else np.full((d, d, d), Fraction(0), dtype=object)
    )
    for i in range(d):
        lm = ambient.left_mult_elem(basis_rows[i])
        prods = ex.mm(f, lm, incl)  # columns = b_i * b_j in ambient coords
        coords = ex.solve_many(f, incl, prods)
        if coords is None:
            raise AlgebraError("generating set is not closed (internal)")
        for j in range(d):
            table[i, j] = coords[:, j]
    unit_c = ex.solve(f, incl, ambient.unit())
    if unit_c is None:
        raise AlgebraError("subalgebra does not contain the unit")
    labels = [f"s{i}" for i in range(d)]
    gen_list = None
    if gen_elems is not None:
        gen_list = []
        for t, g in enumerate(gen_elems):
            c = ex.solve(f, incl, np.asarray(g))
            gen_list.append((f"g{t}", c))
    sub_alg = TableAlgebra(
        f,
        labels,
        table,
        unit_c,
        idempotents=[unit_c],  # replaced below
        generators=gen_list,
        validate=False,
    )
    # primitive orthogonal idempotent decomposition of the unit
    sub_alg.idempotents = _primitive_idempotents(sub_alg)
    sub_alg.check_unit_and_idempotents()
    if gen_list is not None:
        # keep idempotents reachable for generation
        sub_alg.generators = [
            (f"idem{k}", e) for k, e in enumerate(sub_alg.idempotents)
        ] + gen_list
    sub_alg._validate_light()
    return Subalgebra(ambient, incl, sub_alg)


def _validate_light(self):
    one = self._unit
    for j in range(self.dim):
        bj = self.basis_vec(j)
        if not np.array_equal(self.mult(one, bj), bj) or not np.array_equal(
            self.mult(bj, one), bj
        ):
            raise AlgebraError("unit axiom fails in subalgebra")


TableAlgebra._validate_light = _validate_light


def _min_poly(alg: TableAlgebra, x):
    """Minimal polynomial of x in the (unital) algebra, as coefficient list."""
    f = alg.field
    n = alg.dim
    powers = [alg.unit()]
    while True:
        mat = np.stack(powers, axis=1)
        nxt = alg.mult(x, powers[-1])
        sol = ex.solve(f, mat, nxt)
        if sol is not None:
            # x^k = sum sol_i x^i  ->  min poly x^k - sum sol_i x^i
            coeffs = [-(s) for s in sol] + [1 if f.is_prime_field else Fraction(1)]
            if f.is_prime_field:
                coeffs = [int(c) % f.p for c in coeffs]
            return coeffs
        powers.append(nxt)
        if len(powers) > n + 1:
            raise AlgebraError("minimal polynomial search failed")


def _poly_roots(f: FieldSpec, coeffs):
    """All roots in the ground field of a split polynomial."""
    if f.is_prime_field:
        return [
            a
            for a in range(f.p)
            if sum(c * pow(a, k, f.p) for k, c in enumerate(coeffs)) % f.p == 0
        ]
    # rational root theorem on the common-denominator integer polynomial
    from math import gcd

    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    lead = ints[-1]
    a0 = next((c for c in ints if c != 0), 0)
    if a0 == 0:
        roots = [Fraction(0)]
        shifted = ints[:]
        while shifted and shifted[0] == 0:
            shifted.pop(0)
        ints = shifted
        a0 = ints[0]
    else:
        roots = []
    def divisors(m):
        m = abs(m)
        out = set()
        d = 1
        while d * d <= m:
            if m % d == 0:
                out.add(d)
                out.add(m // d)
            d += 1
        return out
    for num in divisors(a0):
        for dn in divisors(lead):
            for s in (1, -1):
                r = Fraction(s * num, dn)
                if sum(c * r**k for k, c in enumerate(ints)) == 0:
                    if r not in roots:
                        roots.append(r)
    return roots


def _primitive_idempotents(alg: TableAlgebra):
    """Primitive orthogonal idempotent decomposition of 1 (basic algebras).

    Splits idempotents in the semisimple quotient using minimal polynomials
    of corner elements, then lifts through the radical by Newton iteration.
    """
    f = alg.field
    n = alg.dim
    rad = alg.radical_basis()
    quo = ex.Quotient(f, n, rad)

    # commutative semisimple quotient: split the image of 1
    def project(v):
        return quo.project(v.reshape(-1, 1))[:, 0]

    sect = quo.section()

    def lift0(c):
        return ex.mm(f, sect, c.reshape(-1, 1))[:, 0]

    # work with representatives; idempotency holds mod rad
    pieces = [alg.unit()]
    changed = True
    while changed:
        changed = False
        for idx, e in enumerate(pieces):
            # corner eAe in the quotient: try splitting with each basis image
            for i in range(n):
                x = alg.mult(alg.mult(e, alg.basis_vec(i)), e)
                # minimal polynomial of x within the quotient algebra: compute
                # in the algebra mod rad by working with lifted representative
                # of the projection (semisimple part of x)
                cx = project(x)
                ce = project(e)
                if not np.any(cx):
                    continue
                # spectrum of x on the corner
                sub_pows = [lift0(ce)]
                cur = lift0(cx)
                mp = None
                for _ in range(n + 2):
                    mat = np.stack([project(s) for s in sub_pows], axis=1)
                    sol = ex.solve(f, mat, project(cur))
                    if sol is not None:
                        coeffs = [-(s) for s in sol] + [
                            1 if f.is_prime_field else Fraction(1)
                        ]
                        if f.is_prime_field:
                            coeffs = [int(c) % f.p for c in coeffs]
                        mp = coeffs
                        break
                    sub_pows.append(cur)
                    cur = lift0(project(alg.mult(lift0(cx), cur)))
                if mp is None or len(mp) <= 2:
                    continue
                roots = _poly_roots(f, mp)
                if len(roots) != len(mp) - 1:
                    continue  # not split / repeated; try another element
                # orthogonal idempotents from Lagrange interpolation
                new = []
                xm = lift0(cx)
                for lam in roots:
                    num = e.copy()
                    denom = 1 if f.is_prime_field else Fraction(1)
                    for mu in roots:
                        if mu == lam:
                            continue
                        num = alg.mult(num, (xm - mu * e))
                        if f.is_prime_field:
                            num %= f.p
                        denom = denom * (lam - mu)
                    if f.is_prime_field:
                        num = num * f.inv(int(denom) % f.p) % f.p
                    else:
                        num = num / denom
                    new.append(num)
                pieces = pieces[:idx] + new + pieces[idx + 1 :]
                changed = True
                break
            if changed:
                break
    # lift to honest orthogonal idempotents through the nilpotent radical
    lifted = []
    rem = alg.unit()
    for e in pieces[:-1]:
        # restrict to the remaining corner, then Newton-iterate
        x = alg.mult(alg.mult(rem, e), rem)
        for _ in range(n + 4):
            sq = alg.mult(x, x)
            if np.array_equal(sq, x):
                break
            x = 3 * sq - 2 * alg.mult(sq, x)
            if f.is_prime_field:
                x %= f.p
        if not np.array_equal(alg.mult(x, x), x):
            raise AlgebraError("idempotent lifting did not converge")
        lifted.append(x)
        rem = rem - x
        if f.is_prime_field:
            rem %= f.p
    lifted.append(rem)
    if not np.array_equal(alg.mult(rem, rem), rem):
        raise AlgebraError("idempotent lifting: residual not idempotent")
    return [e for e in lifted if np.any(e)]


def conjugate(sub: Subalgebra, z) -> Subalgebra:
    """The conjugate subalgebra z B z^{-1}; z must be a unit of the ambient."""
    amb = sub.ambient
    f = amb.field
    lz = amb.left_mult_elem(z)
    zinv = ex.solve(f, lz, amb.unit())
    if zinv is None:
        raise AlgebraError("conjugating element is not invertible")
    # verify two-sided inverse
    if not np.array_equal(amb.mult(zinv, z), amb.unit()):
        raise AlgebraError("conjugating element is not invertible")
    rows = []
    for j in range(sub.dim):
        b = sub.embed(sub.algebra.basis_vec(j))
        rows.append(amb.mult(amb.mult(z, b), zinv))
    basis_rows, _ = ex.row_echelon(f, np.stack(rows), reduced=True)
    gens = [
        amb.mult(amb.mult(z, sub.embed(g)), zinv) for _, g in sub.algebra.generators
    ]
    return _subalgebra_from_rows(amb, basis_rows, gen_elems=gens)
