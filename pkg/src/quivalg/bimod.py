"""Bimodules: two-sided representations and conversions to one-sided views.

A bimodule over (A, C) stores one matrix per basis element of each side:
``lmats[i]`` is the action of the i-th basis element of A on the left and
``rmats[j]`` the action of the j-th basis element of C on the right.  Both
act on column vectors of length ``dim``.
"""

from __future__ import annotations

import numpy as np

from . import exactlin as ex
from . import modcat as mc
from .algcore import AlgebraError, EnvelopingPair, FDAlgebra, opposite

__all__ = [
    "Bimodule",
    "regular_bimodule",
    "zero_bimodule",
    "bimodule_from_env_module",
    "sub_bimodule",
    "quotient_bimodule",
]


class Bimodule:
    def __init__(self, left_alg: FDAlgebra, right_alg: FDAlgebra, lmats, rmats,
                 validate=None):
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.lmats = [np.asarray(m) for m in lmats]
        self.rmats = [np.asarray(m) for m in rmats]
        self.dim = self.lmats[0].shape[0] if self.lmats else 0
        if validate is None:
            validate = self.dim <= 30
        if validate:
            self.check()

    @property
    def field(self):
        return self.left_alg.field

    def left_act(self, x):
        """Matrix of m -> x.m for an element x of the left algebra."""
        f = self.field
        acc = ex.zeros(f, self.dim, self.dim)
        for i, c in enumerate(x):
            if c:
                acc = acc + c * self.lmats[i]
        return acc % f.p if f.is_prime_field else acc

    def right_act(self, y):
        """Matrix of m -> m.y for an element y of the right algebra."""
        f = self.field
        acc = ex.zeros(f, self.dim, self.dim)
        for j, c in enumerate(y):
            if c:
                acc = acc + c * self.rmats[j]
        return acc % f.p if f.is_prime_field else acc

    def as_left_module(self) -> mc.Module:
        return mc.Module(self.left_alg, [m.copy() for m in self.lmats])

    def as_right_module(self) -> mc.Module:
        """The right module as a left module over the opposite algebra."""
        return mc.Module(opposite(self.right_alg), [m.copy() for m in self.rmats])

    def as_env_module(self, env: EnvelopingPair) -> mc.Module:
        """The bimodule as a left module over (A (x) C^op)."""
        f = self.field
        mats = []
        for k in range(env.dim):
            i, j = env.unpair(k)
            mats.append(ex.mm(f, self.lmats[i], self.rmats[j]))
        return mc.Module(env, mats)

    def check(self):
        f = self.field
        ident = ex.eye(f, self.dim)
        if not np.array_equal(self.left_act(self.left_alg.unit()), ident):
            raise AlgebraError("left unit does not act as the identity")
        if not np.array_equal(self.right_act(self.right_alg.unit()), ident):
            raise AlgebraError("right unit does not act as the identity")
        for i in range(self.left_alg.dim):
            for j in range(self.left_alg.dim):
                lhs = ex.mm(f, self.lmats[i], self.lmats[j])
                rhs = self.left_act(self.left_alg.mult_basis(i, j))
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError("left action is not multiplicative")
        for i in range(self.right_alg.dim):
            for j in range(self.right_alg.dim):
                # m.(b_i b_j) = (m.b_i).b_j
                lhs = ex.mm(f, self.rmats[j], self.rmats[i])
                rhs = self.right_act(self.right_alg.mult_basis(i, j))
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError("right action is not multiplicative")
        for lm in self.lmats:
            for rm in self.rmats:
                if not np.array_equal(ex.mm(f, lm, rm), ex.mm(f, rm, lm)):
                    raise AlgebraError("left and right actions do not commute")


def regular_bimodule(alg: FDAlgebra) -> Bimodule:
    lmats = [alg.left_mult_mat(i) for i in range(alg.dim)]
    rmats = [alg.right_mult_mat(j) for j in range(alg.dim)]
    return Bimodule(alg, alg, lmats, rmats, validate=False)


def zero_bimodule(left_alg: FDAlgebra, right_alg: FDAlgebra) -> Bimodule:
    f = left_alg.field
    z = ex.zeros(f, 0, 0)
    return Bimodule(left_alg, right_alg,
                    [z.copy() for _ in range(left_alg.dim)],
                    [z.copy() for _ in range(right_alg.dim)], validate=False)


def bimodule_from_env_module(env: EnvelopingPair, mod: mc.Module) -> Bimodule:
    """Recover the two-sided actions from a module over (A (x) C^op)."""
    a, c = env.A, env.B
    one_a, one_c = a.unit(), c.unit()
    lmats, rmats = [], []
    for i in range(a.dim):
        x = ex.zeros(a.field, a.dim, 1)[:, 0]
        x[i] = mc._one(a.field)
        lmats.append(mod.elem_mat(np.kron(x, one_c)))
    for j in range(c.dim):
        y = ex.zeros(c.field, c.dim, 1)[:, 0]
        y[j] = mc._one(c.field)
        rmats.append(mod.elem_mat(np.kron(one_a, y)))
    return Bimodule(a, c, lmats, rmats, validate=False)


def sub_bimodule(parent: Bimodule, incl) -> Bimodule:
    """The sub-bimodule spanned by the columns of incl (must be invariant)."""
    f = parent.field

    def coords_of(mats):
        out = []
        for m in mats:
            c = ex.solve_many(f, incl, ex.mm(f, m, incl))
            if c is None:
                raise AlgebraError("column span is not a sub-bimodule")
            out.append(c)
        return out

    return Bimodule(parent.left_alg, parent.right_alg,
                    coords_of(parent.lmats), coords_of(parent.rmats),
                    validate=False)


def quotient_bimodule(parent: Bimodule, sub_rows):
    """Quotient by the span of sub_rows; returns (bimodule, projection)."""
    f = parent.field
    quo = ex.Quotient(f, parent.dim, np.asarray(sub_rows))
    sec = quo.section()
    lmats = [quo.project(ex.mm(f, m, sec)) for m in parent.lmats]
    rmats = [quo.project(ex.mm(f, m, sec)) for m in parent.rmats]
    bim = Bimodule(parent.left_alg, parent.right_alg, lmats, rmats,
                   validate=False)
    return bim, quo
