"""Command-line front end.

Commands operate on a presentation file and print either a line-delimited
key/value report (--format kv, stable byte-for-byte across runs) or a
human rendering of the same pairs.  Exit codes: 0 success, 2 parse or
usage error, 3 computation cap exceeded, 4 internal inconsistency (a
violated invariant, which indicates a bug, never bad input).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import exactlin as ex
from . import extensions as et
from . import modcat as mc
from . import presentation as pr
from . import relative as rel
from .algcore import AlgebraError, CapExceeded, subalgebra_closure
from .exactlin import FieldSpec
from .homology import (
    DEFAULT_DMAX,
    DEFAULT_NMAX,
    PdResult,
    bar_hochschild,
    global_dimension,
    hochschild_tower,
)

SCHEMA = "1"

EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4

DEFAULT_PMAX = et.DEFAULT_PMAX


def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


class Report:
    def __init__(self):
        self.pairs = [("schema", SCHEMA)]

    def add(self, key, value):
        self.pairs.append((key, _fmt(value)))

    def render(self, fmt):
        if fmt == "kv":
            return "\n".join(f"{k}={v}" for k, v in self.pairs)
        width = max(len(k) for k, _ in self.pairs)
        return "\n".join(f"{k.ljust(width)}  {v}"
                         for k, v in self.pairs if k != "schema")


def _load(cfg):
    pres = pr.parse_file(cfg.file)
    if cfg.field is not None:
        p = None if cfg.field == "Q" else int(cfg.field)
        pres = dataclasses.replace(pres, field=FieldSpec(p))
    alg = pr.build_algebra(pres)
    return pres, alg


def _sub_of(alg):
    gens = pr.subalgebra_elements(alg)
    if not gens:
        raise pr.ParseError("command needs a SUBALGEBRA section")
    return subalgebra_closure(alg, gens)


def _pd_pairs(rep, prefix, r):
    rep.add(f"{prefix}.kind", r.kind)
    if r.kind == "finite":
        rep.add(f"{prefix}.value", r.value)
    if r.kind == "infinite" and r.witness and "i" in r.witness:
        rep.add(f"{prefix}.period_witness",
                f"syzygy {r.witness['i']} isomorphic to {r.witness['j']}")


def _radical_series(alg):
    """Dimensions of J, J^2, ... down to zero."""
    f = alg.field
    rad = alg.radical_basis()
    gens = rad.T  # columns
    dims = []
    cur = ex.row_echelon(f, rad)[0]
    while cur.shape[0]:
        dims.append(cur.shape[0])
        cols = []
        for j in range(cur.shape[0]):
            cols.append(ex.mm(f, alg.left_mult_elem(cur[j]), gens))
        nxt = np.concatenate(cols, axis=1).T
        cur = ex.row_echelon(f, nxt)[0]
    return dims


def cmd_info(cfg):
    pres, alg = _load(cfg)
    rep = Report()
    rep.add("command", "info")
    rep.add("field", "Q" if not alg.field.is_prime_field else alg.field.p)
    rep.add("dim", alg.dim)
    rep.add("vertices", len(pres.quiver.vertices))
    rep.add("arrows", len(pres.quiver.arrows))
    rep.add("basis", list(alg.labels))
    rep.add("radical_series", _radical_series(alg) or [0])
    rep.add("idempotents", len(alg.idempotents))
    gens = pr.subalgebra_elements(alg)
    if gens:
        sub = subalgebra_closure(alg, gens)
        rep.add("subalgebra_dim", sub.dim)
    return rep


def cmd_gldim(cfg):
    _, alg = _load(cfg)
    rep = Report()
    rep.add("command", "gldim")
    rep.add("dim", alg.dim)
    _pd_pairs(rep, "gldim", global_dimension(alg, cfg.dmax))
    return rep


def cmd_hh(cfg):
    _, alg = _load(cfg)
    rep = Report()
    rep.add("command", "hh")
    rep.add("dim", alg.dim)
    rep.add("nmax", cfg.nmax)
    dims = et._hh_dims(alg, cfg.nmax)
    for n, d in enumerate(dims[: cfg.nmax + 1]):
        rep.add(f"hh.{n}", d)
    if cfg.oracle:
        bar = bar_hochschild(alg, cfg.nmax)
        agree = list(bar[: cfg.nmax + 1]) == list(dims[: cfg.nmax + 1])
        rep.add("oracle.bar", bar[: cfg.nmax + 1])
        rep.add("oracle.agrees", agree)
        if not agree:
            raise AlgebraError(
                "resolution route disagrees with the bar complex")
    return rep


def cmd_relpd(cfg):
    _, alg = _load(cfg)
    sub = _sub_of(alg)
    rep = Report()
    rep.add("command", "relpd")
    rep.add("dim", alg.dim)
    rep.add("subalgebra_dim", sub.dim)
    mods = []
    for i, s, p in mc.simples_and_projectives(alg):
        mods.append((f"simple.{i}", s))
        mods.append((f"projective.{i}", p))
        radrows = mc.radical_submodule_rows(p)
        radp, _ = mc.submodule(p, radrows.T.copy())
        mods.append((f"radical.{i}", radp))
    bound = 0
    unknown = False
    infinite = False
    for label, m in mods:
        try:
            r = rel.rel_pd(alg, sub, m, cfg.dmax)
        except CapExceeded as e:
            r = PdResult("unknown", witness={"reason": str(e)})
        _pd_pairs(rep, f"rel_pd.{label}", r)
        if r.kind == "finite":
            bound = max(bound, r.value)
        elif r.kind == "infinite":
            infinite = True
        else:
            unknown = True
    if infinite:
        rep.add("rel_gldim", "infinite")
    elif unknown:
        rep.add("rel_gldim", "unknown")
    else:
        rep.add("rel_gldim_over_test_modules", bound)
    return rep


def _check_report(cfg):
    _, alg = _load(cfg)
    sub = _sub_of(alg)
    pb = et.check_proj_bounded(alg, sub, pmax=cfg.pmax, dmax=cfg.dmax)
    return alg, sub, pb


def _add_check_pairs(rep, pb):
    _pd_pairs(rep, "u", pb.u)
    rep.add("left_projective", pb.left_projective)
    rep.add("right_projective", pb.right_projective)
    rep.add("p", pb.p if pb.p is not None else "none")
    rep.add("p_certified", pb.p_certified if pb.p_certified else "none")
    rep.add("power_dims", pb.power_dims)
    rep.add("power_projective", pb.power_projective)
    _pd_pairs(rep, "r", pb.r)
    rep.add("proj_bounded",
            pb.proj_bounded if pb.proj_bounded == "unknown"
            else bool(pb.proj_bounded))
    rep.add("strongly_proj_bounded",
            pb.strongly if pb.strongly == "unknown" else bool(pb.strongly))
    rep.add("jz_bound", pb.jz_bound if pb.jz_bound is not None else "none")


def cmd_check(cfg):
    alg, sub, pb = _check_report(cfg)
    rep = Report()
    rep.add("command", "check")
    rep.add("dim", alg.dim)
    rep.add("subalgebra_dim", sub.dim)
    _add_check_pairs(rep, pb)
    return rep


def cmd_jz(cfg):
    alg, sub, pb = _check_report(cfg)
    rep = Report()
    rep.add("command", "jz")
    rep.add("dim", alg.dim)
    rep.add("subalgebra_dim", sub.dim)
    _add_check_pairs(rep, pb)
    jz = et.jz_verify(alg, sub, m_max=cfg.nmax, report=pb)
    rep.add("jz.bound", jz.bound)
    rep.add("jz.hh_b", jz.dims_b)
    rep.add("jz.hh_a", jz.dims_a)
    rep.add("jz.hh_rel", jz.dims_rel)
    for m in sorted(jz.exact_at_middle):
        rep.add(f"jz.exact_at_middle.{m}", jz.exact_at_middle[m])
    for start, end, s in jz.windows:
        rep.add(f"jz.window.{start[0]}{start[1]}.to.{end[0]}{end[1]}", s)
    rep.add("jz.passed", jz.passed)
    if not jz.passed:
        raise AlgebraError("long exact sequence check failed")
    return rep


def cmd_tower(cfg):
    pres, base = _load(cfg)
    if pres.truncate is None:
        raise pr.ParseError("tower needs a TRUNCATE section as its base")
    rep = Report()
    rep.add("command", "tower")
    start = pres.truncate
    truncations = [start, start + 1]

    algs = {}

    def build(m):
        algs[m] = pr.build_algebra(dataclasses.replace(pres, truncate=m))
        alg = algs[m]
        prev = algs.get(m - 1)
        if prev is None:
            return alg, None
        index = {w: i for i, w in enumerate(prev.basis_words)}
        surj = ex.zeros(alg.field, prev.dim, alg.dim)
        for j, w in enumerate(alg.basis_words):
            i = index.get(w)
            if i is not None:
                surj[i, j] = 1
        return alg, surj

    entries = hochschild_tower(build, truncations, nmax=cfg.nmax)
    for e in entries:
        rep.add(f"tower.{e['m']}.hh", e["hh"])
        if e["comparison_ranks"] is not None:
            rep.add(f"tower.{e['m']}.comparison_ranks",
                    e["comparison_ranks"])
        nonzero = all(d > 0 for d in e["hh"][1: cfg.nmax + 1])
        rep.add(f"tower.{e['m']}.positive_through_{cfg.nmax}", nonzero)
    return rep


COMMANDS = {
    "info": cmd_info,
    "gldim": cmd_gldim,
    "hh": cmd_hh,
    "relpd": cmd_relpd,
    "check": cmd_check,
    "jz": cmd_jz,
    "tower": cmd_tower,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="quivalg",
        description="Homological checks for quiver algebra extensions.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--dmax", type=int, default=DEFAULT_DMAX,
                   help="resolution length cutoff")
    p.add_argument("--nmax", type=int, default=DEFAULT_NMAX,
                   help="top homological degree")
    p.add_argument("--pmax", type=int, default=DEFAULT_PMAX,
                   help="tensor power scan cutoff")
    p.add_argument("--field", default=None,
                   help="override the ground field: a prime p, or Q")
    p.add_argument("--format", choices=("human", "kv"), default="human")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the bar complex where offered")
    return p


def main(argv=None):
    cfg = build_parser().parse_args(argv)
    for name in ("dmax", "nmax", "pmax"):
        if getattr(cfg, name) <= 0:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return EXIT_PARSE
    try:
        rep = COMMANDS[cfg.command](cfg)
    except pr.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"error: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except AlgebraError as e:
        print(f"error: internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    print(rep.render(cfg.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
