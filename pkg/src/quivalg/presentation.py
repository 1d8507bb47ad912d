"""Quiver presentations: parsing, path rewriting, and algebra construction.

Input files describe a quotient of a path algebra by an admissible ideal:

    FIELD 101
    VERTICES 1 2 3
    ARROWS
      a: 1 -> 2
      b: 2 -> 3
    RELATIONS
      b*a
    SUBALGEBRA
      e_1 + e_3
      b*a
    TRUNCATE 4

``x*y`` means "y then x" (composition order).  ``e_v`` is the stationary
path at vertex v.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dcfield
from fractions import Fraction

import numpy as np

from . import exactlin as ex
from .algcore import AlgebraError, TableAlgebra
from .exactlin import GF101, QQ, FieldSpec

__all__ = [
    "ParseError",
    "NonAdmissible",
    "Quiver",
    "Relation",
    "Presentation",
    "parse_presentation",
    "parse_file",
    "serialize",
    "build_algebra",
]

WORD_LENGTH_CAP = 64
COMPLETION_STEP_BUDGET = 20000


class ParseError(Exception):
    def __init__(self, msg, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(msg + loc)
        self.line = line
        self.col = col


class NonAdmissible(AlgebraError):
    pass


@dataclass
class Quiver:
    vertices: list  # vertex names (strings)
    arrows: list  # (name, source, target)

    def __post_init__(self):
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.aindex = {a[0]: i for i, a in enumerate(self.arrows)}
        self.src = {a[0]: a[1] for a in self.arrows}
        self.tgt = {a[0]: a[2] for a in self.arrows}


# A path word is a tuple of arrow names in order of application:
# w = (first, ..., last), so word_src(w) = src(w[0]), word_tgt(w) = tgt(w[-1]).
# The product u * w ("w then u") of composable words is w + u.


@dataclass
class Relation:
    # list of (coefficient, word); all words parallel, length >= 2
    terms: list
    line: int = 0


@dataclass
class Presentation:
    field: FieldSpec
    quiver: Quiver
    relations: list
    subalgebra: list = dcfield(default_factory=list)  # list of term-lists
    truncate: int | None = None


_SECTIONS = ("FIELD", "VERTICES", "ARROWS", "RELATIONS", "SUBALGEBRA", "TRUNCATE")


def parse_presentation(text: str) -> Presentation:
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)
        if head[0] in _SECTIONS:
            current = head[0]
            if current in sections:
                raise ParseError(f"duplicate section {current}", lineno)
            sections[current] = []
            rest = head[1].strip() if len(head) > 1 else ""
            if rest:
                sections[current].append((lineno, rest))
        else:
            if current is None:
                raise ParseError(f"content before any section: {line!r}", lineno)
            sections[current].append((lineno, line))

    # FIELD
    fld = GF101
    if "FIELD" in sections:
        ent = sections["FIELD"]
        if len(ent) != 1 or len(ent[0][1].split()) != 1:
            raise ParseError("FIELD wants exactly one value", ent[0][0] if ent else None)
        tok = ent[0][1].strip()
        if tok == "Q":
            fld = QQ
        else:
            try:
                fld = FieldSpec(int(tok))
            except ValueError as e:
                raise ParseError(str(e), ent[0][0])

    # VERTICES
    if "VERTICES" not in sections:
        raise ParseError("missing VERTICES section")
    verts = []
    for lineno, line in sections["VERTICES"]:
        for tok in line.split():
            if tok in verts:
                raise ParseError(f"duplicate vertex {tok}", lineno)
            verts.append(tok)
    if not verts:
        raise ParseError("no vertices given")

    # ARROWS
    arrows = []
    names = set(verts)
    for lineno, line in sections.get("ARROWS", []):
        if ":" not in line:
            raise ParseError(f"arrow syntax is 'name: v -> w': {line!r}", lineno)
        name, rest = line.split(":", 1)
        name = name.strip()
        if not name or not name.replace("_", "").isalnum():
            raise ParseError(f"bad arrow name {name!r}", lineno)
        if name in names or name.startswith("e_"):
            raise ParseError(f"name {name!r} already in use or reserved", lineno)
        if "->" not in rest:
            raise ParseError(f"arrow syntax is 'name: v -> w': {line!r}", lineno)
        s, t = (p.strip() for p in rest.split("->", 1))
        if s not in verts or t not in verts:
            raise ParseError(f"unknown vertex in arrow {name}: {s} -> {t}", lineno)
        arrows.append((name, s, t))
        names.add(name)
    quiver = Quiver(verts, arrows)

    # RELATIONS
    relations = []
    for lineno, line in sections.get("RELATIONS", []):
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            relations.append(_parse_relation(chunk, quiver, fld, lineno))

    # SUBALGEBRA
    sub = []
    for lineno, line in sections.get("SUBALGEBRA", []):
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            sub.append(_parse_combo(chunk, quiver, fld, lineno, allow_vertices=True))

    # TRUNCATE
    trunc = None
    if "TRUNCATE" in sections:
        ent = sections["TRUNCATE"]
        if len(ent) != 1:
            raise ParseError("TRUNCATE wants exactly one value", ent[0][0] if ent else None)
        try:
            trunc = int(ent[0][1].strip())
        except ValueError:
            raise ParseError(f"bad TRUNCATE value {ent[0][1]!r}", ent[0][0])
        if trunc < 2:
            raise ParseError("TRUNCATE must be at least 2", ent[0][0])

    return Presentation(fld, quiver, relations, sub, trunc)


def _coef_one(f):
    return 1 if f.is_prime_field else Fraction(1)


def _parse_combo(src, quiver, fld, lineno, allow_vertices=False):
    """Parse 'c1*p1 + c2*p2 - ...' into [(coef, word-or-vertex)].

    Atoms are arrow names or e_v; a word is atoms joined by '*', meaning
    right-to-left composition.  Returns terms with words as tuples; a
    stationary path is represented as ('e', vertex).
    """
    # split into signed terms
    pieces = []
    cursign = "+"
    tok = ""
    for ch in src:
        if ch in "+-":
            if tok.strip():
                pieces.append((cursign, tok.strip()))
            tok = ""
            cursign = ch
        else:
            tok += ch
    if tok.strip():
        pieces.append((cursign, tok.strip()))
    if not pieces:
        raise ParseError("empty expression", lineno)

    out = []
    for sgn, piece in pieces:
        coef = _coef_one(fld)
        atoms = [a.strip() for a in piece.split("*")]
        if any(not a for a in atoms):
            raise ParseError(f"empty factor in {piece!r}", lineno)
        # leading numeric factors fold into the coefficient
        while atoms and _is_number(atoms[0]):
            c = _to_number(atoms[0], fld)
            coef = coef * c
            atoms = atoms[1:]
        if not atoms:
            raise ParseError(f"term {piece!r} has no path part", lineno)
        word = []
        station = None
        for a in reversed(atoms):  # application order: rightmost acts first
            if a.startswith("e_"):
                v = a[2:]
                if v not in quiver.vindex:
                    raise ParseError(f"unknown vertex in {a!r}", lineno)
                station = v if station is None else station
                # stationary paths only as standalone or composable units
                word.append(("e", v))
            elif a in quiver.aindex:
                word.append(("a", a))
            else:
                raise ParseError(f"unknown name {a!r}", lineno)
        # normalize: drop stationary units consistent with neighbors
        norm, s, t = _normalize_atoms(word, quiver, lineno)
        if sgn == "-":
            coef = -coef
        if fld.is_prime_field:
            coef = int(coef) % fld.p
        out.append((coef, norm, s, t))
    if not allow_vertices:
        for coef, w, s, t in out:
            if isinstance(w, tuple) and w and w[0] == "E":
                raise ParseError("stationary path not allowed here", lineno)
    return out


def _is_number(tok):
    t = tok.lstrip("-")
    if "/" in t:
        a, b = t.split("/", 1)
        return a.isdigit() and b.isdigit()
    return t.isdigit()


def _to_number(tok, fld):
    if "/" in tok:
        a, b = tok.split("/", 1)
        if fld.is_prime_field:
            return int(a) * fld.inv(int(b) % fld.p) % fld.p
        return Fraction(int(a), int(b))
    return int(tok) % fld.p if fld.is_prime_field else Fraction(int(tok))


def _normalize_atoms(atoms, quiver, lineno):
    """Compose a list of ('a', name)/('e', v) atoms in application order.

    Returns (word, src, tgt) where word is a tuple of arrow names, or
    (('E', v), v, v) for the stationary path at v.
    """
    cur_src = None
    cur_tgt = None
    word = []
    for kind, name in atoms:
        if kind == "e":
            s = t = name
        else:
            s, t = quiver.src[name], quiver.tgt[name]
        if cur_tgt is not None and cur_tgt != s:
            raise ParseError(
                f"non-composable path at {name!r} ({cur_tgt} vs {s})", lineno
            )
        if cur_src is None:
            cur_src = s
        cur_tgt = t
        if kind == "a":
            word.append(name)
    if not word:
        return ("E", cur_src), cur_src, cur_tgt
    return tuple(word), cur_src, cur_tgt


def _parse_relation(src, quiver, fld, lineno) -> Relation:
    # allow "lhs = rhs" as lhs - rhs
    if "=" in src:
        lhs, rhs = src.split("=", 1)
        left = _parse_combo(lhs, quiver, fld, lineno)
        right = _parse_combo(rhs, quiver, fld, lineno)
        terms = left + [(-c if not fld.is_prime_field else (-c) % fld.p, w, s, t)
                        for c, w, s, t in right]
    else:
        terms = _parse_combo(src, quiver, fld, lineno)
    # validate: parallel, length >= 2
    pairs = {(s, t) for _, w, s, t in terms}
    if len(pairs) != 1:
        raise ParseError(f"relation terms not parallel: {sorted(pairs)}", lineno)
    for _, w, s, t in terms:
        if isinstance(w, tuple) and w and w[0] == "E" or len(w) < 2:
            raise ParseError("relation terms must be paths of length >= 2", lineno)
    return Relation([(c, w) for c, w, _, _ in terms], line=lineno)


def parse_file(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def serialize(pres: Presentation) -> str:
    """Canonical text form; parse(serialize(p)) describes the same algebra."""
    out = []
    out.append(f"FIELD {'Q' if pres.field.p is None else pres.field.p}")
    out.append("VERTICES " + " ".join(pres.quiver.vertices))
    if pres.quiver.arrows:
        out.append("ARROWS")
        for name, s, t in pres.quiver.arrows:
            out.append(f"  {name}: {s} -> {t}")
    if pres.relations:
        out.append("RELATIONS")
        for rel in pres.relations:
            out.append("  " + _combo_str(rel.terms))
    if pres.subalgebra:
        out.append("SUBALGEBRA")
        for terms in pres.subalgebra:
            out.append("  " + _combo_str([(c, w) for c, w, _, _ in terms]))
    if pres.truncate is not None:
        out.append(f"TRUNCATE {pres.truncate}")
    return "\n".join(out) + "\n"


def word_str(w):
    if isinstance(w, tuple) and w and w[0] == "E":
        return f"e_{w[1]}"
    return "*".join(reversed(w))


def _combo_str(terms):
    parts = []
    for c, w in terms:
        cs = str(c)
        piece = word_str(w) if cs in ("1",) else f"{cs}*{word_str(w)}"
        parts.append(piece)
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# rewriting


def _word_key(quiver, w):
    return (len(w), tuple(quiver.aindex[a] for a in w))


class Rewriter:
    """Length-lex path rewriting system closed under overlaps."""

    def __init__(self, quiver: Quiver, fld: FieldSpec, relations, truncate=None):
        self.q = quiver
        self.f = fld
        self.truncate = truncate
        # rules: lead word (tuple) -> list of (coef, word) strictly smaller
        self.rules = {}
        pending = []
        for rel in relations:
            pending.append(dict(self._merge(rel.terms)))
        budget = COMPLETION_STEP_BUDGET
        while pending:
            combo = pending.pop()
            combo = self.reduce_combo(combo)
            if not combo:
                continue
            lead = max(combo, key=lambda w: _word_key(self.q, w))
            inv = (
                self.f.inv(combo[lead])
                if self.f.is_prime_field
                else 1 / combo[lead]
            )
            tail = []
            for w, c in combo.items():
                if w == lead:
                    continue
                cc = -c * inv
                if self.f.is_prime_field:
                    cc %= self.f.p
                tail.append((cc, w))
            self.rules[lead] = tail
            # new rule can reduce old leads: requeue any rule whose lead
            # contains the new lead or whose tail is now reducible
            for old in list(self.rules):
                if old == lead:
                    continue
                if self._contains(old, lead) or any(
                    self._reducible(w) and w != old for _, w in self.rules[old]
                ):
                    combo2 = {old: _one(self.f)}
                    for c, w in self.rules[old]:
                        combo2[w] = combo2.get(w, _zero(self.f)) - c
                        if self.f.is_prime_field:
                            combo2[w] %= self.f.p
                    del self.rules[old]
                    pending.append(combo2)
            # overlaps of the new rule with all rules (both orders)
            for other in list(self.rules):
                for a, b in ((lead, other), (other, lead)):
                    if a not in self.rules or b not in self.rules:
                        continue
                    for ov in self._overlaps(a, b):
                        budget -= 1
                        if budget < 0:
                            raise NonAdmissible(
                                "rewriting completion exceeded its step budget"
                            )
                        r1 = self.reduce_combo(self._apply_at(ov, a, 0))
                        # find b inside ov at its known position
                        pos = len(ov) - len(b)
                        r2 = self.reduce_combo(self._apply_at(ov, b, pos))
                        diff = dict(r1)
                        for w, c in r2.items():
                            diff[w] = diff.get(w, _zero(self.f)) - c
                            if self.f.is_prime_field:
                                diff[w] %= self.f.p
                        diff = {w: c for w, c in diff.items() if _nz(self.f, c)}
                        if diff:
                            pending.append(diff)

    def _merge(self, terms):
        combo = {}
        for c, w in terms:
            combo[w] = combo.get(w, _zero(self.f)) + c
            if self.f.is_prime_field:
                combo[w] %= self.f.p
        return {w: c for w, c in combo.items() if _nz(self.f, c)}

    @staticmethod
    def _contains(w, sub):
        ls = len(sub)
        return any(w[i : i + ls] == sub for i in range(len(w) - ls + 1))

    def _reducible(self, w):
        if self.truncate is not None and len(w) >= self.truncate:
            return True
        return any(self._contains(w, lead) for lead in self.rules)

    def _overlaps(self, a, b):
        """Words where a suffix of a equals a prefix of b (proper overlap),
        plus containments of b in a."""
        out = []
        la, lb = len(a), len(b)
        for k in range(1, min(la, lb)):
            if a[la - k :] == b[:k]:
                out.append(a + b[k:])
        if lb < la:
            for i in range(la - lb + 1):
                if a[i : i + lb] == b:
                    out.append(a)
                    break
        return out

    def _apply_at(self, w, lead, pos):
        """Replace lead at position pos in w by the rule tail."""
        tail = self.rules[lead]
        pre, post = w[:pos], w[pos + len(lead) :]
        combo = {}
        for c, t in tail:
            nw = pre + t + post
            combo[nw] = combo.get(nw, _zero(self.f)) + c
            if self.f.is_prime_field:
                combo[nw] %= self.f.p
        return {w2: c for w2, c in combo.items() if _nz(self.f, c)}

    def reduce_word(self, w):
        """Normal form of a single word, as {word: coef}."""
        return self.reduce_combo({w: _one(self.f)})

    def reduce_combo(self, combo):
        combo = {w: c for w, c in combo.items() if _nz(self.f, c)}
        while True:
            target = None
            for w in sorted(combo, key=lambda w: _word_key(self.q, w), reverse=True):
                if self.truncate is not None and len(w) >= self.truncate:
                    target = (w, None, None)
                    break
                hit = self._find_redex(w)
                if hit is not None:
                    target = (w, *hit)
                    break
            if target is None:
                return combo
            w, lead, pos = target
            c = combo.pop(w)
            if lead is None:
                continue  # truncated to zero
            repl = self._apply_at(w, lead, pos)
            for w2, c2 in repl.items():
                combo[w2] = combo.get(w2, _zero(self.f)) + c * c2
                if self.f.is_prime_field:
                    combo[w2] %= self.f.p
            combo = {w2: c2 for w2, c2 in combo.items() if _nz(self.f, c2)}

    def _find_redex(self, w):
        best = None
        for lead in self.rules:
            ls = len(lead)
            for i in range(len(w) - ls + 1):
                if w[i : i + ls] == lead:
                    if best is None or i < best[1]:
                        best = (lead, i)
                    break
        return best

    def normal_words(self, length_cap=WORD_LENGTH_CAP):
        """All irreducible words grouped by length; NonAdmissible if unbounded."""
        q = self.q
        by_tgt = {}
        for name, s, t in q.arrows:
            by_tgt.setdefault(s, []).append(name)
        words = []
        frontier = []
        for name, s, t in q.arrows:
            if not self._reducible((name,)):
                frontier.append(((name,), t))
        while frontier:
            words.extend(w for w, _ in frontier)
            if len(frontier[0][0]) >= length_cap:
                raise NonAdmissible(
                    f"irreducible path of length {length_cap}: "
                    f"{word_str(frontier[0][0])} (ideal not admissible?)"
                )
            nxt = []
            for w, t in frontier:
                for a in by_tgt.get(t, []):
                    w2 = w + (a,)
                    # w is irreducible, so any redex in w2 ends at the end
                    if self.truncate is not None and len(w2) >= self.truncate:
                        continue
                    if any(
                        w2[len(w2) - len(lead) :] == lead for lead in self.rules
                    ):
                        continue
                    nxt.append((w2, self.q.tgt[a]))
            frontier = nxt
        return words


def _one(f):
    return 1 if f.is_prime_field else Fraction(1)


def _zero(f):
    return 0 if f.is_prime_field else Fraction(0)


def _nz(f, c):
    return (c % f.p != 0) if f.is_prime_field else c != 0


# ---------------------------------------------------------------------------
# algebra construction


class PresentedAlgebra(TableAlgebra):
    """TableAlgebra remembering its quiver presentation."""

    def __init__(self, pres, rewriter, words, **kw):
        self.presentation = pres
        self.rewriter = rewriter
        self.basis_words = words  # ('E', v) or tuple of arrow names
        super().__init__(**kw)


def build_algebra(pres: Presentation, length_cap=WORD_LENGTH_CAP) -> PresentedAlgebra:
    q = pres.quiver
    f = pres.field
    rw = Rewriter(q, f, pres.relations, truncate=pres.truncate)
    arrow_words = rw.normal_words(length_cap=length_cap)
    words = [("E", v) for v in q.vertices] + sorted(
        arrow_words, key=lambda w: _word_key(q, w)
    )
    index = {w: i for i, w in enumerate(words)}
    n = len(words)

    def wsrc(w):
        return w[1] if w[0] == "E" else q.src[w[0]]

    def wtgt(w):
        return w[1] if w[0] == "E" else q.tgt[w[-1]]

    def vec_of_combo(combo):
        v = ex.zeros(f, n, 1)[:, 0]
        for w, c in combo.items():
            v[index[w]] = c
        return v

    table = (
        np.zeros((n, n, n), dtype=np.int64)
        if f.is_prime_field
        else np.full((n, n, n), Fraction(0), dtype=object)
    )
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            # product b_i * b_j = "wj then wi"
            if wtgt(wj) != wsrc(wi):
                continue
            if wi[0] == "E":
                table[i, j, j] = _one(f)
                continue
            if wj[0] == "E":
                table[i, j, i] = _one(f)
                continue
            combo = rw.reduce_word(wj + wi)
            table[i, j] = vec_of_combo(combo)

    unit = ex.zeros(f, n, 1)[:, 0]
    idems = []
    for k, v in enumerate(q.vertices):
        e = ex.zeros(f, n, 1)[:, 0]
        e[index[("E", v)]] = _one(f)
        idems.append(e)
        unit = unit + e
    gens = [(f"e_{v}", idems[k]) for k, v in enumerate(q.vertices)]
    for name, s, t in q.arrows:
        if (name,) in index:
            g = ex.zeros(f, n, 1)[:, 0]
            g[index[(name,)]] = _one(f)
        else:
            g = vec_of_combo(rw.reduce_word((name,)))
        gens.append((name, g))

    grading = [0 if w[0] == "E" else len(w) for w in words]
    source = [q.vindex[wsrc(w)] for w in words]
    target = [q.vindex[wtgt(w)] for w in words]
    labels = [word_str(w) for w in words]
    alg = PresentedAlgebra(
        pres,
        rw,
        words,
        field=f,
        labels=labels,
        table=table,
        unit_vec=unit,
        idempotents=idems,
        generators=gens,
        grading=grading,
        source=source,
        target=target,
        validate=(n <= 40),
    )
    return alg


def subalgebra_elements(alg: PresentedAlgebra):
    """The SUBALGEBRA generators of the presentation as algebra elements."""
    pres = alg.presentation
    f = alg.field
    index = {w: i for i, w in enumerate(alg.basis_words)}
    out = []
    for terms in pres.subalgebra:
        v = ex.zeros(f, alg.dim, 1)[:, 0]
        for c, w, s, t in terms:
            if w[0] == "E":
                v[index[w]] = v[index[w]] + c
            else:
                combo = alg.rewriter.reduce_word(w)
                for w2, c2 in combo.items():
                    v[index[w2]] = v[index[w2]] + c * c2
        if f.is_prime_field:
            v %= f.p
        out.append(v)
    return out
