"""Text format for presentations and Gel'fand-Dorfman data.

Example::

    # comments run to end of line
    algebra TSV(a,b) {
      generators: L, Y, M;
      bracket L L = (d + 2*l)*L;
      bracket L Y = (d + a*l + b)*Y;
      bracket L M = (d + 2*(a-1)*l + 2*b)*M;
      bracket Y Y = (d + 2*l)*M;
      job h2 --deg 6;
    }

``d`` and ``l`` stand for the derivation and the spectral parameter (the
glyphs ``∂`` and ``λ`` are accepted too, as is the Unicode minus sign).
Every additive term of a right-hand side carries exactly one generator.
A bracket clause for ``X Y`` also defines ``Y X`` by skew-symmetry; an
explicit reverse clause must agree with it.  ``novikov X Y = ...`` gives
``X∘Y`` and ``lie X Y = ...`` gives ``[X, Y]``; neither may mention ``d`` or
``l``.  ``central: C;`` marks generators annihilated by ``d``.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import VARS, Poly, render as render_poly


class DslError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


_GLYPHS = str.maketrans({"∂": "d", "λ": "l", "μ": "m", "ν": "n", "−": "-", "·": "*"})

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(){}:;,=.])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    text = text.translate(_GLYPHS)
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind in ("op", "id"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        t = self.cur
        if t.text != text:
            raise DslError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def ident(self) -> Tok:
        t = self.cur
        if t.kind != "id":
            raise DslError(f"expected a name, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    # expressions -------------------------------------------------------
    def expr(self, names) -> Poly:
        acc = self.term(names)
        while self.cur.text in ("+", "-"):
            op = self.next().text
            rhs = self.term(names)
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self, names) -> Poly:
        acc = self.unary(names)
        while self.cur.text in ("*", "/"):
            op = self.next()
            rhs = self.unary(names)
            if op.text == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise DslError("division only by nonzero rational constants", op.line, op.col)
                acc = acc / rhs.constant_value()
        return acc

    def unary(self, names) -> Poly:
        if self.cur.text == "-":
            self.next()
            return -self.unary(names)
        if self.cur.text == "+":
            self.next()
            return self.unary(names)
        return self.power(names)

    def power(self, names) -> Poly:
        base = self.atom(names)
        if self.cur.text == "^":
            self.next()
            t = self.cur
            if t.kind != "num":
                raise DslError("exponent must be a non-negative integer", t.line, t.col)
            self.next()
            base = base ** int(t.text)
        return base

    def atom(self, names) -> Poly:
        t = self.cur
        if t.kind == "num":
            self.next()
            return Poly.const(int(t.text))
        if t.kind == "id":
            self.next()
            if names is not None and t.text not in names:
                raise DslError(f"unknown identifier {t.text!r}", t.line, t.col)
            return Poly.var(t.text)
        if t.text == "(":
            self.next()
            v = self.expr(names)
            self.expect(")")
            return v
        raise DslError(f"unexpected {t.text or 'end of input'!r}", t.line, t.col)


def parse_poly(text: str, names=None) -> Poly:
    """Parse a polynomial expression; ``names`` restricts the identifiers."""
    p = _Parser(tokenize(text))
    v = p.expr(names)
    if p.cur.kind != "eof":
        raise DslError(f"trailing input {p.cur.text!r}", p.cur.line, p.cur.col)
    return v


# ---------------------------------------------------------------------------
# documents

RESERVED = frozenset(VARS) | {"algebra", "generators", "bracket", "novikov", "lie", "job", "central"}


@dataclass
class AlgebraDoc:
    name: str
    params: list = field(default_factory=list)
    gens: list = field(default_factory=list)
    central: list = field(default_factory=list)
    brackets: dict = field(default_factory=dict)   # (X, Y) -> {Z: Poly}
    novikov: dict = field(default_factory=dict)
    lie: dict = field(default_factory=dict)
    jobs: list = field(default_factory=list)       # list of argv lists

    def presentation(self):
        """The presentation; built from the bialgebra when only product blocks are given."""
        from .lca import make_presentation

        if not self.brackets and (self.novikov or self.lie):
            from .gdb import to_quadratic

            A = to_quadratic(self.bialgebra())
            return make_presentation(self.name, A.gens, A.params,
                                     _table_clauses(A), skew_complete=False)
        return make_presentation(self.name, self.gens, self.params, self.brackets,
                                 central=self.central)

    def bialgebra(self):
        from .gdb import GdBialgebra

        return GdBialgebra.from_products(self.name, self.gens, self.novikov, self.lie,
                                         params=self.params)


def _table_clauses(A) -> dict:
    out = {}
    for i, gi in enumerate(A.gens):
        for j, gj in enumerate(A.gens):
            ent = {A.gens[k]: p for k, p in enumerate(A.table[i][j]) if p}
            if ent:
                out[(gi, gj)] = ent
    return out


def _split_generators(poly: Poly, gens: list, tok: Tok, what: str) -> dict:
    """Read ``sum_k p_k * G_k`` off a polynomial in which generators are symbols."""
    gset = set(gens)
    out: dict = {}
    for mono, c in poly.items():
        gs = [(k, e) for k, e in mono if k in gset]
        if len(gs) != 1 or gs[0][1] != 1:
            if not gs:
                msg = f"{what}: a term has no generator factor"
            else:
                msg = f"{what}: two generator factors in one term"
            raise DslError(msg, tok.line, tok.col)
        g = gs[0][0]
        rest = Poly._raw({tuple(x for x in mono if x[0] not in gset): c})
        out[g] = out.get(g, Poly()) + rest
    return {g: p for g, p in out.items() if p}


def parse(text: str) -> AlgebraDoc:
    p = _Parser(tokenize(text))
    p.expect("algebra")
    name = p.ident().text
    params: list = []
    p.expect("(")
    if not p.accept(")"):
        while True:
            t = p.ident()
            if t.text in RESERVED:
                raise DslError(f"{t.text!r} is reserved", t.line, t.col)
            if t.text in params:
                raise DslError(f"parameter {t.text!r} declared twice", t.line, t.col)
            params.append(t.text)
            if p.accept(")"):
                break
            p.expect(",")
    doc = AlgebraDoc(name, params)
    braced = p.accept("{")
    seen: set = set()
    while True:
        t = p.cur
        if t.kind == "eof" or t.text == "}":
            break
        kw = p.ident()
        if kw.text in ("generators", "central"):
            p.expect(":")
            names = []
            while True:
                g = p.ident()
                if g.text in RESERVED or g.text in params:
                    raise DslError(f"{g.text!r} cannot name a generator", g.line, g.col)
                names.append(g.text)
                if not p.accept(","):
                    break
            p.expect(";")
            if kw.text == "generators":
                if doc.gens:
                    raise DslError("generators declared twice", kw.line, kw.col)
                if len(set(names)) != len(names):
                    raise DslError("repeated generator name", kw.line, kw.col)
                doc.gens = names
            else:
                for g in names:
                    if g not in doc.gens:
                        raise DslError(f"unknown generator {g!r}", kw.line, kw.col)
                doc.central = names
        elif kw.text in ("bracket", "novikov", "lie"):
            if not doc.gens:
                raise DslError("generators must be declared first", kw.line, kw.col)
            x, y = p.ident(), p.ident()
            for g in (x, y):
                if g.text not in doc.gens:
                    raise DslError(f"unknown generator {g.text!r}", g.line, g.col)
            p.expect("=")
            allowed = set(params) | set(doc.gens)
            if kw.text == "bracket":
                allowed |= {"d", "l"}
            else:
                for bad in ("d", "l"):
                    allowed.discard(bad)
            rhs_tok = p.cur
            try:
                rhs = p.expr(allowed)
            except DslError as e:
                if kw.text != "bracket" and e.msg.startswith("unknown identifier") and \
                        any(f"'{v}'" in e.msg for v in ("d", "l")):
                    raise DslError(f"{kw.text} block may not use d or l", e.line, e.col) from None
                raise
            p.expect(";")
            key = (kw.text, x.text, y.text)
            if key in seen:
                raise DslError(f"duplicate {kw.text} clause for {x.text} {y.text}", kw.line, kw.col)
            seen.add(key)
            val = _split_generators(rhs, doc.gens, rhs_tok, f"{kw.text} {x.text} {y.text}")
            target = {"bracket": doc.brackets, "novikov": doc.novikov, "lie": doc.lie}[kw.text]
            target[(x.text, y.text)] = val
        elif kw.text == "job":
            words = []
            while p.cur.text != ";":
                if p.cur.kind == "eof":
                    raise DslError("unterminated job directive", kw.line, kw.col)
                words.append(p.next())
            p.next()
            doc.jobs.append(_join_job(words))
        else:
            raise DslError(f"unknown directive {kw.text!r}", kw.line, kw.col)
    if braced:
        p.expect("}")
    if p.cur.kind != "eof":
        raise DslError(f"trailing input {p.cur.text!r}", p.cur.line, p.cur.col)
    if not doc.gens:
        raise DslError("no generators declared", 1, 1)
    # skew consistency is checked here so errors carry the document context
    try:
        doc.presentation()
    except DslError:
        raise
    except ValueError as e:
        raise DslError(str(e)) from None
    return doc


def _join_job(words: list[Tok]) -> list[str]:
    """Re-join tokens into argv words; adjacent tokens without spacing fuse."""
    argv: list = []
    prev = None
    for t in words:
        glued = prev is not None and t.line == prev.line and t.col == prev.col + len(prev.text)
        if glued and argv:
            argv[-1] += t.text
        else:
            argv.append(t.text)
        prev = t
    return argv


# ---------------------------------------------------------------------------
# rendering


def render_rhs(val: dict, gens: list) -> str:
    parts = []
    for g in gens:
        q = val.get(g)
        if q is None or q.is_zero():
            continue
        if q == 1:
            parts.append(g)
        elif q == -1:
            parts.append(f"-{g}")
        else:
            parts.append(f"({render_poly(q)})*{g}")
    if not parts:
        return "0"
    out = parts[0]
    for s in parts[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def render(doc: AlgebraDoc) -> str:
    lines = [f"algebra {doc.name}({','.join(doc.params)}) {{"]
    lines.append(f"  generators: {', '.join(doc.gens)};")
    if doc.central:
        lines.append(f"  central: {', '.join(doc.central)};")
    for kw, block in (("bracket", doc.brackets), ("novikov", doc.novikov), ("lie", doc.lie)):
        for x in doc.gens:
            for y in doc.gens:
                val = block.get((x, y))
                if val is not None:
                    lines.append(f"  {kw} {x} {y} = {render_rhs(val, doc.gens)};")
    for job in doc.jobs:
        lines.append("  job " + " ".join(job) + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def doc_from_presentation(A) -> AlgebraDoc:
    """Canonical document: one clause per unordered pair, lower index first."""
    brackets = {}
    n = A.n
    for i in range(n):
        for j in range(i, n):
            ent = {A.gens[k]: p for k, p in enumerate(A.table[i][j]) if p}
            if ent:
                brackets[(A.gens[i], A.gens[j])] = ent
    name = A.name if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", A.name) else _ident(A.name)
    return AlgebraDoc(name, list(A.params), list(A.gens),
                      [A.gens[k] for k in sorted(A.central)], brackets)


def _ident(s: str) -> str:
    s = re.sub(r"[^A-Za-z_0-9]+", "_", s).strip("_")
    return s if s and not s[0].isdigit() else f"A_{s}"


def render_presentation(A) -> str:
    return render(doc_from_presentation(A))


def split_job(text: str) -> list[str]:
    return shlex.split(text)


__all__ = ["AlgebraDoc", "DslError", "parse", "parse_poly", "render", "render_presentation",
           "doc_from_presentation", "tokenize"]
