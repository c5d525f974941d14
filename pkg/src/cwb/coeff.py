"""Finite windows of the coefficient Lie algebra.

The coefficient algebra has basis symbols ``e_{k,p}`` (generator ``k``,
integer index ``p``) subject to ``(d a)_p = -p a_{p-1}``, with

    [a_m, b_n] = sum_j binom(m, j) (a_(j) b)_{m+n-j},

where ``a_(j) b`` is ``j!`` times the coefficient of ``l^j`` in the
bracket.  Elements are dicts ``(k, index) -> coefficient``; an index is an
``int`` or, for symbolic-index checks, a ``Poly`` in parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .exactpoly import Poly
from .lca import LcaPresentation
from .verify import VerifyReport


def _falling(m, j: int) -> Poly:
    out = Poly.const(1)
    for t in range(j):
        out = out * (Poly.coerce(m) - t)
    return out


def _key_index(idx):
    if isinstance(idx, Poly) and idx.is_constant():
        return int(idx.constant_value())
    return idx


def mode(poly_in_d: Poly, k: int, p) -> dict:
    """``(q(d) e_k)_p`` in normal form."""
    out: dict = {}
    for r in range(int(max(poly_in_d.degree("d"), 0)) + 1):
        c = poly_in_d.coeff("d", r)
        if not c:
            continue
        coef = c * _falling(p, r) * (-1) ** r
        if coef:
            key = (k, _key_index(Poly.coerce(p) - r) if isinstance(p, Poly) else p - r)
            out[key] = out.get(key, Poly()) + coef
    return {key: v for key, v in out.items() if v}


def coeff_bracket(A: LcaPresentation, i: int, m, j: int, n) -> dict:
    """``[e_{i,m}, e_{j,n}]`` expanded into basis symbols."""
    out: dict = {}
    for k, P in enumerate(A.table[i][j]):
        if not P:
            continue
        for t in range(int(P.degree("l")) + 1):
            part = P.coeff("l", t)
            if not part:
                continue
            f = _falling(m, t)
            if not f:
                continue
            idx = (Poly.coerce(m) + n - t) if isinstance(m, Poly) or isinstance(n, Poly) else m + n - t
            for key, c in mode(part * f, k, idx).items():
                out[key] = out.get(key, Poly()) + c
    return {key: v for key, v in out.items() if v}


def _lin_bracket(fn, u: dict, v: dict) -> dict:
    out: dict = {}
    for x, cx in u.items():
        for y, cy in v.items():
            for key, c in fn(x, y).items():
                out[key] = out.get(key, Poly()) + cx * cy * c
    return {key: c for key, c in out.items() if c}


@dataclass
class CoeffWindow:
    """Brackets of ``e_{i,m}``, ``e_{j,n}`` for ``|m|, |n| <= W``.

    Products whose indices fall outside the window are computed on demand
    from the structure table, so Jacobi checks need no guard band.
    """

    A: LcaPresentation
    W: int
    brackets: dict = field(default_factory=dict)   # (i, m, j, n) -> element

    def bracket(self, x: tuple, y: tuple) -> dict:
        (i, m), (j, n) = x, y
        got = self.brackets.get((i, m, j, n))
        if got is not None:
            return got
        return coeff_bracket(self.A, i, m, j, n)

    def indices(self):
        return range(-self.W, self.W + 1)

    def dump(self) -> str:
        g = self.A.gens
        lines = []
        for (i, m, j, n), val in sorted(self.brackets.items()):
            lines.append(f"[{g[i]}_{m}, {g[j]}_{n}] = {render_element(val, g)}")
        return "\n".join(lines) + ("\n" if lines else "")


def render_element(val: dict, gens) -> str:
    if not val:
        return "0"
    parts = []
    for (k, p), c in sorted(val.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        name = f"{gens[k]}_{p}" if isinstance(p, int) else f"{gens[k]}_({p})"
        if c == 1:
            parts.append(name)
        elif c == -1:
            parts.append(f"-{name}")
        else:
            parts.append(f"({c})*{name}")
    return " + ".join(parts).replace("+ -", "- ")


def build_window(A: LcaPresentation, W: int) -> CoeffWindow:
    if W < 1:
        raise ValueError("window radius must be at least 1")
    win = CoeffWindow(A, W)
    for i, j in product(range(A.n), repeat=2):
        for m, n in product(win.indices(), repeat=2):
            win.brackets[(i, m, j, n)] = coeff_bracket(A, i, m, j, n)
    return win


def check_window_jacobi(win: CoeffWindow, radius: int | None = None) -> VerifyReport:
    """Antisymmetry and Jacobi on all basis triples with indices ``|.| <= radius``."""
    r = win.W if radius is None else radius
    basis = [(k, p) for k in range(win.A.n) for p in range(-r, r + 1)]
    g = win.A.gens
    first, fails = None, 0

    def br(u, v):
        return _lin_bracket(win.bracket, u, v)

    for x, y in product(basis, repeat=2):
        s = _add(win.bracket(x, y), win.bracket(y, x))
        if s:
            fails += 1
            if first is None:
                first = {"identity": "antisymmetry", "indices": [_lbl(g, x), _lbl(g, y)],
                         "residual": render_element(s, g)}
    cache: dict = {}

    def b1(x, y):
        key = (x, y)
        if key not in cache:
            cache[key] = win.bracket(x, y)
        return cache[key]

    for a, b, c in product(basis, repeat=3):
        if not (a < b < c):
            continue
        tot = _add(_add(br({a: Poly.const(1)}, b1(b, c)), br({b: Poly.const(1)}, b1(c, a))),
                   br({c: Poly.const(1)}, b1(a, b)))
        if tot:
            fails += 1
            if first is None:
                first = {"identity": "jacobi", "indices": [_lbl(g, a), _lbl(g, b), _lbl(g, c)],
                         "residual": render_element(tot, g)}
    return VerifyReport("coeff-jacobi", first is None, first, fails, {"radius": r})


def _lbl(g, x):
    return f"{g[x[0]]}_{x[1]}"


def _add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, Poly()) + c
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# closed forms for the rank-3 families


def _tsv_ab(gi, gj, m, n, P):
    a, b = P["a"], P["b"]
    s = m + n
    table = {
        ("L", "L"): [("L", s - 1, m - n)],
        ("L", "Y"): [("Y", s - 1, m * (a - 1) - n), ("Y", s, b)],
        ("L", "M"): [("M", s - 1, m * (2 * a - 3) - n), ("M", s, 2 * b)],
        ("Y", "Y"): [("M", s - 1, m - n)],
    }
    return table.get((gi, gj))


def _tsv_c(gi, gj, m, n, P):
    c = P["c"]
    s = m + n
    table = {
        ("L", "L"): [("L", s - 1, m - n)],
        ("L", "Y"): [("Y", s - 1, m / 2 - n if not isinstance(m, int) else Poly.const(m) / 2 - n),
                     ("Y", s, c)],
        ("L", "M"): [("M", s - 1, -(m + n)), ("M", s, 2 * c)],
        ("Y", "Y"): [("M", s - 2, (m - n) * (m + n - 1)), ("M", s - 1, 2 * c * (n - m))],
    }
    return table.get((gi, gj))


CLOSED_FORMS = {"TSV(a,b)": (_tsv_ab, ("a", "b")), "TSV(c)": (_tsv_c, ("c",))}


def closed_form(family: str, A: LcaPresentation, i: int, m, j: int, n, values: dict) -> dict:
    """Closed-form bracket for a rank-3 family; reversed pairs by antisymmetry."""
    fn, _ = CLOSED_FORMS[family]
    gi, gj = A.gens[i], A.gens[j]
    got = fn(gi, gj, m, n, values)
    sign = 1
    if got is None:
        got = fn(gj, gi, n, m, values)
        sign = -1
    out: dict = {}
    for g, idx, c in got or []:
        c = Poly.coerce(c) * sign
        if c:
            key = (A.gens.index(g), _key_index(idx) if isinstance(idx, Poly) else idx)
            out[key] = out.get(key, Poly()) + c
    return {k: v for k, v in out.items() if v}


def compare_closed_form(win: CoeffWindow, family: str, values: dict | None = None) -> VerifyReport:
    """Every window bracket against the closed form, at integer indices."""
    A = win.A
    values = values or {p: Poly.var(p) for p in CLOSED_FORMS[family][1]}
    values = {k: Poly.coerce(v) for k, v in values.items()}
    first, fails = None, 0
    for (i, m, j, n), val in sorted(win.brackets.items()):
        want = closed_form(family, A, i, m, j, n, values)
        diff = _add(val, {k: -c for k, c in want.items()})
        if diff:
            fails += 1
            if first is None:
                first = {"indices": [f"{A.gens[i]}_{m}", f"{A.gens[j]}_{n}"],
                         "residual": render_element(diff, A.gens)}
    return VerifyReport("coeff-closed-form", first is None, first, fails, {"window": win.W})


def check_symbolic_indices(A: LcaPresentation, family: str, values: dict | None = None) -> VerifyReport:
    """Closed form as a polynomial identity in symbolic indices ``p``, ``q``."""
    p, q = Poly.var("p"), Poly.var("q")
    values = values or {s: Poly.var(s) for s in CLOSED_FORMS[family][1]}
    values = {k: Poly.coerce(v) for k, v in values.items()}
    first, fails = None, 0
    for i, j in product(range(A.n), repeat=2):
        got = coeff_bracket(A, i, p, j, q)
        want = closed_form(family, A, i, p, j, q, values)
        diff = _add(got, {k: -c for k, c in want.items()})
        if diff:
            fails += 1
            if first is None:
                first = {"indices": [A.gens[i], A.gens[j]], "residual": render_element(diff, A.gens)}
    return VerifyReport("coeff-symbolic-index", first is None, first, fails)


__all__ = ["CoeffWindow", "build_window", "check_window_jacobi", "check_symbolic_indices",
           "closed_form", "coeff_bracket", "compare_closed_form", "mode", "render_element"]
