"""Conformal derivations within a degree box.

A candidate is ``d_l(e_i) = sum_k D[i][k](l, d) e_k`` with
``D[i][k] = sum c[i][k][s][t] l^s d^t`` for ``s <= deg_l``, ``t <= deg_d``.
Conformal linearity ``d_l(p(d) u) = p(d + l) d_l(u)`` is built in, and the
Leibniz rule

    d_l [a_m b] = [(d_l a)_{l+m} b] + [a_m (d_l b)]

is imposed on generator pairs.  Inner derivations ``ad(d^t e_j)`` are
generated beyond the box and cut back to it, so the quotient is taken
inside one coordinate system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .exactpoly import D, LAM, MU, Poly, VARS
from .lca import Element, LcaPresentation, bracket
from .linalg import SolutionSpace, echelon, norm, nullspace_rows, quotient
from .verify import VerifyReport


class _Box:
    def __init__(self, n: int, dl: int, dd: int):
        self.n, self.dl, self.dd = n, dl, dd
        self.w = (dl + 1) * (dd + 1)

    @property
    def ncols(self) -> int:
        return self.n * self.n * self.w

    def col(self, i, k, s, t) -> int:
        return ((i * self.n + k) * (self.dl + 1) + s) * (self.dd + 1) + t

    def uncol(self, c: int):
        rest, t = divmod(c, self.dd + 1)
        rest, s = divmod(rest, self.dl + 1)
        i, k = divmod(rest, self.n)
        return i, k, s, t

    def order(self) -> list:
        """Input-major, then output, then descending degree."""
        cells = [(s, t) for s in range(self.dl + 1) for t in range(self.dd + 1)]
        cells.sort(key=lambda st: (-(st[0] + st[1]), -st[0]))
        return [self.col(i, k, s, t) for i in range(self.n) for k in range(self.n) for s, t in cells]


def _acc(form: dict, col: int, p: Poly) -> None:
    q = form.get(col, Poly()) + p
    if q:
        form[col] = q
    else:
        form.pop(col, None)


def derivation_rows(A: LcaPresentation, dl: int, dd: int) -> list:
    n = A.n
    box = _Box(n, dl, dd)
    lam_p = [LAM ** s for s in range(dl + 1)]
    d_p = [D ** t for t in range(dd + 1)]
    neg = -LAM - MU
    neg_p = [neg ** t for t in range(dd + 1)]
    shift = MU + D
    shift_p = [shift ** t for t in range(dd + 1)]
    lm = LAM + MU
    rows: dict = {}
    for i, j in product(range(n), repeat=2):
        forms = [dict() for _ in range(n)]
        for k in range(n):
            P = A.table[i][j][k]
            if P:
                Pm = P.substitute({"d": D + LAM, "l": MU})
                for r, s, t in product(range(n), range(dl + 1), range(dd + 1)):
                    _acc(forms[r], box.col(k, r, s, t), Pm * lam_p[s] * d_p[t])
        for k, r in product(range(n), repeat=2):
            P = A.table[k][j][r]
            if P:
                Pl = P.substitute({"l": lm})
                for s, t in product(range(dl + 1), range(dd + 1)):
                    _acc(forms[r], box.col(i, k, s, t), -(lam_p[s] * neg_p[t] * Pl))
            P = A.table[i][k][r]
            if P:
                Pm = P.substitute({"l": MU})
                for s, t in product(range(dl + 1), range(dd + 1)):
                    _acc(forms[r], box.col(j, k, s, t), -(lam_p[s] * shift_p[t] * Pm))
        for form in forms:
            bucket: dict = {}
            for c, p in form.items():
                for mono, coef in p.split(VARS).items():
                    bucket.setdefault(mono, {})[c] = norm(coef)
            for row in bucket.values():
                rows.setdefault(frozenset(row.items()), row)
    return list(rows.values())


def inner_vectors(A: LcaPresentation, dl: int, dd: int, extra: int = 2) -> tuple:
    """``ad(d^t e_j)`` restricted to the box, together with the genericity used."""
    n = A.n
    box = _Box(n, dl, dd)
    tmax = max(dl, dd) + extra
    raw = []
    for j in range(n):
        for t in range(tmax + 1):
            v = {}
            for i, k in product(range(n), repeat=2):
                p = A.table[j][i][k]
                if not p:
                    continue
                q = (-LAM) ** t * p
                for mono, c in q.items():
                    e = dict(mono)
                    v[(i, k, e.get("l", 0), e.get("d", 0))] = v.get((i, k, e.get("l", 0), e.get("d", 0)), Poly()) + \
                        Poly._raw({tuple(x for x in mono if x[0] not in ("l", "d")): c})
            v = {key: c for key, c in v.items() if c}
            if v:
                raw.append(v)
    if not raw:
        return [], []
    outside = sorted({key for v in raw for key in v if key[2] > dl or key[3] > dd})
    if not outside:
        combos = [{a: Poly.const(1)} for a in range(len(raw))]
        gen: list = []
    else:
        pos = {key: r for r, key in enumerate(outside)}
        rows = [dict() for _ in outside]
        for a, v in enumerate(raw):
            for key, c in v.items():
                if key in pos:
                    rows[pos[key]][a] = norm(c)
        ns = nullspace_rows(rows, len(raw))
        combos, gen = ns.basis, ns.genericity
    out = []
    for comb in combos:
        w: dict = {}
        for a, x in comb.items():
            for key, c in raw[a].items():
                if key[2] <= dl and key[3] <= dd:
                    col = box.col(*key)
                    w[col] = w.get(col, Poly()) + c * x
        w = {c: norm(x) for c, x in w.items() if x}
        if w:
            out.append(w)
    return out, list(gen)


@dataclass
class DerivationSpace:
    A: LcaPresentation
    deg_l: int
    deg_d: int
    all: SolutionSpace
    inner: list
    outer: list
    genericity: list = field(default_factory=list)

    @property
    def outer_dim(self) -> int:
        return len(self.outer)

    @property
    def inner_dim(self) -> int:
        return echelon(self.inner, self.all.ncols).rank if self.inner else 0

    @property
    def label(self) -> str:
        return f"stable through bound ({self.deg_l}, {self.deg_d})"

    def as_map(self, vec: Mapping) -> dict:
        return vector_to_map(self.A, self.deg_l, self.deg_d, vec)

    def render(self, vec: Mapping, name: str = "R") -> str:
        mp = self.as_map(vec)
        parts = []
        for gi in self.A.gens:
            val = mp.get(gi, {})
            terms = [f"({p})*{gk}" if p != 1 else gk for gk, p in val.items()]
            parts.append(f"{name}_l({gi})=" + (" + ".join(terms) if terms else "0"))
        return "; ".join(parts)


def vector_to_map(A: LcaPresentation, dl: int, dd: int, vec: Mapping) -> dict:
    box = _Box(A.n, dl, dd)
    out: dict = {}
    for c, x in vec.items():
        i, k, s, t = box.uncol(c)
        gi, gk = A.gens[i], A.gens[k]
        term = Poly.coerce(x) * LAM ** s * D ** t
        cur = out.setdefault(gi, {})
        cur[gk] = cur.get(gk, Poly()) + term
    return {gi: {gk: p for gk, p in val.items() if p} for gi, val in out.items()}


def solve_derivations(A: LcaPresentation, deg_l: int = 4, deg_d: int = 4) -> DerivationSpace:
    box = _Box(A.n, deg_l, deg_d)
    order = box.order()
    rows = derivation_rows(A, deg_l, deg_d)
    sol = nullspace_rows(rows, box.ncols, order)
    inner, gen_i = inner_vectors(A, deg_l, deg_d)
    reps, gen_q, _ = quotient(inner, sol.basis, box.ncols, order)
    gen: list = []
    for g in list(sol.genericity) + list(gen_i) + list(gen_q):
        if g not in gen:
            gen.append(g)
    return DerivationSpace(A, deg_l, deg_d, sol, inner, reps, gen)


def _apply(A: LcaPresentation, dmap: Mapping, x: Element) -> Element:
    """``d_l(x)`` using conformal linearity."""
    out = Element.zero(A.n)
    for k, p in enumerate(x.coords):
        if not p:
            continue
        img = dmap.get(A.gens[k])
        if not img:
            continue
        ps = p.substitute({"d": D + LAM})
        vec = [Poly() for _ in range(A.n)]
        for gk, q in img.items():
            vec[A.index(gk)] = Poly.coerce(q)
        out = out + Element(tuple(vec)).scale(ps)
    return out


def derivation_residual(A: LcaPresentation, dmap: Mapping, i: int, j: int) -> Element:
    a, b = A.gen(i), A.gen(j)
    lhs = _apply(A, dmap, bracket(A, a, b, MU))
    r1 = bracket(A, _apply(A, dmap, a), b, LAM + MU)
    r2 = bracket(A, a, _apply(A, dmap, b), MU)
    return lhs - r1 - r2


def is_derivation(A: LcaPresentation, dmap: Mapping) -> VerifyReport:
    """``dmap`` maps generator names to ``{generator: poly in l, d}``."""
    first, fails = None, 0
    for i, j in product(range(A.n), repeat=2):
        res = derivation_residual(A, dmap, i, j)
        for r, p in enumerate(res.coords):
            if p:
                fails += 1
                if first is None:
                    first = {"indices": [A.gens[i], A.gens[j], A.gens[r]], "residual": str(p)}
    return VerifyReport("derivation", first is None, first, fails)


def ad(A: LcaPresentation, x: Element) -> dict:
    """Inner derivation ``ad(x)_l = [x_l -]`` as a generator map."""
    out = {}
    for i, g in enumerate(A.gens):
        v = bracket(A, x, A.gen(i))
        out[g] = {A.gens[k]: p for k, p in enumerate(v.coords) if p}
    return out


def in_box(dmap: Mapping, deg_l: int, deg_d: int) -> bool:
    return all(p.degree("l") <= deg_l and p.degree("d") <= deg_d
               for val in dmap.values() for p in val.values())


def map_to_vector(A: LcaPresentation, deg_l: int, deg_d: int, dmap: Mapping) -> dict:
    box = _Box(A.n, deg_l, deg_d)
    vec: dict = {}
    for gi, val in dmap.items():
        for gk, p in val.items():
            for mono, c in Poly.coerce(p).items():
                e = dict(mono)
                s, t = e.get("l", 0), e.get("d", 0)
                if s > deg_l or t > deg_d:
                    raise ValueError("map does not fit in the degree box")
                rest = Poly._raw({tuple(x for x in mono if x[0] not in ("l", "d")): c})
                col = box.col(A.index(gi), A.index(gk), s, t)
                vec[col] = vec.get(col, Poly()) + rest
    return {c: norm(x) for c, x in vec.items() if x}


__all__ = ["DerivationSpace", "ad", "derivation_residual", "derivation_rows", "in_box",
           "inner_vectors", "is_derivation", "map_to_vector", "solve_derivations",
           "vector_to_map"]
