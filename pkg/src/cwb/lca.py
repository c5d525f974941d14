"""Finite free Lie conformal algebras given by structure polynomials.

A presentation of rank ``n`` stores ``table[i][j][k]``, a polynomial in
``d`` (the derivation) and ``l`` (the spectral parameter) such that

    [e_i _l e_j] = sum_k table[i][j][k](d, l) e_k.

Elements are ``n``-tuples of polynomials in ``d``; values of a bracket are
tuples of polynomials in ``d`` and the spectral parameters.  Generators
listed in ``central`` are annihilated by ``d`` (used for central
extensions), so their coordinates never carry a ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactpoly import D, LAM, MU, Poly, PolyError, RatFn, VARS
from .linalg import AffineSolution, solve_affine
from .verify import VerifyReport


class LcaError(ValueError):
    pass


class NonlinearResidual(LcaError):
    """A constraint stays nonlinear in the unknowns after staged solving."""

    def __init__(self, monomial: str, equation: str):
        self.monomial = monomial
        self.equation = equation
        super().__init__(f"residual nonlinear in unknowns: monomial {monomial} in {equation}")


@dataclass(frozen=True)
class Element:
    """Coordinates over the free basis; also used for lambda-bracket values."""

    coords: tuple

    @classmethod
    def zero(cls, n: int) -> "Element":
        return cls(tuple(Poly() for _ in range(n)))

    @classmethod
    def basis(cls, n: int, i: int, coeff: Poly | None = None) -> "Element":
        c = [Poly() for _ in range(n)]
        c[i] = Poly.const(1) if coeff is None else coeff
        return cls(tuple(c))

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int) -> Poly:
        return self.coords[k]

    def __add__(self, other: "Element") -> "Element":
        if len(self) != len(other):
            raise LcaError("rank mismatch")
        return Element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(tuple(-a for a in self.coords))

    def scale(self, p) -> "Element":
        p = Poly.coerce(p)
        return Element(tuple(a * p for a in self.coords))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coords)

    def map(self, fn) -> "Element":
        return Element(tuple(fn(a) for a in self.coords))


LambdaValue = Element


@dataclass(frozen=True)
class LcaPresentation:
    name: str
    gens: tuple
    params: tuple
    table: tuple
    central: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.gens)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise LcaError("table dimensions do not match the generator list")
        for i, j in product(range(n), repeat=2):
            if len(self.table[i][j]) != n:
                raise LcaError(f"entry [{self.gens[i]} {self.gens[j]}] has wrong length")
            for p in self.table[i][j]:
                bad = p.variables() - {"d", "l"}
                if bad:
                    raise LcaError(f"structure polynomial {p} uses variables {sorted(bad)}")

    @property
    def n(self) -> int:
        return len(self.gens)

    def index(self, g: str | int) -> int:
        if isinstance(g, int):
            return g
        try:
            return self.gens.index(g)
        except ValueError:
            raise LcaError(f"unknown generator {g!r}") from None

    def entry(self, i, j) -> tuple:
        return self.table[self.index(i)][self.index(j)]

    def gen(self, g, coeff: Poly | None = None) -> Element:
        return Element.basis(self.n, self.index(g), coeff)

    def all_params(self) -> set:
        out = set(self.params)
        for row in self.table:
            for ent in row:
                for p in ent:
                    out |= p.params()
        return out

    def same_table(self, other: "LcaPresentation") -> bool:
        return (self.gens == other.gens and self.table == other.table
                and self.central == other.central)

    def specialize(self, assignment: Mapping[str, object], name: str | None = None) -> "LcaPresentation":
        """Substitute parameters (rationals or parameter polynomials)."""
        assignment = {k: (v if isinstance(v, Poly) else Fraction(v)) for k, v in assignment.items()}
        table = tuple(
            tuple(tuple(p.subs_params(assignment) for p in ent) for ent in row)
            for row in self.table
        )
        left = set()
        for row in table:
            for ent in row:
                for p in ent:
                    left |= p.params()
        params = tuple(p for p in self.params if p in left) + tuple(
            sorted(left - set(self.params)))
        if name is None:
            pts = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(assignment.items()))
            name = f"{self.name}[{pts}]"
        return LcaPresentation(name, self.gens, params, table, self.central)

    def normalize(self, v: Element) -> Element:
        if not self.central:
            return v
        return Element(tuple(
            c.substitute({"d": Poly()}) if k in self.central else c
            for k, c in enumerate(v.coords)
        ))


def _fmt(v) -> str:
    return str(v)


def make_presentation(name: str, gens: Sequence[str], params: Sequence[str],
                      clauses: Mapping[tuple, Mapping[str, Poly]],
                      skew_complete: bool = True,
                      central: Iterable[str] = ()) -> LcaPresentation:
    """Build a presentation from bracket clauses ``{(gi, gj): {gk: poly}}``.

    With ``skew_complete`` a clause for ``(gi, gj)`` supplies ``(gj, gi)``
    through ``P -> -P(d, -l-d)``; an explicit reverse clause must agree.
    """
    gens = tuple(gens)
    n = len(gens)
    idx = {g: i for i, g in enumerate(gens)}
    table = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
    given = set()
    for (gi, gj), val in clauses.items():
        i, j = idx[gi], idx[gj]
        for gk, p in val.items():
            table[i][j][idx[gk]] = Poly.coerce(p)
        given.add((i, j))
    if skew_complete:
        for (i, j) in sorted(given):
            if i == j:
                continue
            flipped = [skew_flip(p) for p in table[i][j]]
            if (j, i) in given:
                if flipped != table[j][i]:
                    raise LcaError(
                        f"clause [{gens[j]} {gens[i]}] conflicts with the skew image of "
                        f"[{gens[i]} {gens[j]}]")
            else:
                table[j][i] = flipped
    cset = frozenset(idx[c] for c in central)
    frozen = tuple(tuple(tuple(ent) for ent in row) for row in table)
    return LcaPresentation(name, gens, tuple(params), frozen, cset)


def skew_flip(p: Poly) -> Poly:
    """``-p(d, -l-d)``: the entry forced on the reversed pair by skew-symmetry."""
    return -p.substitute({"l": -LAM - D})


# ---------------------------------------------------------------------------
# bracket


def bracket(A: LcaPresentation, x: Element, y: Element, lam: Poly = LAM) -> Element:
    """``[x _lam y]`` for elements whose coordinates are polynomials in ``d``.

    Coordinates may also contain other spectral variables, which are treated
    as scalars.  ``p(d)`` on the left becomes ``p(-lam)``, on the right
    ``p(lam + d)``.
    """
    n = A.n
    if len(x) != n or len(y) != n:
        raise LcaError(f"rank mismatch: algebra has rank {n}")
    left_sub = {"d": -lam}
    right_sub = {"d": lam + D}
    lam_sub = None if lam == LAM else {"l": lam}
    acc: list = [Poly() for _ in range(n)]
    ys = [(j, q.substitute(right_sub)) for j, q in enumerate(y.coords) if q]
    for i, p in enumerate(x.coords):
        if not p:
            continue
        pl = p.substitute(left_sub)
        for j, qs in ys:
            ent = A.table[i][j]
            pq = None
            for k, P in enumerate(ent):
                if not P:
                    continue
                if pq is None:
                    pq = pl * qs
                Pk = P if lam_sub is None else P.substitute(lam_sub)
                acc[k] = acc[k] + pq * Pk
    return A.normalize(Element(tuple(acc)))


def jacobi_residual(A: LcaPresentation, i: int, j: int, k: int) -> Element:
    """``[a_l[b_m c]] - [[a_l b]_{l+m} c] - [b_m[a_l c]]`` on generators."""
    a, b, c = A.gen(i), A.gen(j), A.gen(k)
    lhs = bracket(A, a, bracket(A, b, c, MU), LAM)
    r1 = bracket(A, bracket(A, a, b, LAM), c, LAM + MU)
    r2 = bracket(A, b, bracket(A, a, c, LAM), MU)
    return A.normalize(lhs - r1 - r2)


def skew_residual(A: LcaPresentation, i: int, j: int) -> Element:
    res = []
    for k in range(A.n):
        p = A.table[i][j][k]
        q = A.table[j][i][k].substitute({"l": -LAM - D})
        res.append(p + q)
    return A.normalize(Element(tuple(res)))


def check_skew(A: LcaPresentation) -> VerifyReport:
    first = None
    fails = 0
    for i, j in product(range(A.n), repeat=2):
        if j < i:
            continue
        res = skew_residual(A, i, j)
        for k, r in enumerate(res.coords):
            if r:
                fails += 1
                if first is None:
                    first = {"indices": [A.gens[i], A.gens[j], A.gens[k]], "residual": str(r)}
    return VerifyReport("skew", first is None, first, fails)


def check_jacobi(A: LcaPresentation) -> VerifyReport:
    first = None
    fails = 0
    for i, j, k in product(range(A.n), repeat=3):
        res = jacobi_residual(A, i, j, k)
        for t, r in enumerate(res.coords):
            if r:
                fails += 1
                if first is None:
                    first = {"indices": [A.gens[i], A.gens[j], A.gens[k], A.gens[t]],
                             "residual": str(r)}
    return VerifyReport("jacobi", first is None, first, fails)


def check_axioms(A: LcaPresentation) -> list[VerifyReport]:
    return [check_skew(A), check_jacobi(A)]


# ---------------------------------------------------------------------------
# parametric constraint solving


def residual_equations(polys: Iterable[Poly]) -> list[Poly]:
    """Coefficients (in the variables) of each residual; each must vanish."""
    eqs = []
    seen = set()
    for p in polys:
        for _, c in p.split(VARS).items():
            if c and c not in seen:
                seen.add(c)
                eqs.append(c)
    return eqs


def subs_rational(p: Poly, mapping: Mapping[str, RatFn]) -> RatFn:
    """Substitute rational functions for parameters."""
    if not mapping or not (p.params() & set(mapping)):
        return RatFn(p)
    out = RatFn(Poly())
    for m, c in p.items():
        term = RatFn(Poly._raw({tuple(x for x in m if x[0] not in mapping): c}))
        for name, e in m:
            if name in mapping:
                f = mapping[name]
                for _ in range(e):
                    term = term * f
        out = out + term
    return out


def _linear_row(eq: Poly, unknowns: set) -> dict | None:
    row: dict = {}
    for m, c in eq.items():
        us = [(k, e) for k, e in m if k in unknowns]
        if len(us) > 1 or (us and us[0][1] > 1):
            return None
        key = us[0][0] if us else None
        rest = Poly._raw({tuple(x for x in m if x[0] not in unknowns): c})
        row[key] = row.get(key, Poly()) + rest
    return {k: v for k, v in row.items() if v}


def solve_equations(eqs: Sequence[Poly], unknowns: Sequence[str]) -> AffineSolution:
    """Staged linear solve of polynomial equations in ``unknowns``.

    Each round solves the equations that are jointly affine in the unknowns
    still open, substitutes the result into the rest and repeats.  If only
    nonlinear equations remain, :class:`NonlinearResidual` names the first
    offending monomial.
    """
    open_u = list(unknowns)
    solved: dict = {}
    genericity: list = []
    pending = [e for e in eqs if e]
    rounds = 0
    while pending:
        uset = set(open_u)
        rows, rest = [], []
        for e in pending:
            r = _linear_row(e, uset)
            (rows if r is not None else rest).append(r if r is not None else e)
        if not rows:
            e = rest[0]
            for m, _ in e.terms():
                us = [(k, x) for k, x in m if k in uset]
                if len(us) > 1 or (us and us[0][1] > 1):
                    mono = "*".join(k if x == 1 else f"{k}^{x}" for k, x in us)
                    raise NonlinearResidual(mono, str(e))
        rounds += 1
        sol = solve_affine(rows, open_u)
        for g in sol.genericity:
            if g not in genericity:
                genericity.append(g)
        if not sol.consistent:
            return AffineSolution({}, open_u, genericity, consistent=False)
        new = sol.dependent
        solved = {u: _subs_ratfn(f, new) for u, f in solved.items()}
        solved.update(new)
        open_u = [u for u in open_u if u not in new]
        pending = []
        for e in rest:
            r = subs_rational(e, new)
            if r.num:
                pending.append(r.num)
    free = [u for u in unknowns if u in open_u]
    ordered = {u: solved[u] for u in unknowns if u in solved}
    return AffineSolution(ordered, free, genericity, consistent=True)


def _subs_ratfn(f: RatFn, mapping: Mapping[str, RatFn]) -> RatFn:
    return subs_rational(f.num, mapping) / subs_rational(f.den, mapping)


def solve_parameter_constraints(A: LcaPresentation, unknowns: Sequence[str]) -> AffineSolution:
    """Values of the ``unknowns`` making ``A`` a Lie conformal algebra.

    Skew-symmetry and Jacobi residuals are expanded, every coefficient in
    the variables becomes an equation, and the system is solved in stages
    over the field of the remaining parameters.
    """
    for u in unknowns:
        if u in VARS:
            raise LcaError(f"{u!r} is a variable and cannot be an unknown")
    polys = []
    n = A.n
    for i, j in product(range(n), repeat=2):
        polys.extend(skew_residual(A, i, j).coords)
    for i, j, k in product(range(n), repeat=3):
        polys.extend(jacobi_residual(A, i, j, k).coords)
    return solve_equations(residual_equations(polys), list(unknowns))


# ---------------------------------------------------------------------------
# built-in families


def _P(s) -> Poly:
    from .dsl import parse_poly

    return parse_poly(s)


def _param(value, name: str) -> Poly:
    if value is None:
        return Poly.var(name)
    if isinstance(value, Poly):
        return value
    if isinstance(value, str):
        return _P(value)
    return Poly.const(Fraction(value))


def builtin(name: str, **params) -> LcaPresentation:
    """The algebras Vir, SV, DSV, TSV(a,b), TSV(c) and Cur(g).

    Omitted family parameters stay symbolic.  ``Cur`` needs ``gens`` and a
    Lie multiplication table ``lie={(x, y): {z: coeff}}``.
    """
    key = name.replace(" ", "")
    d, l = D, LAM
    if key == "Vir":
        return make_presentation("Vir", ["L"], [], {("L", "L"): {"L": d + 2 * l}})
    if key in ("SV", "DSV"):
        if key == "SV":
            ly, lm = d + Fraction(3, 2) * l, d + l
        else:
            ly, lm = d, d - 2 * l
        return make_presentation(key, ["L", "Y", "M"], [], {
            ("L", "L"): {"L": d + 2 * l},
            ("L", "Y"): {"Y": ly},
            ("Y", "Y"): {"M": d + 2 * l},
            ("L", "M"): {"M": lm},
        })
    if key in ("TSV", "TSV(a,b)", "TSVab"):
        a = _param(params.pop("a", None), "a")
        b = _param(params.pop("b", None), "b")
        _no_extra(params)
        syms = tuple(sorted((a.params() | b.params())))
        label = "TSV(a,b)" if syms == ("a", "b") and a == Poly.var("a") else f"TSV({a},{b})"
        return make_presentation(label, ["L", "Y", "M"], syms, {
            ("L", "L"): {"L": d + 2 * l},
            ("L", "Y"): {"Y": d + a * l + b},
            ("L", "M"): {"M": d + 2 * (a - 1) * l + 2 * b},
            ("Y", "Y"): {"M": d + 2 * l},
        })
    if key in ("TSVc", "TSV(c)"):
        c = _param(params.pop("c", None), "c")
        _no_extra(params)
        syms = tuple(sorted(c.params()))
        label = "TSV(c)" if syms == ("c",) and c == Poly.var("c") else f"TSV({c})"
        return make_presentation(label, ["L", "Y", "M"], syms, {
            ("L", "L"): {"L": d + 2 * l},
            ("L", "Y"): {"Y": d + Fraction(3, 2) * l + c},
            ("L", "M"): {"M": d + 2 * c},
            ("Y", "Y"): {"M": (d + 2 * l) * (-d - 2 * c)},
        })
    if key.startswith("Cur"):
        gens = params.pop("gens", None)
        lie = params.pop("lie", None)
        _no_extra(params)
        if gens is None or lie is None:
            raise LcaError("Cur needs gens=[...] and lie={(x, y): {z: c}}")
        clauses = {}
        for (x, y), val in lie.items():
            clauses[(x, y)] = {z: Poly.coerce(Fraction(c) if not isinstance(c, Poly) else c)
                               for z, c in val.items()}
        syms = set()
        for val in clauses.values():
            for p in val.values():
                syms |= p.params()
        return make_presentation("Cur", gens, sorted(syms), clauses)
    raise LcaError(f"unknown family {name!r}")


def _no_extra(params: Mapping) -> None:
    if params:
        raise LcaError(f"unexpected family parameters: {sorted(params)}")


__all__ = [
    "Element", "LambdaValue", "LcaPresentation", "LcaError", "NonlinearResidual",
    "bracket", "builtin", "check_axioms", "check_jacobi", "check_skew",
    "jacobi_residual", "make_presentation", "skew_flip", "skew_residual",
    "solve_equations", "solve_parameter_constraints", "subs_rational",
    "residual_equations", "PolyError",
]
