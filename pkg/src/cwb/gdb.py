"""Gel'fand-Dorfman bialgebras and quadratic Lie conformal algebras.

A bialgebra carries a Novikov product ``circ`` and a Lie bracket ``lie`` on
the same finite-dimensional space.  The quadratic algebra attached to it
has

    [a_l b] = d*(b o a) + [b, a] + l*(b o a + a o b).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .exactpoly import Poly
from .lca import LcaPresentation, make_presentation
from .verify import VerifyReport


class GdError(ValueError):
    def __init__(self, msg: str, report: VerifyReport | None = None):
        self.report = report
        super().__init__(msg)


def _zero3(n):
    return tuple(tuple(tuple(Poly() for _ in range(n)) for _ in range(n)) for _ in range(n))


@dataclass(frozen=True)
class GdBialgebra:
    name: str
    basis: tuple
    circ: tuple   # circ[i][j][k]: coefficient of e_k in e_i o e_j
    lie: tuple    # lie[i][j][k]: coefficient of e_k in [e_i, e_j]
    params: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_products(cls, name: str, basis: Sequence[str], circ: Mapping, lie: Mapping,
                      params: Sequence[str] = ()) -> "GdBialgebra":
        """Build from ``{(x, y): {z: coeff}}`` maps; ``lie`` is completed antisymmetrically."""
        basis = tuple(basis)
        idx = {g: i for i, g in enumerate(basis)}
        n = len(basis)
        C = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
        B = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for (x, y), val in circ.items():
            for z, c in val.items():
                C[idx[x]][idx[y]][idx[z]] = Poly.coerce(c)
        for (x, y), val in lie.items():
            i, j = idx[x], idx[y]
            row = [Poly() for _ in range(n)]
            for z, c in val.items():
                row[idx[z]] = Poly.coerce(c)
            B[i][j] = row
            if (y, x) in lie:
                back = [Poly() for _ in range(n)]
                for z, c in lie[(y, x)].items():
                    back[idx[z]] = Poly.coerce(c)
                if any(p + q for p, q in zip(row, back)):
                    raise GdError(f"lie clauses [{x},{y}] and [{y},{x}] are not antisymmetric")
            else:
                B[j][i] = [-p for p in row]
        freeze = lambda T: tuple(tuple(tuple(e) for e in r) for r in T)  # noqa: E731
        syms = set(params)
        for T in (C, B):
            for r in T:
                for e in r:
                    for p in e:
                        syms |= p.params()
        ordered = tuple(params) + tuple(sorted(syms - set(params)))
        return cls(name, basis, freeze(C), freeze(B), ordered)

    # vector arithmetic ---------------------------------------------------
    def _mul(self, T, u, v) -> list:
        n = self.dim
        out = [Poly() for _ in range(n)]
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if not y:
                    continue
                xy = x * y
                for k, c in enumerate(T[i][j]):
                    if c:
                        out[k] = out[k] + xy * c
        return out

    def circ_mul(self, u, v) -> list:
        return self._mul(self.circ, u, v)

    def lie_mul(self, u, v) -> list:
        return self._mul(self.lie, u, v)

    def unit(self, i: int) -> list:
        return [Poly.const(1) if k == i else Poly() for k in range(self.dim)]

    def specialize(self, assignment: Mapping) -> "GdBialgebra":
        sub = {k: (v if isinstance(v, Poly) else Fraction(v)) for k, v in assignment.items()}
        f = lambda T: tuple(tuple(tuple(p.subs_params(sub) for p in e) for e in r) for r in T)  # noqa: E731
        return GdBialgebra(self.name, self.basis, f(self.circ), f(self.lie),
                           tuple(p for p in self.params if p not in sub))


def _first_failure(name: str, G: GdBialgebra, residual) -> VerifyReport:
    first, fails = None, 0
    for i, j, k in product(range(G.dim), repeat=3):
        for label, vec in residual(i, j, k):
            for t, r in enumerate(vec):
                if r:
                    fails += 1
                    if first is None:
                        first = {"identity": label,
                                 "indices": [G.basis[i], G.basis[j], G.basis[k], G.basis[t]],
                                 "residual": str(r)}
    return VerifyReport(name, first is None, first, fails)


def _sub(u, v):
    return [x - y for x, y in zip(u, v)]


def check_novikov(G: GdBialgebra) -> VerifyReport:
    """Right commutativity and left symmetry of ``circ`` on basis triples."""
    m = G.circ_mul
    e = G.unit

    def res(i, j, k):
        a, b, c = e(i), e(j), e(k)
        rc = _sub(m(m(a, b), c), m(m(a, c), b))
        ls = _sub(_sub(m(m(a, b), c), m(a, m(b, c))), _sub(m(m(b, a), c), m(b, m(a, c))))
        return [("right-commutative", rc), ("left-symmetric", ls)]

    return _first_failure("novikov", G, res)


def check_lie(G: GdBialgebra) -> VerifyReport:
    br = G.lie_mul
    e = G.unit

    def res(i, j, k):
        a, b, c = e(i), e(j), e(k)
        anti = [x + y for x, y in zip(br(a, b), br(b, a))] if k == 0 else []
        jac = [x + y + z for x, y, z in zip(br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b)))]
        out = [("jacobi", jac)]
        if anti:
            out.append(("antisymmetric", anti))
        return out

    return _first_failure("lie", G, res)


def check_gd_compat(G: GdBialgebra) -> VerifyReport:
    """``[a o b, c] - [a o c, b] + [a, b] o c - [a, c] o b - a o [b, c] = 0``."""
    m, br, e = G.circ_mul, G.lie_mul, G.unit

    def res(i, j, k):
        a, b, c = e(i), e(j), e(k)
        terms = [br(m(a, b), c), [-x for x in br(m(a, c), b)], m(br(a, b), c),
                 [-x for x in m(br(a, c), b)], [-x for x in m(a, br(b, c))]]
        return [("compatibility", [sum(col, Poly()) for col in zip(*terms)])]

    return _first_failure("gd-compat", G, res)


def check_all(G: GdBialgebra) -> list[VerifyReport]:
    return [check_novikov(G), check_lie(G), check_gd_compat(G)]


def to_quadratic(G: GdBialgebra, name: str | None = None) -> LcaPresentation:
    for rep in check_all(G):
        if not rep.passed:
            raise GdError(f"not a Gel'fand-Dorfman bialgebra: {rep.summary()}", rep)
    n = G.dim
    d, l = Poly.var("d"), Poly.var("l")
    clauses = {}
    for i, j in product(range(n), repeat=2):
        val = {}
        for k in range(n):
            p = d * G.circ[j][i][k] + G.lie[j][i][k] + l * (G.circ[j][i][k] + G.circ[i][j][k])
            if p:
                val[G.basis[k]] = p
        if val:
            clauses[(G.basis[i], G.basis[j])] = val
    return make_presentation(name or G.name, G.basis, G.params, clauses, skew_complete=False)


def from_quadratic(A: LcaPresentation, name: str | None = None) -> GdBialgebra:
    """Read the bialgebra off an affine structure table.

    Rejects entries with a monomial of degree above one in the variables,
    naming it; powers of ``d`` are reported first.
    """
    n = A.n
    circ = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
    lie = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
    star = [[[Poly() for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k in product(range(n), repeat=3):
        p = A.table[i][j][k]
        if not p:
            continue
        parts = p.split(("d", "l"))
        bad = [m for m in parts if sum(e for _, e in m) > 1]
        if bad:
            bad.sort(key=lambda m: (-dict(m).get("d", 0), m))
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in bad[0])
            raise GdError(f"not quadratic: [{A.gens[i]} {A.gens[j]}] has a {mono} term "
                          f"in its {A.gens[k]} component")
        for m, c in parts.items():
            key = dict(m)
            if "d" in key:
                circ[j][i][k] = c
            elif "l" in key:
                star[j][i][k] = c
            else:
                lie[j][i][k] = c
    for i, j, k in product(range(n), repeat=3):
        if star[i][j][k] != circ[i][j][k] + circ[j][i][k]:
            raise GdError(f"l-coefficient of [{A.gens[j]} {A.gens[i]}] is not the "
                          f"symmetrized d-coefficient in its {A.gens[k]} component")
    freeze = lambda T: tuple(tuple(tuple(e) for e in r) for r in T)  # noqa: E731
    return GdBialgebra(name or A.name, A.gens, freeze(circ), freeze(lie), A.params)


def v_ab(a=None, b=None) -> GdBialgebra:
    """The three-dimensional bialgebra whose quadratic algebra is TSV(a, b)."""
    from .lca import _param

    A = _param(a, "a")
    B = _param(b, "b")
    one = Poly.const(1)
    circ = {
        ("L", "L"): {"L": one},
        ("L", "Y"): {"Y": A - 1},
        ("Y", "L"): {"Y": one},
        ("L", "M"): {"M": 2 * A - 3},
        ("M", "L"): {"M": one},
        ("Y", "Y"): {"M": one},
    }
    lie = {("L", "Y"): {"Y": -B}, ("L", "M"): {"M": -2 * B}}
    syms = sorted(A.params() | B.params())
    return GdBialgebra.from_products("V", ("L", "Y", "M"), circ, lie, params=syms)


def _inverse(T: Sequence[Sequence[Fraction]]) -> list:
    n = len(T)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(T)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular basis change")
        M[c], M[piv] = M[piv], M[c]
        s = M[c][c]
        M[c] = [x / s for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def change_basis(G: GdBialgebra, T: Sequence[Sequence]) -> GdBialgebra:
    """Structure constants in the basis ``f_i = sum_r T[i][r] e_r``."""
    n = G.dim
    Ti = _inverse(T)
    F = [[Poly.const(Fraction(x)) for x in row] for row in T]

    def transform(tab):
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                v = G._mul(tab, F[i], F[j])
                row.append(tuple(sum((v[r] * Ti[r][k] for r in range(n)), Poly()) for k in range(n)))
            out.append(tuple(row))
        return tuple(out)

    return GdBialgebra(G.name, G.basis, transform(G.circ), transform(G.lie), G.params)


__all__ = ["GdBialgebra", "GdError", "change_basis", "check_all", "check_gd_compat", "check_lie",
           "check_novikov", "from_quadratic", "to_quadratic", "v_ab"]
