"""Central extensions by a one-dimensional center.

A 2-cochain assigns ``alpha_l(e_i, e_j) = sum_t c[i][j][t] l^t`` with
``t <= D``.  Its coordinates are indexed ``col(i, j, t)``.  Extending to
``d``-multiples, a polynomial ``p(d)`` in the left slot contributes
``p(-l)`` and in the right slot ``p(l)``.

Cocycles satisfy skew-symmetry ``alpha_l(a, b) = -alpha_{-l}(b, a)`` and

    alpha_l(a, [b_m c]) - alpha_m(b, [a_l c]) = alpha_{l+m}([a_l b], c).

Coboundaries are ``delta(phi)(e_i, e_j) = sum_k P[i][j][k](0, l) phi_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .exactpoly import LAM, MU, Poly, RatFn, VARS
from .gdb import GdBialgebra, GdError, check_all as gd_checks, to_quadratic
from .lca import Element, LcaError, LcaPresentation, bracket, check_jacobi
from .linalg import (SolutionSpace, apply, echelon, in_span, nullspace_rows, norm, quotient,
                     rank, same_span, solve_affine)
from .verify import VerifyReport

DEFAULT_DEGREE = 6


class CohomError(ValueError):
    pass


def _col(n: int, D: int, i: int, j: int, t: int) -> int:
    return (i * n + j) * (D + 1) + t


def column_order(n: int, D: int) -> list:
    """Pair-major in generator order, descending degree within a pair."""
    return [_col(n, D, i, j, t) for i in range(n) for j in range(n) for t in range(D, -1, -1)]


def _add_form(acc: dict, form: dict, sign=1) -> None:
    for c, p in form.items():
        q = acc.get(c, Poly()) + (p if sign == 1 else -p)
        if q:
            acc[c] = q
        else:
            acc.pop(c, None)


def alpha_form(n: int, D: int, x: Element, y: Element, nu: Poly) -> dict:
    """``alpha_nu(x, y)`` as a linear form ``{col: coefficient}``."""
    out: dict = {}
    left = {"d": -nu}
    right = {"d": nu}
    pows = [Poly.const(1)]
    for _ in range(D):
        pows.append(pows[-1] * nu)
    for i, p in enumerate(x.coords):
        if not p:
            continue
        pl = p.substitute(left)
        for j, q in enumerate(y.coords):
            if not q:
                continue
            pq = pl * q.substitute(right)
            if not pq:
                continue
            for t in range(D + 1):
                _add_form(out, {_col(n, D, i, j, t): pq * pows[t]})
    return out


def _rows_from_forms(forms) -> list:
    """Each form vanishes identically: one row per variable monomial."""
    rows: dict = {}
    for form in forms:
        bucket: dict = {}
        for col, p in form.items():
            for mono, c in p.split(VARS).items():
                bucket.setdefault(mono, {})[col] = c
        for r in bucket.values():
            key = frozenset(r.items())
            rows.setdefault(key, r)
    return list(rows.values())


def cocycle_rows(A: LcaPresentation, D: int) -> list:
    if A.central:
        raise CohomError("cocycles are computed on presentations without central generators")
    n = A.n
    rows = []
    for i, j in product(range(n), repeat=2):
        for t in range(D + 1):
            r = {_col(n, D, i, j, t): Fraction(1)}
            c2 = _col(n, D, j, i, t)
            r[c2] = r.get(c2, 0) + (-1) ** t
            r = {k: v for k, v in r.items() if v}
            if r:
                rows.append(r)
    forms = []
    for i, j, k in product(range(n), repeat=3):
        a, b, c = A.gen(i), A.gen(j), A.gen(k)
        f: dict = {}
        _add_form(f, alpha_form(n, D, a, bracket(A, b, c, MU), LAM))
        _add_form(f, alpha_form(n, D, b, bracket(A, a, c, LAM), MU), -1)
        _add_form(f, alpha_form(n, D, bracket(A, a, b, LAM), c, LAM + MU), -1)
        forms.append(f)
    rows.extend(_rows_from_forms(forms))
    return [{k: norm(v) for k, v in r.items()} for r in rows]


def coboundary_vectors(A: LcaPresentation, D: int) -> list:
    """``delta(phi)`` for ``phi`` the unit functional on each generator."""
    n = A.n
    out = []
    for k in range(n):
        v: dict = {}
        for i, j in product(range(n), repeat=2):
            p = A.table[i][j][k].substitute({"d": Poly()})
            if p.degree("l") > D:
                raise CohomError("degree bound below the degree of the structure table")
            for t in range(int(max(p.degree("l"), -1)) + 1):
                c = p.coeff("l", t)
                if c:
                    v[_col(n, D, i, j, t)] = norm(c)
        out.append(v)
    return out


def _merge(*lists) -> list:
    out: list = []
    for L in lists:
        for g in L:
            if g not in out:
                out.append(g)
    return out


@dataclass
class CocycleSolution:
    A: LcaPresentation
    D: int
    Z2: SolutionSpace
    B2: SolutionSpace
    H2: list
    genericity: list = field(default_factory=list)
    route: str = "generic"

    @property
    def ncols(self) -> int:
        return self.A.n ** 2 * (self.D + 1)

    @property
    def dims(self) -> dict:
        return {"Z2": self.Z2.dim, "B2": self.B2.dim, "H2": len(self.H2)}

    def table(self, vec: Mapping) -> dict:
        """``{(gi, gj): alpha_l(gi, gj)}`` for the nonzero entries of a cochain."""
        return cochain_table(self.A, self.D, vec)

    def render_rep(self, vec: Mapping, label: str) -> str:
        return render_cochain(self.A, self.D, vec, label)

    def rendered(self) -> list:
        return [self.render_rep(v, _label(i)) for i, v in enumerate(self.H2)]


def _label(i: int) -> str:
    return "abcdefghijk"[i] if i < 11 else f"r{i}"


def cochain_table(A: LcaPresentation, D: int, vec: Mapping) -> dict:
    n = A.n
    out = {}
    for i, j in product(range(n), repeat=2):
        p = Poly()
        for t in range(D + 1):
            c = vec.get(_col(n, D, i, j, t))
            if c is not None:
                p = p + Poly.coerce(c) * LAM ** t
        if p:
            out[(A.gens[i], A.gens[j])] = p
    return out


def render_cochain(A: LcaPresentation, D: int, vec: Mapping, label: str) -> str:
    """``a(L,L)=l^3``; only pairs with the first index not after the second."""
    tab = cochain_table(A, D, vec)
    parts = []
    for i in range(A.n):
        for j in range(i, A.n):
            p = tab.get((A.gens[i], A.gens[j]))
            if p is not None:
                parts.append(f"{label}({A.gens[i]},{A.gens[j]})={p}")
    return "; ".join(parts) if parts else f"{label}=0"


def cochain_from_table(A: LcaPresentation, D: int, table: Mapping) -> dict:
    """Coordinates from ``{(gi, gj): poly in l}``; the reversed pairs follow by skew-symmetry."""
    n = A.n
    vec: dict = {}
    for (gi, gj), p in table.items():
        i, j = A.index(gi), A.index(gj)
        p = Poly.coerce(p)
        for t in range(int(max(p.degree("l"), -1)) + 1):
            c = p.coeff("l", t)
            if c:
                vec[_col(n, D, i, j, t)] = norm(c)
                if i != j and (A.gens[j], A.gens[i]) not in table:
                    vec[_col(n, D, j, i, t)] = norm(c * (-1) ** (t + 1))
    return vec


def _finish(A, D, Zbasis, gen_z, route) -> CocycleSolution:
    ncols = A.n ** 2 * (D + 1)
    order = column_order(A.n, D)
    Bvecs = coboundary_vectors(A, D)
    EB = echelon(Bvecs, ncols, order)
    B2 = SolutionSpace(list(EB.rows), ncols, list(EB.genericity))
    reps, gen_q, _ = quotient(EB.rows, Zbasis, ncols, order)
    Z2 = SolutionSpace(list(Zbasis), ncols, list(gen_z))
    gen = _merge(gen_z, EB.genericity, gen_q)
    return CocycleSolution(A, D, Z2, B2, reps, gen, route)


def solve_cocycles(A: LcaPresentation, D: int = DEFAULT_DEGREE) -> CocycleSolution:
    ncols = A.n ** 2 * (D + 1)
    rows = cocycle_rows(A, D)
    order = column_order(A.n, D)
    Z = nullspace_rows(rows, ncols, order)
    # present Z2 in reduced form so that bases are canonical
    EZ = echelon(Z.basis, ncols, order)
    return _finish(A, D, EZ.rows, _merge(Z.genericity, EZ.genericity), "generic")


def is_cocycle(A: LcaPresentation, vec: Mapping, D: int) -> bool:
    return all(not x or (isinstance(x, Poly) and x.is_zero()) for x in apply(cocycle_rows(A, D), vec))


def is_coboundary(A: LcaPresentation, vec: Mapping, D: int) -> bool:
    return in_span(vec, coboundary_vectors(A, D), A.n ** 2 * (D + 1))


def verify_solution(sol: CocycleSolution) -> VerifyReport:
    """Z2 vectors solve the system, B2 lies in Z2, representatives are not coboundaries."""
    A, D = sol.A, sol.D
    rows = cocycle_rows(A, D)
    ncols = sol.ncols
    problems = []
    for v in sol.Z2.basis:
        if any(not _is0(x) for x in apply(rows, v)):
            problems.append("Z2 vector violates the cocycle equations")
    for v in sol.B2.basis:
        if not in_span(v, sol.Z2.basis, ncols):
            problems.append("coboundary outside Z2")
    Bb = sol.B2.basis
    for k, v in enumerate(sol.H2):
        if rank(Bb + [v], ncols) == rank(Bb, ncols):
            problems.append(f"representative {_label(k)} is a coboundary")
    if rank(Bb + sol.H2, ncols) != len(Bb) + len(sol.H2):
        problems.append("representatives are dependent modulo B2")
    ok = not problems
    return VerifyReport("h2-consistency", ok, None if ok else {"indices": [], "residual": problems[0]},
                        len(problems), sol.dims)


def _is0(x) -> bool:
    return (not x) if not isinstance(x, Poly) else x.is_zero()


def same_h2(s1: CocycleSolution, s2: CocycleSolution) -> bool:
    """Equal H2 dimension and equal span of representatives modulo B2."""
    if s1.ncols != s2.ncols or len(s1.H2) != len(s2.H2):
        return False
    B = s1.B2.basis
    return (same_span(B, s2.B2.basis, s1.ncols)
            and same_span(B + s1.H2, B + s2.H2, s1.ncols))


# ---------------------------------------------------------------------------
# quadratic route


def check_surjective(G: GdBialgebra) -> VerifyReport:
    """Every element is a sum of products ``y o z``."""
    n = G.dim
    vecs = []
    for i, j in product(range(n), repeat=2):
        v = {k: norm(c) for k, c in enumerate(G.circ[i][j]) if c}
        if v:
            vecs.append(v)
    r = rank(vecs, n)
    ok = r == n
    return VerifyReport("circ-surjective", ok,
                        None if ok else {"indices": [], "residual": f"span of products has rank {r} < {n}"},
                        0 if ok else 1)


def solve_cocycles_quadratic(G: GdBialgebra, D: int = DEFAULT_DEGREE) -> CocycleSolution:
    """Cocycles of the quadratic algebra from the finite conditions on ``alpha_0..alpha_3``.

    When ``V o V = V`` every cocycle has degree at most 3, so four bilinear
    forms on the finite-dimensional space determine it.  The result is
    expressed in the generic coordinates with bound ``D``.
    """
    if D < 3:
        raise CohomError("degree bound must be at least 3")
    for rep in gd_checks(G):
        if not rep.passed:
            raise GdError(f"not a Gel'fand-Dorfman bialgebra: {rep.summary()}", rep)
    sj = check_surjective(G)
    if not sj.passed:
        raise CohomError("the product o is not onto; the degree-3 truncation does not apply")
    n = G.dim
    col = lambda i, x, y: (i * n + x) * n + y  # noqa: E731
    nq = 4 * n * n

    def form(i, u, v):
        out: dict = {}
        for x, cu in enumerate(u):
            if not cu:
                continue
            for y, cv in enumerate(v):
                if cv:
                    k = col(i, x, y)
                    out[k] = out.get(k, Poly()) + cu * cv
        return out

    def comb(*terms):
        acc: dict = {}
        for s, f in terms:
            for k, c in f.items():
                acc[k] = acc.get(k, Poly()) + c * s
        return {k: norm(c) for k, c in acc.items() if c}

    e = G.unit
    o, br = G.circ_mul, G.lie_mul

    def star(u, v):
        return [p + q for p, q in zip(o(u, v), o(v, u))]

    rows = []
    for i in range(4):
        for x, y in product(range(n), repeat=2):
            rows.append(comb((1, form(i, e(x), e(y))), (-(-1) ** (i + 1), form(i, e(y), e(x)))))
    for x, y, z in product(range(n), repeat=3):
        a, b, c = e(x), e(y), e(z)
        cb, ba, ab = br(c, b), br(b, a), None
        rows += [
            comb((1, form(3, a, o(c, b))), (-1, form(3, o(a, b), c))),
            comb((1, form(3, o(a, b), c)), (-1, form(3, o(b, a), c))),
            comb((1, form(2, a, o(c, b))), (1, form(3, a, cb)),
                 (-1, form(2, o(a, b), c)), (-1, form(3, ba, c))),
            comb((1, form(2, a, star(b, c))), (1, form(2, o(b, a), c)),
                 (-2, form(2, o(a, b), c)), (-3, form(3, ba, c))),
            comb((1, form(1, a, o(c, b))), (1, form(2, a, cb)),
                 (-1, form(1, o(a, b), c)), (-1, form(2, ba, c))),
            comb((1, form(1, a, star(b, c))), (-1, form(1, b, star(a, c))),
                 (1, form(1, o(b, a), c)), (-1, form(1, o(a, b), c)), (-2, form(2, ba, c))),
            comb((1, form(0, a, o(c, b))), (1, form(1, a, cb)), (-1, form(0, b, star(a, c))),
                 (-1, form(0, o(a, b), c)), (-1, form(1, ba, c))),
            comb((1, form(0, a, br(c, b))), (-1, form(0, b, br(c, a))), (-1, form(0, ba, c))),
        ]
        del ab
    rows = [r for r in rows if r]
    Zq = nullspace_rows(rows, nq)
    A = to_quadratic(G)
    ncols = n * n * (D + 1)
    mapped = []
    for v in Zq.basis:
        w = {}
        for k, c in v.items():
            i, rest = divmod(k, n * n)
            x, y = divmod(rest, n)
            w[_col(n, D, x, y, i)] = c
        mapped.append(w)
    EZ = echelon(mapped, ncols, column_order(n, D))
    return _finish(A, D, EZ.rows, _merge(Zq.genericity, EZ.genericity), "quadratic")


# ---------------------------------------------------------------------------
# extensions


def _central_name(A: LcaPresentation) -> str:
    for cand in ("C", "Z", "K", "C0", "C1"):
        if cand not in A.gens:
            return cand
    raise CohomError("no free name for the central generator")


def extend(A: LcaPresentation, alpha, D: int | None = None, name: str | None = None,
           check: bool = True) -> LcaPresentation:
    """Rank ``n+1`` presentation with brackets ``[a_l b] + alpha_l(a, b) C``.

    ``alpha`` is a coordinate vector (needs ``D``) or a table
    ``{(gi, gj): poly in l}``.  The new generator is central with ``d C = 0``.
    """
    if D is None:
        if not isinstance(alpha, Mapping) or any(isinstance(k, int) for k in alpha):
            raise CohomError("coordinate vectors need the degree bound D")
        D = max([int(Poly.coerce(p).degree("l")) for p in alpha.values()] + [0])
    vec = alpha if all(isinstance(k, int) for k in alpha) else cochain_from_table(A, D, alpha)
    if check and not is_cocycle(A, vec, D):
        raise CohomError("alpha is not a 2-cocycle")
    tab = cochain_table(A, D, vec)
    n = A.n
    cname = _central_name(A)
    table = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            if i < n and j < n:
                ent = list(A.table[i][j]) + [tab.get((A.gens[i], A.gens[j]), Poly())]
            else:
                ent = [Poly() for _ in range(n + 1)]
            row.append(tuple(ent))
        table.append(tuple(row))
    return LcaPresentation(name or f"{A.name}^", A.gens + (cname,), A.params, tuple(table),
                           frozenset({n}))


def coboundary_preimage(A: LcaPresentation, vec: Mapping, D: int) -> dict | None:
    """Scalars ``phi_k`` with ``delta(phi) = vec``, or None."""
    B = coboundary_vectors(A, D)
    unknowns = [f"_phi{k}" for k in range(A.n)]
    cols = set(vec)
    for b in B:
        cols |= set(b)
    rows = []
    for c in sorted(cols):
        r = {unknowns[k]: b[c] for k, b in enumerate(B) if c in b}
        if c in vec:
            r[None] = -vec[c]
        if r:
            rows.append(r)
    sol = solve_affine(rows, unknowns)
    if not sol.consistent:
        return None
    zero = {v: 0 for v in sol.free}
    out = {}
    for k, u in enumerate(unknowns):
        f = sol.dependent.get(u)
        out[A.gens[k]] = RatFn(f.num.subs_params(zero), f.den) if f is not None else RatFn(Poly())
    return out


def section_shift(Ahat: LcaPresentation, shift: Mapping[str, object]) -> LcaPresentation:
    """Presentation in the basis ``e_k + shift[k] C`` of an extended algebra."""
    if len(Ahat.central) != 1:
        raise LcaError("expected exactly one central generator")
    c = next(iter(Ahat.central))
    n = Ahat.n
    sh = []
    for g in Ahat.gens:
        v = shift.get(g, 0)
        if isinstance(v, RatFn):
            if not v.is_poly():
                raise LcaError("shift coefficients must be polynomial in the parameters")
            v = v.num
        sh.append(Poly.coerce(v))
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            ent = list(Ahat.table[i][j])
            corr = Poly()
            for k in range(n):
                if k != c and sh[k] and ent[k]:
                    corr = corr + ent[k].substitute({"d": Poly()}) * sh[k]
            ent[c] = ent[c] - corr
            row.append(tuple(ent))
        table.append(tuple(row))
    return LcaPresentation(Ahat.name, Ahat.gens, Ahat.params, tuple(table), Ahat.central)


__all__ = ["CocycleSolution", "CohomError", "DEFAULT_DEGREE", "alpha_form", "check_surjective",
           "coboundary_preimage", "coboundary_vectors", "cochain_from_table", "cochain_table",
           "cocycle_rows", "column_order", "extend", "is_coboundary", "is_cocycle",
           "render_cochain", "same_h2", "section_shift", "solve_cocycles",
           "solve_cocycles_quadratic", "verify_solution"]
