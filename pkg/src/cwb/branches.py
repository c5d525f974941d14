"""Candidate special parameter points from recorded pivot polynomials.

Factoring and rational root finding are delegated to sympy.  A factor
yields a branch when it is univariate (each rational root is a point) or
linear in some parameter with a rational coefficient (an affine
substitution).  Other factors are reported as unexplored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import sympy

from .exactpoly import Poly


def to_sympy(p: Poly):
    syms = {name: sympy.Symbol(name) for name in p.indeterminates()}
    expr = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for name, e in mono:
            term *= syms[name] ** e
        expr += term
    return expr


def from_sympy(expr) -> Poly:
    expr = sympy.expand(expr)
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    if not gens:
        r = sympy.Rational(expr)
        return Poly.const(Fraction(int(r.p), int(r.q)))
    P = sympy.Poly(expr, *gens)
    out = Poly()
    for exps, c in P.terms():
        c = sympy.Rational(c)
        term = Poly.const(Fraction(int(c.p), int(c.q)))
        for g, e in zip(gens, exps):
            if e:
                term = term * Poly.var(g.name) ** e
        out = out + term
    return out


@dataclass
class Branches:
    points: list = field(default_factory=list)       # assignments {param: Fraction | Poly}
    unexplored: list = field(default_factory=list)   # factors without a rational branch


def _fmt_value(v) -> str:
    return str(v)


def special_assignments(polys: Iterable[Poly]) -> Branches:
    out = Branches()
    seen = set()

    def push(asg):
        key = tuple(sorted((k, str(v)) for k, v in asg.items()))
        if key not in seen:
            seen.add(key)
            out.points.append(asg)

    for p in polys:
        if p.is_constant():
            continue
        _, factors = sympy.factor_list(to_sympy(p))
        for f, _mult in factors:
            fp = from_sympy(f)
            names = sorted(fp.params())
            if len(names) == 1:
                x = names[0]
                roots = sympy.roots(sympy.Poly(f, sympy.Symbol(x)), filter="Q")
                if not roots:
                    out.unexplored.append(fp)
                for r in sorted(roots, key=lambda r: (sympy.Rational(r).q, sympy.Rational(r).p)):
                    r = sympy.Rational(r)
                    push({x: Fraction(int(r.p), int(r.q))})
                continue
            done = False
            for x in names:
                if fp.degree(x) == 1:
                    lead = fp.coeff(x, 1)
                    if lead.is_constant():
                        rest = fp - lead * Poly.var(x)
                        push({x: -rest / lead.constant_value()})
                        done = True
                        break
            if not done:
                out.unexplored.append(fp)
    return out


def explore(solve: Callable, A, max_depth: int = 4) -> list:
    """Solve at ``A`` and at every special point reachable from recorded pivots.

    ``solve(A)`` returns an object with a ``genericity`` list.  Returns
    ``[(assignment, result, unexplored)]`` with the symbolic solve first;
    assignments compose along the recursion.
    """
    results = []
    seen = set()

    def key(asg):
        return tuple(sorted((k, str(v)) for k, v in asg.items()))

    def rec(B, asg, depth):
        k = key(asg)
        if k in seen:
            return
        seen.add(k)
        res = solve(B)
        br = special_assignments(res.genericity) if depth < max_depth else Branches()
        results.append((asg, res, br.unexplored))
        for pt in br.points:
            new = {kk: (vv.subs_params(pt) if isinstance(vv, Poly) else vv) for kk, vv in asg.items()}
            new.update(pt)
            new = {kk: _settle(vv) for kk, vv in new.items()}
            rec(B.specialize(pt, name=_name(A, new)), new, depth + 1)

    rec(A, {}, 0)
    return results


def _settle(v):
    if isinstance(v, Poly) and v.is_constant():
        return v.constant_value()
    return v


def _name(A, asg) -> str:
    pts = ",".join(f"{k}={_fmt_value(v)}" for k, v in sorted(asg.items()))
    return f"{A.name}[{pts}]"


__all__ = ["Branches", "explore", "from_sympy", "special_assignments", "to_sympy"]
