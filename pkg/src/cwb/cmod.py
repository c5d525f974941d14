"""Rank-one free conformal modules ``C[d] v``.

An action assigns each generator a polynomial ``act[g](l, d)`` with
``g_l v = act[g](l, d) v``.  The module condition on a pair ``(a, b)`` is

    act[b](m, l+d) act[a](l, d) - act[a](l, m+d) act[b](m, d)
        = sum_k P[a][b][k](-l-m, l) act[k](l+m, d).

``classify_rank1`` handles the rank-3 families with generators ``L, Y, M``
in stages: the ``L`` action is taken from the known list for the Virasoro
subalgebra, the ``Y`` action is then solved linearly, the ``M`` action
after it, and the remaining pairs are checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .branches import special_assignments
from .exactpoly import D, LAM, MU, Poly, RatFn
from .lca import LcaPresentation, residual_equations, solve_equations
from .verify import VerifyReport

ALPHA, BETA, GAMMA = "alpha", "beta", "gamma"


def _poly(p) -> Poly:
    return Poly.coerce(p)


def module_residual(A: LcaPresentation, act: Mapping, i: int, j: int) -> Poly:
    gi, gj = A.gens[i], A.gens[j]
    fi, fj = _poly(act.get(gi, 0)), _poly(act.get(gj, 0))
    t1 = fj.substitute({"l": MU, "d": LAM + D}) * fi
    t2 = fi.substitute({"d": MU + D}) * fj.substitute({"l": MU})
    rhs = Poly()
    for k, P in enumerate(A.table[i][j]):
        fk = _poly(act.get(A.gens[k], 0))
        if P and fk:
            rhs = rhs + P.substitute({"d": -LAM - MU}) * fk.substitute({"l": LAM + MU})
    return t1 - t2 - rhs


def check_module(A: LcaPresentation, act: Mapping, pairs=None) -> VerifyReport:
    first, fails = None, 0
    pairs = pairs or list(product(range(A.n), repeat=2))
    for i, j in pairs:
        r = module_residual(A, act, i, j)
        if r:
            fails += 1
            if first is None:
                first = {"indices": [A.gens[i], A.gens[j]], "residual": str(r)}
    return VerifyReport("module", first is None, first, fails)


def vir_candidates() -> list:
    """The two shapes of a rank-one Virasoro action on ``C[d] v``."""
    return [Poly(), D + Poly.var(ALPHA) * LAM + Poly.var(BETA)]


def _unknown_poly(prefix: str, deg: int) -> tuple:
    names, p = [], Poly()
    for s, t in product(range(deg + 1), repeat=2):
        u = f"_{prefix}_{s}_{t}"
        names.append(u)
        p = p + Poly.var(u) * LAM ** s * D ** t
    return p, names


def _family_basis(template: Poly, sol, names: list) -> list:
    """Basis polynomials of the solution family, denominators cleared."""
    out = []
    for u in sol.free:
        vals = {}
        dens = []
        for v in names:
            if v == u:
                vals[v] = RatFn(Poly.const(1))
            elif v in sol.dependent:
                f = sol.dependent[v]
                f = RatFn(f.num.subs_params({w: (1 if w == u else 0) for w in sol.free}), f.den)
                vals[v] = f
                if not f.is_poly() and f.den not in dens:
                    dens.append(f.den)
            else:
                vals[v] = RatFn(Poly())
        mult = Poly.const(1)
        for dd in dens:
            mult = mult * dd
        sub = {}
        for v, f in vals.items():
            val = f.num * mult
            if not f.is_poly():
                val = val.divide_exact(f.den)
            sub[v] = val
        p = template.subs_params(sub)
        if p:
            out.append(p)
    return out


def _solve_component(A: LcaPresentation, act: dict, target: str, deg: int, pairs) -> tuple:
    """Solve the listed pair equations for the action of ``target``."""
    tmpl, names = _unknown_poly(target, deg)
    trial = dict(act)
    trial[target] = tmpl
    polys = [module_residual(A, trial, i, j) for i, j in pairs]
    sol = solve_equations(residual_equations(polys), names)
    if not sol.consistent:
        return None, sol
    return _family_basis(tmpl, sol, names), sol


@dataclass
class Rank1Family:
    action: dict
    free: list
    locus: dict
    notes: list = field(default_factory=list)

    def render(self) -> str:
        act = ", ".join(f"{g}_l v = ({p}) v" for g, p in self.action.items())
        loc = ", ".join(f"{k}={v}" for k, v in sorted(self.locus.items())) or "generic"
        return f"[{loc}] {act}"


@dataclass
class Rank1Classification:
    families: list
    flags: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    explored: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def _sub_action(act: dict, asg: Mapping) -> dict:
    return {g: p.subs_params(asg) for g, p in act.items()}


def _apply_asg(A: LcaPresentation, asg: Mapping) -> LcaPresentation:
    own = {k: v for k, v in asg.items() if k in A.all_params()}
    return A.specialize(own, name=A.name) if own else A


def classify_rank1(A: LcaPresentation, deg: int = 4, max_depth: int = 3) -> Rank1Classification:
    """Staged classification for presentations with generators ``L, Y, M``."""
    if tuple(A.gens) != ("L", "Y", "M"):
        raise ValueError("classification expects generators L, Y, M")
    iL, iY, iM = 0, 1, 2
    vir = LcaPresentation("Vir", ("L",), (), ((A.table[0][0][:1],),))
    result = Rank1Classification([])
    for f in vir_candidates():
        rep = check_module(vir, {"L": f})
        result.checks.append(rep)
        if not rep.passed:
            result.flags.append(f"Virasoro candidate {f} fails the module equation")

    seen = set()

    def rec(f: Poly, asg: dict, depth: int):
        key = (str(f), tuple(sorted((k, str(v)) for k, v in asg.items())))
        if key in seen:
            return
        seen.add(key)
        B = _apply_asg(A, asg)
        fs = f.subs_params(asg)
        gbasis, gsol = _solve_component(B, {"L": fs}, "Y", deg, [(iL, iY)])
        result.explored.append({"f": str(fs), "locus": {k: str(v) for k, v in asg.items()},
                                "g_dim": 0 if gbasis is None else len(gbasis)})
        _emit(B, fs, asg, gbasis or [])
        if depth < max_depth:
            for pt in special_assignments(gsol.genericity).points:
                new = {k: (v.subs_params(pt) if isinstance(v, Poly) else v) for k, v in asg.items()}
                new.update(pt)
                new = {k: (v.constant_value() if isinstance(v, Poly) and v.is_constant() else v)
                       for k, v in new.items()}
                rec(f, new, depth + 1)

    def _emit(B, fs, asg, gbasis):
        notes = []
        if len(gbasis) > 1:
            result.flags.append(f"{len(gbasis)}-dimensional Y-action family at {asg}; "
                                "the quadratic conditions on it are not solved")
            return
        if not gbasis:
            g, free = Poly(), []
        else:
            g, free = gbasis[0], [GAMMA]
        # M-action: linear given the Y-action with its coefficient set to 1
        hbasis, hsol = _solve_component(B, {"L": fs, "Y": g}, "M", 2 * deg, [(iL, iM), (iY, iY)])
        if hbasis is None:
            if g:
                notes.append("Y-action forced to zero by the M-equations")
            g, free = Poly(), []
            hbasis, hsol = _solve_component(B, {"L": fs, "Y": g}, "M", 2 * deg, [(iL, iM), (iY, iY)])
        if hbasis:
            result.flags.append(f"nonzero homogeneous M-action at {asg}; not classified")
            return
        h = Poly()
        if hsol is not None and hsol.consistent:
            # particular solution: all free unknowns zero
            tmpl, names = _unknown_poly("M", 2 * deg)
            sub = {}
            for v in names:
                dep = hsol.dependent.get(v)
                if dep is None:
                    sub[v] = Poly()
                else:
                    dep = RatFn(dep.num.subs_params({w: 0 for w in hsol.free}), dep.den)
                    if not dep.is_poly():
                        result.flags.append(f"rational M-action coefficient at {asg}")
                        return
                    sub[v] = dep.num
            h = tmpl.subs_params(sub)
        if not h:
            notes.append("h = 0 branch: g is fixed by the bounded-degree linear solve, not by the Y-M equation")
        gname = Poly.var(GAMMA)
        act = {"L": fs, "Y": g * gname if g else Poly(), "M": h * gname * gname if h else Poly()}
        if g:
            act["Y"] = _normalize(act["Y"], gname)
        rep = check_module(B, act)
        if not rep.passed and g:
            # the remaining pairs are homogeneous of degree >= 3 in gamma
            bad = [module_residual(B, act, i, j) for i, j in product(range(3), repeat=2)]
            if all(all(dict(m).get(GAMMA, 0) for m, _ in r.items()) for r in bad):
                notes.append("Y-action forced to zero by the Y-M compatibility")
                result.notes.append(f"candidate Y-action {g} at {_fmt(asg)} is excluded by the "
                                    "Y-M compatibility")
                act = {"L": fs, "Y": Poly(), "M": Poly()}
                free = []
                rep = check_module(B, act)
        result.checks.append(rep)
        if not rep.passed:
            result.flags.append(f"emitted action fails the module check at {asg}: {rep.summary()}")
            return
        if asg and not (act["Y"] or act["M"]):
            return
        free_params = ([ALPHA, BETA] if fs else []) + free
        fam = Rank1Family(act, free_params, dict(asg), notes)
        for old in result.families:
            if old.action == fam.action and old.locus == fam.locus:
                return
        result.families.append(fam)

    for f in vir_candidates():
        rec(f, {}, 0)
    result.families = _prune(result.families)
    return result


def _fmt(asg: Mapping) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(asg.items())) or "generic point"


def _prune(fams: list) -> list:
    """Drop families that are specializations of a family on a larger locus."""
    keep = []
    for F in fams:
        sub = False
        for G in fams:
            if G is F or not set(G.locus.items()) < set(F.locus.items()):
                continue
            extra = {k: v for k, v in F.locus.items() if k not in G.locus}
            if {g: p.subs_params(extra) for g, p in G.action.items()} == F.action:
                sub = True
                break
        if not sub:
            keep.append(F)
    return keep


def _normalize(p: Poly, scale: Poly) -> Poly:
    """Divide out rational content so the free coefficient reads ``gamma``."""
    c = (p.divide_exact(scale) or p).content()
    return p / c if c else p


def significant_families(cls: Rank1Classification) -> list:
    """Families with a nonzero ``Y`` or ``M`` action."""
    return [f for f in cls.families if f.action.get("Y") or f.action.get("M")]


__all__ = ["ALPHA", "BETA", "GAMMA", "Rank1Classification", "Rank1Family", "check_module",
           "classify_rank1", "module_residual", "significant_families", "vir_candidates"]
