"""Command-line driver: ``cwb COMMAND FILE [options]``.

Exit status is 0 when every requested verification passes, 1 on a
verification failure and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .branches import explore
from .cder import is_derivation, solve_derivations
from .cmod import classify_rank1
from .coeff import (CLOSED_FORMS, build_window, check_symbolic_indices, check_window_jacobi,
                    compare_closed_form)
from .cohom import (DEFAULT_DEGREE, same_h2, solve_cocycles, solve_cocycles_quadratic,
                    verify_solution)
from .dsl import AlgebraDoc, DslError, parse
from .exactpoly import Poly
from .gdb import GdError, check_all as gd_checks, from_quadratic, to_quadratic
from .lca import LcaError, NonlinearResidual, builtin, check_jacobi, check_skew, solve_parameter_constraints

COMMANDS = ("check", "h2", "cder", "coeff", "modules", "gd", "solve", "report")
DEFAULT_PIPELINE = [["check"], ["h2"], ["cder"], ["coeff"], ["gd"], ["modules", "--rank1"]]


class UsageError(Exception):
    pass


def _add_options(p: argparse.ArgumentParser, cmd: str) -> None:
    p.add_argument("--at", default=None, help="parameter point, e.g. a=3/2,b=0")
    if cmd == "h2":
        p.add_argument("--deg", type=int, default=DEFAULT_DEGREE)
        p.add_argument("--no-branches", action="store_true",
                       help="skip re-solving at special parameter points")
        p.add_argument("--cross", action="store_true",
                       help="also run the quadratic-route solver and compare")
    elif cmd == "cder":
        p.add_argument("--deg-l", type=int, default=4)
        p.add_argument("--deg-d", type=int, default=4)
    elif cmd == "coeff":
        p.add_argument("--window", type=int, default=4)
        p.add_argument("--dump", action="store_true", help="include the bracket table")
    elif cmd == "modules":
        p.add_argument("--rank1", action="store_true", default=True)
        p.add_argument("--deg", type=int, default=4)
    elif cmd == "solve":
        p.add_argument("--unknowns", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cwb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("file", help="a .lca file, or @NAME for a shipped family file")
        p.add_argument("-o", "--output", default=None, help="write the JSON report here")
        if cmd != "report":
            _add_options(p, cmd)
    return parser


class _JobParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _job_parser(cmd: str) -> argparse.ArgumentParser:
    p = _JobParser(prog=cmd, add_help=False)
    _add_options(p, cmd)
    return p


def parse_assignment(text: str | None, allowed) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"bad assignment {part!r}; expected name=value")
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in allowed:
            raise UsageError(f"unknown parameter {k!r}")
        if "." in v:
            raise UsageError(f"{v!r}: use exact rationals such as 3/2")
        try:
            out[k] = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad value {v!r} for {k}") from None
    return out


def load_doc(ref: str) -> AlgebraDoc:
    if ref.startswith("@"):
        name = ref[1:]
        res = resources.files("cwb").joinpath("families", f"{name}.lca")
        if not res.is_file():
            raise UsageError(f"no shipped family named {name!r}")
        return parse(res.read_text(encoding="utf-8"))
    try:
        text = Path(ref).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {ref}: {e.strerror}") from None
    return parse(text)


# ---------------------------------------------------------------------------
# jobs


def _s(x) -> str:
    return str(x)


def _asg_text(asg: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(asg.items()))


@dataclass
class JobResult:
    command: str
    parameters: dict
    passed: bool
    data: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"command": self.command, "parameters": self.parameters, "passed": self.passed}
        out.update(self.data)
        return out


def _point(doc: AlgebraDoc, at: str | None):
    A = doc.presentation()
    asg = parse_assignment(at, A.all_params() | set(doc.params))
    if asg:
        A = A.specialize(asg)
    return A, asg


def _axioms(A):
    return [check_skew(A), check_jacobi(A)]


def job_check(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    reps = _axioms(A)
    ok = all(r.passed for r in reps)
    lines = [r.summary() for r in reps]
    return JobResult("check", {"at": _asg_text(asg)}, ok, {"checks": [r.to_dict() for r in reps]}, lines)


def _h2_block(sol) -> dict:
    return {"dims": sol.dims, "bases": sol.rendered(),
            "genericity": [_s(g) for g in sol.genericity]}


def job_h2(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    params = {"deg": opts.deg, "at": _asg_text(asg)}
    jac = _axioms(A)
    if not all(r.passed for r in jac):
        bad = next(r for r in jac if not r.passed)
        return JobResult("h2", params, False, {"checks": [bad.to_dict()]}, [bad.summary()])
    solve = lambda B: solve_cocycles(B, opts.deg)  # noqa: E731
    if opts.no_branches:
        runs = [({}, solve(A), [])]
    else:
        runs = explore(solve, A)
    ok = True
    points = []
    lines = []
    generic_dim = runs[0][1].dims["H2"]
    for sub, sol, unexplored in runs:
        rep = verify_solution(sol)
        ok = ok and rep.passed
        where = _asg_text({**asg, **sub}) or "generic"
        block = {"point": where, **_h2_block(sol), "consistent": rep.passed}
        if unexplored:
            block["unexplored"] = [_s(u) for u in unexplored]
        if sub:
            block["special"] = sol.dims["H2"] != generic_dim
        points.append(block)
        d = sol.dims
        lines.append(f"{where}: dim Z2 = {d['Z2']}, dim B2 = {d['B2']}, dim H2 = {d['H2']}")
        lines += [f"  {b}" for b in sol.rendered()]
        if sol.genericity:
            lines.append("  genericity: " + ", ".join(_s(g) for g in sol.genericity))
        if not rep.passed:
            lines.append("  " + rep.summary())
    data = {"points": points}
    if opts.cross:
        try:
            G = from_quadratic(A)
            q = solve_cocycles_quadratic(G, opts.deg)
            agree = same_h2(q, runs[0][1])
        except (GdError, ValueError) as e:
            data["cross"] = {"error": str(e)}
            lines.append(f"quadratic route unavailable: {e}")
        else:
            data["cross"] = {"agree": agree, "dims": q.dims}
            ok = ok and agree
            lines.append(f"quadratic route: dim H2 = {q.dims['H2']}, "
                         f"{'agrees' if agree else 'DISAGREES'}")
    return JobResult("h2", params, ok, data, lines)


def job_cder(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    params = {"deg_l": opts.deg_l, "deg_d": opts.deg_d, "at": _asg_text(asg)}
    jac = _axioms(A)
    if not all(r.passed for r in jac):
        bad = next(r for r in jac if not r.passed)
        return JobResult("cder", params, False, {"checks": [bad.to_dict()]}, [bad.summary()])
    S = solve_derivations(A, opts.deg_l, opts.deg_d)
    reps = [is_derivation(A, S.as_map(v)) for v in S.outer]
    ok = all(r.passed for r in reps)
    dims = {"all": S.all.dim, "inner": S.inner_dim, "outer": S.outer_dim}
    data = {"dims": dims, "bases": [S.render(v) for v in S.outer],
            "genericity": [_s(g) for g in S.genericity], "label": S.label}
    lines = [f"dim all = {dims['all']}, dim inner = {dims['inner']}, outer dim = {dims['outer']} "
             f"({S.label})"]
    lines += [f"  {S.render(v)}" for v in S.outer]
    if S.genericity:
        lines.append("  genericity: " + ", ".join(_s(g) for g in S.genericity))
    return JobResult("cder", params, ok, data, lines)


def _family_of(doc: AlgebraDoc):
    A = doc.presentation()
    for fam, (_, names) in CLOSED_FORMS.items():
        key = "TSV" if fam == "TSV(a,b)" else "TSVc"
        if set(names) <= set(A.params) and A.same_table(builtin(key)):
            return fam, names
    return None, ()


def job_coeff(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    params = {"window": opts.window, "at": _asg_text(asg)}
    win = build_window(A, opts.window)
    reps = [check_window_jacobi(win)]
    fam, names = _family_of(doc)
    if fam is not None:
        values = {n: Poly.const(asg[n]) if n in asg else Poly.var(n) for n in names}
        reps.append(compare_closed_form(win, fam, values))
        reps.append(check_symbolic_indices(A, fam, values))
    ok = all(r.passed for r in reps)
    data = {"checks": [r.to_dict() for r in reps], "brackets": len(win.brackets)}
    if fam:
        data["closed_form"] = fam
    if getattr(opts, "dump", False):
        data["dump"] = win.dump().splitlines()
    return JobResult("coeff", params, ok, data, [r.summary() for r in reps])


def job_modules(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    params = {"deg": opts.deg, "at": _asg_text(asg)}
    if tuple(A.gens) != ("L", "Y", "M"):
        return JobResult("modules", params, True, {"skipped": "generators are not L, Y, M"},
                         ["skipped: generators are not L, Y, M"])
    cls = classify_rank1(A, opts.deg)
    ok = not cls.flags and all(r.passed for r in cls.checks)
    fams = [{"locus": _asg_text(f.locus) or "generic",
             "action": {g: _s(p) for g, p in f.action.items()},
             "free": f.free, "notes": f.notes} for f in cls.families]
    data = {"families": fams, "flags": cls.flags, "notes": cls.notes}
    lines = []
    for f in cls.families:
        lines.append(f.render())
        lines += [f"  - {n}" for n in f.notes]
    lines += [f"note: {n}" for n in cls.notes]
    lines += [f"FLAG: {x}" for x in cls.flags]
    return JobResult("modules", params, ok, data, lines)


def job_gd(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    params = {"at": _asg_text(asg)}
    try:
        if doc.novikov or doc.lie:
            G = doc.bialgebra().specialize(asg) if asg else doc.bialgebra()
        else:
            G = from_quadratic(A)
    except GdError as e:
        return JobResult("gd", params, False, {"error": str(e)}, [f"FAIL: {e}"])
    reps = gd_checks(G)
    ok = all(r.passed for r in reps)
    lines = [r.summary() for r in reps]
    data = {"checks": [r.to_dict() for r in reps]}
    if ok:
        Q = to_quadratic(G)
        same = Q.same_table(A)
        data["matches_brackets"] = same
        lines.append("quadratic algebra matches the presentation" if same
                     else "quadratic algebra DIFFERS from the presentation")
        ok = same
    return JobResult("gd", params, ok, data, lines)


def job_solve(doc, opts) -> JobResult:
    A, asg = _point(doc, opts.at)
    unknowns = [u.strip() for u in opts.unknowns.split(",") if u.strip()]
    params = {"unknowns": unknowns, "at": _asg_text(asg)}
    missing = [u for u in unknowns if u not in A.all_params()]
    if missing:
        raise UsageError(f"unknowns not among the parameters: {', '.join(missing)}")
    try:
        sol = solve_parameter_constraints(A, unknowns)
    except NonlinearResidual as e:
        return JobResult("solve", params, False, {"error": str(e), "monomial": e.monomial},
                         [f"FAIL: {e}"])
    data = {"consistent": sol.consistent,
            "solution": {u: _s(v) for u, v in sol.dependent.items()},
            "free": sol.free, "genericity": [_s(g) for g in sol.genericity]}
    if not sol.consistent:
        return JobResult("solve", params, False, data, ["no solution for generic parameters"])
    lines = [f"{u} = {v}" for u, v in sol.dependent.items()]
    lines.append("free: " + (", ".join(sol.free) if sol.free else "none"))
    return JobResult("solve", params, True, data, lines)


JOBS = {"check": job_check, "h2": job_h2, "cder": job_cder, "coeff": job_coeff,
        "modules": job_modules, "gd": job_gd, "solve": job_solve}


def run_job(doc: AlgebraDoc, argv: list) -> JobResult:
    if not argv or argv[0] not in JOBS:
        raise UsageError(f"unknown job {argv[0] if argv else ''!r}")
    opts = _job_parser(argv[0]).parse_args(argv[1:])
    return JOBS[argv[0]](doc, opts)


def run(doc: AlgebraDoc, command: str, opts=None) -> tuple[int, list]:
    """Run one command (``report`` runs the document's jobs) and return ``(status, results)``."""
    if command == "report":
        jobs = doc.jobs or DEFAULT_PIPELINE
        results = [run_job(doc, list(j)) for j in jobs]
    else:
        results = [JOBS[command](doc, opts)]
    status = 0 if all(r.passed for r in results) else 1
    return status, results


def _title(doc: AlgebraDoc) -> str:
    return f"{doc.name}({','.join(doc.params)})"


def emit_report(results: list, doc: AlgebraDoc | None = None) -> tuple[str, str]:
    """JSON text and plain-text summary; byte-stable for identical input."""
    payload = {"algebra": _title(doc) if doc else None,
               "params": list(doc.params) if doc else [],
               "passed": all(r.passed for r in results),
               "results": [r.to_dict() for r in results]}
    js = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    lines = []
    if doc is not None:
        lines.append(f"algebra {_title(doc)}")
    for r in results:
        par = ", ".join(f"{k}={v}" for k, v in sorted(r.parameters.items()) if v not in ("", None, []))
        lines.append(f"[{r.command}{' ' + par if par else ''}] {'pass' if r.passed else 'FAIL'}")
        lines += [f"  {x}" for x in r.lines]
    return js, "\n".join(lines) + ("\n" if lines else "")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = load_doc(args.file)
        status, results = run(doc, args.command, args)
        js, text = emit_report(results, doc)
    except (UsageError, DslError) as e:
        print(f"cwb: error: {e}", file=sys.stderr)
        return 2
    except (LcaError, GdError) as e:
        print(f"cwb: error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    out = args.output
    if out:
        try:
            Path(out).write_text(js, encoding="utf-8")
            if args.command == "report":
                Path(out).with_suffix(".txt").write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"cwb: error: cannot write {out}: {e.strerror}", file=sys.stderr)
            return 2
    return status


if __name__ == "__main__":
    sys.exit(main())
