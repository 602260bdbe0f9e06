"""Command-line front end.

Exit codes: 0 affirmative, 1 negative, 2 inconclusive, 3 usage/parse error,
4 enumeration budget or cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import oracle, solutions, solvability
from .errors import BudgetExceeded, CapExceeded, DimensionError, NotAnAeSolution, PreconditionViolated
from .fileformat import ParseError, format_rational, parse_realization, parse_system, parse_vector
from .interval import QuantifiedSystem
from .lp import Certificate, Witness, verify

EXIT_YES, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def encode(value):
    """JSON-ready structure with every rational as an exact string."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, Witness):
        return {"witness": {"x": encode(value.x), "y": encode(value.y)}}
    if isinstance(value, Certificate):
        return {"certificate": {"p": encode(value.p), "q": encode(value.q)}}
    raise TypeError(f"cannot encode {type(value).__name__}")


def approximate(value):
    """Float rendering of an encoded report (display only)."""
    if isinstance(value, dict):
        return {k: approximate(v) for k, v in value.items()}
    if isinstance(value, list):
        return [approximate(v) for v in value]
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except ValueError:
            return value
    return value


def _signs(s) -> str:
    return "".join("+" if v > 0 else "-" for v in s) or "()"


def _result_entry(lin, result) -> dict:
    entry = encode(result)
    entry["verified"] = verify(lin, result)
    return entry


def cmd_check(system: QuantifiedSystem, args) -> tuple:
    x, y = parse_vector(args.x), parse_vector(args.y)
    rep = solutions.check_ae_solution(system, x, y)
    report = {
        "command": "check",
        "verdict": "AE solution" if rep.is_solution else "not an AE solution",
        "is_solution": rep.is_solution,
        "x": encode(x), "y": encode(y),
        "eq_slack": encode(rep.eq_slack),
        "ineq_slack": encode(rep.ineq_slack),
        "sign_violation": rep.sign_violation,
    }
    return report, EXIT_YES if rep.is_solution else EXIT_NO


def cmd_find(system: QuantifiedSystem, args) -> tuple:
    if args.poly:
        sol = solutions.find_ae_solution_poly(system)
        lin = solutions.lifted_system(system)
        report = {"command": "find", "method": "lifted single LP"}
        if sol is None:
            from .lp import solve_feasibility
            cert = solve_feasibility(lin)
            report.update(verdict="no AE solution; lifted system infeasible", solution=None,
                          certificate=_result_entry(lin, cert))
            return report, EXIT_NO
        x, y, z = sol
        report.update(verdict="AE solution found", solution={"x": encode(x), "y": encode(y), "z": encode(z)},
                      check=solutions.check_ae_solution(system, x, y).is_solution)
        return report, EXIT_YES

    if system.n_free > args.cap_orthants:
        raise BudgetExceeded(f"2^{system.n_free} orthants exceeds cap 2^{args.cap_orthants}")
    outcomes = solutions.search_orthants(system)
    orthants = [{"s": _signs(o.s), "result": _result_entry(o.system, o.result)} for o in outcomes]
    report = {"command": "find", "method": "orthant enumeration", "orthants": orthants}
    last = outcomes[-1] if outcomes else None
    if last is not None and isinstance(last.result, Witness):
        x, y = last.result.x, last.result.y
        report.update(verdict="AE solution found",
                      solution={"x": encode(x), "y": encode(y), "s": _signs(last.s)},
                      check=solutions.check_ae_solution(system, x, y).is_solution)
        return report, EXIT_YES
    report.update(verdict="no AE solution; all orthants infeasible", solution=None)
    return report, EXIT_NO


def _verdict_report(verdict: solvability.SolvabilityVerdict, method: str) -> dict:
    entries = []
    for key, res in verdict.witnesses.items():
        lin = verdict.systems[key]
        if key and isinstance(key[0], tuple):
            label = {"z": _signs(key[0]), "s": _signs(key[1])}
        else:
            label = {"s": _signs(key)}
        entries.append({**label, "result": _result_entry(lin, res)})
    report = {"command": "solvable", "method": method, "status": verdict.status.value, "sign_systems": entries}
    if verdict.failing_s is not None:
        report["failing_s"] = _signs(verdict.failing_s)
    if verdict.z_choice is not None:
        report["z"] = _signs(verdict.z_choice)
    if verdict.solution is not None:
        report["solution"] = {"x": encode(verdict.solution[0]), "y": encode(verdict.solution[1])}
    return report


def cmd_solvable(system: QuantifiedSystem, args) -> tuple:
    if args.form10:
        verdict = solvability.ae_solvable_ineq_form(system)
        method = "single LP (inequality system with universal free-variable block)"
    elif args.sufficient or (not args.exact and not _exact_applies(system)):
        verdict = solvability.ae_solvable_sufficient(system, max_rows=args.cap_rows, max_free=args.cap_orthants)
        method = "sufficient condition"
    else:
        verdict = solvability.ae_solvable_exact(system, max_rows=args.cap_rows)
        method = "exact sign-vector test"
    report = _verdict_report(verdict, method)
    code = {
        solvability.Status.SOLVABLE: EXIT_YES,
        solvability.Status.SUFFICIENT_HOLDS: EXIT_YES,
        solvability.Status.UNSOLVABLE: EXIT_NO,
        solvability.Status.SUFFICIENT_FAILS: EXIT_INCONCLUSIVE,
    }[verdict.status]
    return report, code


def _exact_applies(system: QuantifiedSystem) -> bool:
    try:
        solutions.require_exists_free_degenerate(system)
    except PreconditionViolated:
        return False
    return True


def cmd_attain(system: QuantifiedSystem, args) -> tuple:
    x, y = parse_vector(args.x), parse_vector(args.y)
    if args.forall_file:
        with open(args.forall_file, encoding="utf-8") as fh:
            choice = parse_realization(fh.read(), system)
    else:
        choice = oracle.Realization.mid_of(system, "forall")
    try:
        real = solutions.attain_exists_params(system, x, y, choice)
    except NotAnAeSolution as exc:
        return {"command": "attain", "verdict": str(exc)}, EXIT_NO
    ok = solutions.substitution_holds(choice, real.as_realization(), x, y)
    report = {
        "command": "attain",
        "verdict": "existential realization found",
        "u": encode(real.u),
        "exists": {k: encode(v) for k, v in real.as_realization().blocks().items()},
        "forall": {k: encode(v) for k, v in choice.blocks().items()},
        "substitution_holds": ok,
    }
    return report, EXIT_YES if ok else EXIT_NO


def cmd_oracle(system: QuantifiedSystem, args) -> tuple:
    if args.x is not None or args.y is not None:
        ok = oracle.oracle_check_ae_solution(system, parse_vector(args.x or ""), parse_vector(args.y or ""),
                                             cap=args.cap_forall)
        return {"command": "oracle", "mode": "AE-solution vertex check", "is_solution": ok}, \
            EXIT_YES if ok else EXIT_NO
    verdict = oracle.oracle_ae_solvable(system, args.grid, cap=args.cap_forall, free_cap=args.cap_orthants)
    report = {
        "command": "oracle",
        "mode": "AE-solvability falsification",
        "grid": args.grid,
        "status": verdict.status.value,
        "samples_tested": verdict.samples_tested,
        "refutations": 0 if verdict.counterexample is None else 1,
    }
    if verdict.counterexample is not None:
        report["counterexample"] = {k: encode(v) for k, v in verdict.counterexample.blocks().items()}
        ref = verdict.refutation
        report["certificates"] = [{"s": _signs(s), "result": _result_entry(ref.systems[s], r)}
                                  for s, r in ref.results.items()]
    code = {
        oracle.OracleStatus.CONFIRMED: EXIT_YES,
        oracle.OracleStatus.REFUTED_WITH_WITNESS: EXIT_NO,
        oracle.OracleStatus.INCONCLUSIVE_UP_TO_SAMPLES: EXIT_INCONCLUSIVE,
    }[verdict.status]
    return report, code


TABLE1_BLOCKS = {
    solutions.Form.EQ_FREE: ("B", "a"),
    solutions.Form.EQ_NONNEG: ("A", "a"),
    solutions.Form.INEQ_FREE: ("D", "b"),
    solutions.Form.INEQ_NONNEG: ("C", "b"),
}


def cmd_table1(system: QuantifiedSystem, args) -> tuple:
    kind, form = solutions.Kind(args.kind), solutions.Form(args.form)
    mat_name, rhs_name = TABLE1_BLOCKS[form]
    A = getattr(system, mat_name).total
    b = getattr(system, rhs_name).total
    x = parse_vector(args.x)
    ok = solutions.table1_condition(kind, form, A, b, x)
    report = {"command": "table1", "kind": kind.value, "form": form.value,
              "blocks": [mat_name, rhs_name], "x": encode(x), "holds": ok}
    return report, EXIT_YES if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aesolve", description="AE solutions and AE solvability "
                                     "of interval linear systems, with exact certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="system file ('-' for stdin)")
    common.add_argument("--float", action="store_true",
                        help="also print non-authoritative decimal approximations")
    common.add_argument("--cap-forall", type=int, default=oracle.DEFAULT_FORALL_CAP,
                        help="max wide universal entries for brute force (default 16)")
    common.add_argument("--cap-orthants", type=int, default=oracle.DEFAULT_FREE_CAP,
                        help="max free variables n' for sign enumeration (default 8)")
    common.add_argument("--cap-rows", type=int, default=16,
                        help="max equation rows m for sign enumeration (default 16)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test a point for being an AE solution")
    p.add_argument("--x", default="", help="comma-separated rationals")
    p.add_argument("--y", default="")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("find", parents=[common], help="find an AE solution")
    p.add_argument("--poly", action="store_true", help="single lifted LP (needs Rad B^E = Rad D^E = 0)")
    p.set_defaults(handler=cmd_find)

    p = sub.add_parser("solvable", parents=[common], help="decide or bound AE solvability")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sufficient", action="store_true")
    mode.add_argument("--form10", action="store_true")
    p.set_defaults(handler=cmd_solvable)

    p = sub.add_parser("attain", parents=[common], help="existential parameters realising an AE solution")
    p.add_argument("--x", default="")
    p.add_argument("--y", default="")
    p.add_argument("--forall-file", help="universal realization (defaults to midpoints)")
    p.set_defaults(handler=cmd_attain)

    p = sub.add_parser("oracle", parents=[common], help="brute-force checks")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("table1", parents=[common], help="classical weak/strong/tolerable/controllable test")
    p.add_argument("--kind", required=True, choices=[k.value for k in solutions.Kind])
    p.add_argument("--form", required=True, choices=[f.value for f in solutions.Form])
    p.add_argument("--x", default="")
    p.set_defaults(handler=cmd_table1)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        system = parse_system(text)
        report, code = args.handler(system, args)
    except (BudgetExceeded, CapExceeded) as exc:
        report, code = {"command": args.command, "status": "budget-exceeded", "error": str(exc)}, EXIT_BUDGET
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_USAGE
    except (OSError, ValueError, DimensionError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    report["exit_code"] = code
    if args.float:
        report["approx"] = approximate({k: v for k, v in report.items() if k != "exit_code"})
        report["approx_note"] = "decimal approximations for display only; exact values are authoritative"
    print(json.dumps(report, indent=2, ensure_ascii=False), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
