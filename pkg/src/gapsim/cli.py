"""Command-line front end emitting canonical JSON reports.

All numbers in reports are exact: integers as decimal strings and
rationals as numerator/denominator pairs.  Floating point appears only in
the float_check section, printed to 12 significant digits.  Identical
inputs and flags produce byte-identical reports.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from fractions import Fraction

from . import suites
from .errors import GapsimError, ParseError, PromiseViolation
from .evolve import accept_probability, float_check, path_sum
from .gapp import gap_of, load_gap_machine
from .lowness import load_instance_bundle, validate_instance, verify_sign_preservation
from .model import load_system

USAGE_EXIT = 2
FAIL_EXIT = 1


def _digest(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as handle:
        sha.update(handle.read())
    return sha.hexdigest()


def _canonical(value):
    """JSON-ready form: exact ints as strings, rationals as pairs, floats at 12 digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return {"den": str(value.denominator), "num": str(value.numerator)}
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_canonical(v) for v in items]
    if dataclasses.is_dataclass(value):
        return _canonical(dataclasses.asdict(value))
    raise TypeError(f"cannot serialize {type(value)!r}")


def _write_report(args, command: str, input_paths: list, results, pass_fail: dict) -> None:
    report = {
        "command": command,
        "inputs": {path: _digest(path) for path in input_paths},
        "pass_fail": {k: bool(v) for k, v in pass_fail.items()},
        "results": _canonical(results),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if getattr(args, "json_out", None):
        with open(args.json_out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _parse_epsilon(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad epsilon {text!r}") from exc


def cmd_simulate(args) -> int:
    system = load_system(args.machine, max_configs=args.max_configs)
    prob = accept_probability(system)
    beta = path_sum(system, system.t_bound)
    path_square = beta.entries[system.accept] ** 2
    approx = float_check(system)
    cross_ok = path_square == prob.numerator
    float_ok = abs(approx - float(prob.as_fraction())) <= 1e-9
    results = {
        "float_check": approx,
        "log5_denominator": prob.log5_denominator,
        "numerator": prob.numerator,
        "path_square": path_square,
        "probability": prob.as_fraction(),
    }
    _write_report(
        args,
        "simulate",
        [args.machine],
        results,
        {"float_agrees": float_ok, "path_sum_agrees": cross_ok},
    )
    return 0 if cross_ok and float_ok else FAIL_EXIT


def cmd_gap_eval(args) -> int:
    machine = load_gap_machine(args.machine)
    value = gap_of(machine, args.input)
    _write_report(
        args, "gap-eval", [args.machine], {"gap": value, "input": args.input}, {}
    )
    return 0


def cmd_closure_test(args) -> int:
    ok, results = suites.run_closure(args.corpus)
    _write_report(args, "closure-test", [], results, {"closure": ok})
    return 0 if ok else FAIL_EXIT


def cmd_awpp_cert(args) -> int:
    ok, results = suites.run_awpp(args.corpus)
    _write_report(args, "awpp-cert", [], results, {"awpp": ok})
    return 0 if ok else FAIL_EXIT


def cmd_lwpp_cert(args) -> int:
    ok, results = suites.run_lwpp(args.corpus)
    _write_report(args, "lwpp-cert", [], results, {"lwpp": ok})
    return 0 if ok else FAIL_EXIT


def cmd_lowness(args) -> int:
    if args.bundle:
        instance, inputs = load_instance_bundle(args.bundle)
        valid, why = validate_instance(instance, inputs)
        report = verify_sign_preservation(instance, inputs)
        results = {
            "instance_valid": valid,
            "reason": why,
            "rows": [
                {
                    "error_budget": row.error_budget,
                    "error_mass": row.error_mass,
                    "inlined_gap": row.inlined_gap,
                    "sign_ok": row.sign_ok,
                    "true_gap": row.true_gap,
                    "x": row.x,
                }
                for row in report.rows
            ],
        }
        ok = valid and report.ok
        _write_report(args, "lowness", [args.bundle], results, {"signs": ok})
        return 0 if ok else FAIL_EXIT
    ok, results = suites.run_lowness(args.corpus)
    _write_report(args, "lowness", [], results, {"signs": ok})
    return 0 if ok else FAIL_EXIT


def cmd_bbbv(args) -> int:
    epsilons = (_parse_epsilon(args.epsilon),) if args.epsilon else None
    if epsilons:
        ok, results = suites.run_bbbv(args.corpus, epsilons=epsilons)
    else:
        ok, results = suites.run_bbbv(args.corpus)
    _write_report(args, "bbbv", [], results, {"flip_stability": ok})
    return 0 if ok else FAIL_EXIT


def cmd_rerelativize(args) -> int:
    ok, results = suites.run_rerelativize(args.corpus)
    _write_report(args, "rerelativize", [], results, {"decider_agrees": ok})
    return 0 if ok else FAIL_EXIT


def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        sys.stderr.write(
            f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}\n"
        )
        return USAGE_EXIT
    ok, results = suites.RUNNERS[args.suite](args.corpus)
    _write_report(args, f"verify {args.suite}", [], results, {args.suite: ok})
    return 0 if ok else FAIL_EXIT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapsim",
        description="Exact gap-valued simulation of finite unitary systems "
        "and their promise-class checkers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json-out", metavar="PATH", help="also write the report here")
        p.add_argument("--corpus", metavar="DIR", default=None, help="corpus directory")
        p.add_argument(
            "--max-configs",
            type=int,
            default=4096,
            metavar="N",
            help="configuration-count limit for loaded machines",
        )

    p = sub.add_parser("simulate", help="exact acceptance probability of a machine file")
    p.add_argument("machine")
    common(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("gap-eval", help="gap of a corpus machine on one input")
    p.add_argument("machine")
    p.add_argument("--input", default="", help="input string (default empty)")
    common(p)
    p.set_defaults(handler=cmd_gap_eval)

    p = sub.add_parser("closure-test", help="combinators versus brute-force arithmetic")
    common(p)
    p.set_defaults(handler=cmd_closure_test)

    p = sub.add_parser("awpp-cert", help="amplified-threshold certificates")
    common(p)
    p.set_defaults(handler=cmd_awpp_cert)

    p = sub.add_parser("lwpp-cert", help="exact-target certificates")
    common(p)
    p.set_defaults(handler=cmd_lwpp_cert)

    p = sub.add_parser("lowness", help="query-inlining sign preservation")
    p.add_argument("--bundle", metavar="PATH", help="instance bundle file")
    common(p)
    p.set_defaults(handler=cmd_lowness)

    p = sub.add_parser("bbbv", help="single-flip stability of query systems")
    p.add_argument("--epsilon", metavar="NUM/DEN", help="perturbation bound")
    common(p)
    p.set_defaults(handler=cmd_bbbv)

    p = sub.add_parser("rerelativize", help="frugal decider versus full simulation")
    common(p)
    p.set_defaults(handler=cmd_rerelativize)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    common(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT
    except PromiseViolation as exc:
        sys.stderr.write(f"promise violation: {exc}\n")
        return FAIL_EXIT
    except GapsimError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return FAIL_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
