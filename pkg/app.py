"""
Command-line entry point for the QB-ring workbench.

    python app.py check specs/zn6.json --property qb
    python app.py sets Z4 --set radical
    python app.py verify specs/m2f2.json --suite matrix-reduction --seed 7
    python app.py reduce-row specs/zn6.json --random
    python app.py demo jacobson --p 2

A ring is given as a JSON spec file or as a zoo name. JSON reports go to
stdout (or --out); progress goes to stderr.
"""

import argparse
import json
import os
import sys
import traceback
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy

from src import console
from src.closure import adversible_mask, cl, cr, is_b_nonunital, is_b_ring, is_qb_nonunital, is_qb_ring
from src.config import CONFIG, override
from src.errors import ForeignElement, MalformedSpec, QBRError
from src.exchange import is_exchange_ring
from src.ideals import jacobson_radical, primeness
from src.jacobson_algebra import (all_hold, demo_claims, in_matrix_ideal, laurent_coefficients, laurent_image,
                                  parse_jelement)
from src.matrix_qb import make_row, random_unimodular_row, reduce_row_m2
from src.quasi import qadversible_mask, qinv_mask
from src.regular import idempotents, maximal_regular_elements, regular_mask
from src.reports import CheckRecord, Report, status_of, timed
from src.ring_specs import NONUNITAL_ZOO, ZOO, RingSpec, build_ring, load_spec
from src.rings import FiniteRing, left_units, members_of, right_units, units
from src.suites import SUITE_ALIASES, SUITES, run_suites

EXIT_MALFORMED = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# Properties and sets
# ---------------------------------------------------------------------------

def _closure_property(verdict_of: Callable) -> Callable[[FiniteRing], Tuple[bool, dict]]:
    def run(R: FiniteRing) -> Tuple[bool, dict]:
        verdict = verdict_of(R)
        return verdict.holds, verdict.to_payload()
    return run


def _exchange(R: FiniteRing) -> Tuple[bool, dict]:
    failure = is_exchange_ring(R)
    return failure is None, {"witness": failure}


def _semiprime(R: FiniteRing) -> Tuple[bool, dict]:
    p = primeness(R)
    return p.semiprime, {"witness": p.semiprime_witness}


def _prime(R: FiniteRing) -> Tuple[bool, dict]:
    p = primeness(R)
    return p.prime, {"witness": list(p.prime_witness) if p.prime_witness else None}


PROPERTIES: Dict[str, Callable[[FiniteRing], Tuple[bool, dict]]] = {
    "b": _closure_property(is_b_ring),
    "qb": _closure_property(is_qb_ring),
    "b-nonunital": _closure_property(is_b_nonunital),
    "qb-nonunital": _closure_property(is_qb_nonunital),
    "exchange": _exchange,
    "semiprime": _semiprime,
    "prime": _prime,
}

SETS: Dict[str, Callable[[FiniteRing], np.ndarray]] = {
    "units": units,
    "left-units": left_units,
    "right-units": right_units,
    "qinv": qinv_mask,
    "regular": regular_mask,
    "idempotents": idempotents,
    "radical": lambda R: jacobson_radical(R).members,
    "maxreg": maximal_regular_elements,
    "cl-qinv": lambda R: cl(R, qinv_mask(R)),
    "cr-qinv": lambda R: cr(R, qinv_mask(R)),
    "adversible": adversible_mask,
    "qadversible": qadversible_mask,
}


# ---------------------------------------------------------------------------
# Ring resolution
# ---------------------------------------------------------------------------

def resolve_spec(target: str) -> RingSpec:
    """A JSON spec file, or the name of a zoo ring."""
    if os.path.exists(target):
        return load_spec(target)
    if target in ZOO:
        return ZOO[target]
    if target in NONUNITAL_ZOO:
        return NONUNITAL_ZOO[target]
    raise MalformedSpec(f"{target!r} is neither a spec file nor a zoo ring")


def _ring(spec: RingSpec) -> FiniteRing:
    R = build_ring(spec)
    console.info(f"Ring {R.label}: order {R.order}, {'unital' if R.unital else 'no identity'}")
    return R


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(args: argparse.Namespace) -> Report:
    spec = resolve_spec(args.spec)
    report = Report(spec=spec, seed=CONFIG["seed"])
    R = _ring(spec)
    console.stage(1, f"Checking property: {args.property}")
    with timed(report.checks, args.property, "property") as rec:
        holds, payload = PROPERTIES[args.property](R)
        rec.status = status_of(holds)
        rec.payload = payload
    return report


def cmd_sets(args: argparse.Namespace) -> Report:
    spec = resolve_spec(args.spec)
    report = Report(spec=spec, seed=CONFIG["seed"])
    R = _ring(spec)
    console.stage(1, f"Computing set: {args.set}")
    with timed(report.checks, args.set, "set") as rec:
        members = members_of(SETS[args.set](R))
        rec.payload = {"members": members, "size": len(members),
                       "described": [R.describe(m) for m in members]}
    return report


def cmd_verify(args: argparse.Namespace) -> Report:
    spec = resolve_spec(args.spec)
    console.banner(f"Verifying {args.suite} with seed {CONFIG['seed']}")
    report = Report(spec=spec, seed=CONFIG["seed"])
    ring = _ring(spec) if CONFIG["jobs"] <= 1 else None
    report.checks = run_suites(spec, args.suite, CONFIG["seed"], jobs=CONFIG["jobs"], ring=ring)
    return report


def _matrix(value) -> Tuple[int, int, int, int]:
    """[[a, b], [c, d]] or [a, b, c, d], row-major."""
    flat = [e for row in value for e in row] if value and isinstance(value[0], list) else list(value)
    if len(flat) != 4:
        raise MalformedSpec(f"expected a 2x2 matrix, got {value!r}")
    return tuple(int(e) for e in flat)


def _load_row(R: FiniteRing, source: str):
    text = source
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
        A, B, X, W = (_matrix(data[k]) for k in ("A", "B", "X", "W"))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"row must be JSON with 2x2 matrices A, B, X, W ({exc})") from exc
    R.check(*A, *B, *X, *W)
    return make_row(R, A, B, X, W)


def cmd_reduce_row(args: argparse.Namespace) -> Report:
    spec = resolve_spec(args.spec)
    report = Report(spec=spec, seed=CONFIG["seed"])
    R = _ring(spec)
    rng = np.random.default_rng(CONFIG["seed"])
    if args.row is not None:
        rows = [_load_row(R, args.row)]
    else:
        rows = [random_unimodular_row(R, rng) for _ in range(args.random)]
    for i, row in enumerate(rows, 1):
        console.stage(i, f"Reducing row {row.to_payload()}")
        with timed(report.checks, f"row {i}", "reduce-row") as rec:
            result = reduce_row_m2(R, row, rng)
            rec.payload = {"row": row.to_payload(), **result.to_payload()}
            console.success(f"Y = {list(result.Y)}")
    return report


def cmd_demo(args: argparse.Namespace) -> Report:
    if not sympy.isprime(args.p):
        raise MalformedSpec(f"{args.p} is not prime", p=args.p)
    elements = [(literal, parse_jelement(literal, args.p)) for literal in args.element or []]
    spec = {"kind": "jacobson", "p": args.p}
    report = Report(spec=spec, seed=CONFIG["seed"])
    console.stage(1, f"Jacobson algebra over F_{args.p}")
    with timed(report.checks, "demo claims", "jacobson") as rec:
        claims = demo_claims(args.p, bound=CONFIG["degree_bound"], seed=CONFIG["seed"])
        rec.status = status_of(all_hold(claims.values()))
        rec.payload = {"claims": claims, "bound": CONFIG["degree_bound"], "kind": "bounded-certificate"}
        for name, claim in claims.items():
            (console.success if claim["holds"] else console.error)(name)
    for k, (literal, u) in enumerate(elements, 2):
        console.stage(k, f"Element {literal}")
        with timed(report.checks, f"element {literal}", "jacobson") as rec:
            image = laurent_image(u)
            rec.payload = {"normal_form": str(u), "laurent_image": str(image),
                           "laurent_coefficients": laurent_coefficients(image, args.p),
                           "in_matrix_ideal": in_matrix_ideal(u)}
    return report


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the malformed-input code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    common.add_argument("--jobs", type=int, default=None, help="process pool size for suites")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--verbose", action="store_true", default=None, help="stage traces and progress bars")
    common.add_argument("--no-timings", action="store_true", help="drop wall_time fields from the report")

    parser = _Parser(prog="qbr", description="Computational workbench for QB-rings")
    parser.add_argument("--list-suites", action="store_true", help="print the verification suites and exit")
    commands = parser.add_subparsers(dest="command")

    check = commands.add_parser("check", parents=[common], help="decide one ring property")
    check.add_argument("spec", help="spec file or zoo ring name")
    check.add_argument("--property", required=True, choices=sorted(PROPERTIES))

    sets = commands.add_parser("sets", parents=[common], help="compute a distinguished subset")
    sets.add_argument("spec", help="spec file or zoo ring name")
    sets.add_argument("--set", required=True, choices=sorted(SETS))

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("spec", help="spec file or zoo ring name")
    verify.add_argument("--suite", default="all", choices=sorted(SUITES) + sorted(SUITE_ALIASES) + ["all"],
                        help="suite name or its numbered alias")

    reduce = commands.add_parser("reduce-row", parents=[common], help="reduce a unimodular row of M2(R)")
    reduce.add_argument("spec", help="spec file or zoo ring name of the base ring")
    source = reduce.add_mutually_exclusive_group(required=True)
    source.add_argument("--row", help="JSON text or file with matrices A, B, X, W")
    source.add_argument("--random", type=int, nargs="?", const=1, help="reduce N random rows")

    demo = commands.add_parser("demo", parents=[common], help="infinite examples")
    demo.add_argument("which", choices=["jacobson"])
    demo.add_argument("--p", type=int, default=2, help="prime characteristic")
    demo.add_argument("--element", action="append", help="element literal to normalize, e.g. 'y^2 x + 3'")
    return parser


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "check": cmd_check,
    "sets": cmd_sets,
    "verify": cmd_verify,
    "reduce-row": cmd_reduce_row,
    "demo": cmd_demo,
}


def list_suites() -> None:
    for suite in SUITES.values():
        print(f"{suite.name:22s} {suite.alias:10s} {suite.description}")


def emit(report: Report, out: Optional[str], timings: bool) -> None:
    text = report.to_json(timings=timings)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        console.info(f"Report written to {out}")
    else:
        print(text)


def summarize(report: Report) -> None:
    counts = report.counts()
    console.banner(f"RESULT: {report.status.upper()}")
    console.info(", ".join(f"{k}: {v}" for k, v in counts.items() if v))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_MALFORMED
    if args.list_suites:
        list_suites()
        return 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_MALFORMED
    try:
        override(seed=args.seed, jobs=args.jobs, verbose=args.verbose)
        report = COMMANDS[args.command](args)
    except (MalformedSpec, ForeignElement) as exc:
        console.error(exc.message)
        print(json.dumps(exc.to_payload(), indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_MALFORMED
    except QBRError as exc:
        console.warn(exc.message)
        report = Report(spec={"target": getattr(args, "spec", None)}, seed=CONFIG["seed"],
                        checks=[CheckRecord(name=args.command, status="skipped", payload=exc.to_payload())])
    except Exception:
        console.error("Internal error")
        traceback.print_exc()
        return EXIT_INTERNAL
    summarize(report)
    emit(report, args.out, timings=not args.no_timings)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
