"""Command line entry point: ``sharplll {gen,run,probe,boundary-table,verify}``.

Exit codes: 0 success, 1 verification failure, 2 TheoremViolation, 3 input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import SharpLLLError, TheoremViolation
from .geometry.oracle import boundary_height_r3, maximize_coordinate
from .geometry.probe import convexity_probe
from .lll import fileio
from .lll.fixing import run_sequential
from .lll.generate import FAMILIES, GenSpec, generate_instance
from .lll.instance import check_criterion, verify_assignment
from .localsim.simulator import run_local

EXIT_OK, EXIT_FAILED, EXIT_THEOREM, EXIT_INPUT = 0, 1, 2, 3
PROBE_COLUMNS = ("index", "lambda", "x", "y", "z", "margin", "violation")
BOUNDARY_COLUMNS = ("a", "b", "oracle_height", "f3_height", "abs_error")


def fmt(x: float) -> str:
    return "%.17g" % x


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, args.n, args.max_rank, args.max_domain, args.d, args.seed)
    inst = generate_instance(spec)
    _emit(fileio.dumps(inst), args.out)
    return EXIT_OK


def _order(inst, how: str, seed: int) -> list:
    order = list(inst.variables)
    if how == "reverse":
        order.reverse()
    elif how == "random":
        order = [order[i] for i in np.random.default_rng(seed).permutation(len(order))]
    return order


def _ids(inst, how: str, seed: int) -> dict:
    events = list(inst.events)
    if how == "meta":
        return fileio.node_ids(inst)
    if how == "reverse":
        return {e: len(events) - 1 - i for i, e in enumerate(events)}
    picks = np.random.default_rng(seed).choice(10 ** 9, size=len(events), replace=False)
    return {e: int(i) for e, i in zip(events, picks)}


def run_report(inst, mode: str, order: str = "forward", ids: str = "meta", seed: int = 0,
               force: bool = False, command=None) -> dict:
    """Execute one run and build the report dictionary (``wall_time_s`` is the only non-deterministic field)."""
    tiers: dict = {}

    def count(step):
        tiers[step.tier] = tiers.get(step.tier, 0) + 1

    start = time.perf_counter()
    round_log = None
    if mode == "sequential":
        assignment = run_sequential(inst, _order(inst, order, seed), force=force,
                                    on_step=lambda state, step: count(step))
    else:
        assignment, log = run_local(inst, _ids(inst, ids, seed), force=force,
                                    on_step=lambda node, step: count(step))
        round_log = log.to_dict()
    occurring = verify_assignment(inst, assignment)
    crit = check_criterion(inst)
    return {
        "command": list(command or []),
        "instance_digest": hashlib.sha256(fileio.dumps(inst).encode()).hexdigest(),
        "mode": mode,
        "outcome": "verified" if not occurring else "failed",
        "occurring_events": occurring,
        "criterion": {"p": fileio.format_fraction(crit.p), "d": crit.d,
                      "p_2_to_d": fileio.format_fraction(crit.value), "passed": crit.passed},
        "round_log": round_log,
        "oracle_stats": {"fix_steps": sum(tiers.values()), "tiers": dict(sorted(tiers.items()))},
        "assignment": {str(k): v for k, v in assignment.items()},
        "wall_time_s": time.perf_counter() - start,
    }


def cmd_run(args) -> int:
    inst = fileio.load(args.instance, force=args.force)
    try:
        report = run_report(inst, args.mode, args.order, args.ids, args.seed, args.force, args.argv)
    except TheoremViolation as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "diagnostic": exc.diagnostic}, sort_keys=True, default=str) + "\n")
        return EXIT_THEOREM
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if report["outcome"] == "verified" else EXIT_FAILED


def probe_csv(r: int, samples: int, seed: int, tol: float | None):
    rep = convexity_probe(r, samples, seed, tol=tol)
    rows = []
    for i, row in enumerate(rep.rows):
        rows.append([i, fmt(row.lam), " ".join(map(fmt, row.x)), " ".join(map(fmt, row.y)),
                     " ".join(map(fmt, row.z)), fmt(row.margin), int(row.margin > rep.tol)])
    return rep, _csv_text(PROBE_COLUMNS, rows)


def cmd_probe(args) -> int:
    if not 2 <= args.r <= 6:
        raise SharpLLLError("probe needs 2 <= r <= 6")
    rep, text = probe_csv(args.r, args.samples, args.seed, args.tol)
    _emit(text, args.out)
    sys.stderr.write(f"r={rep.r} samples={rep.n_samples} violations={rep.violations} "
                     f"worst_margin={fmt(rep.worst_margin)} tol={fmt(rep.tol)}\n")
    return EXIT_OK if rep.violations == 0 else EXIT_FAILED


def boundary_rows(grid: int, lo: float = 0.0, hi: float = 0.5):
    """Rows ``(a, b, oracle height, closed-form height, |difference|)`` on a ``grid x grid`` mesh."""
    axis = np.linspace(lo, hi, grid)
    rows = []
    for a in axis:
        for b in axis:
            oracle = maximize_coordinate([a, b], 2)
            closed = boundary_height_r3(a, b)
            rows.append((float(a), float(b), oracle, closed, abs(oracle - closed)))
    return rows


def cmd_boundary_table(args) -> int:
    if args.r != 3:
        raise SharpLLLError("boundary-table is only defined for r = 3")
    rows = boundary_rows(args.grid, args.lo, args.hi)
    _emit(_csv_text(BOUNDARY_COLUMNS, [[fmt(v) for v in row] for row in rows]), args.out)
    worst = max(row[4] for row in rows)
    tol = 1e-6 if args.tol is None else args.tol
    sys.stderr.write(f"grid={args.grid} max_abs_error={fmt(worst)} tol={fmt(tol)}\n")
    return EXIT_OK if worst <= tol else EXIT_FAILED


def cmd_verify(args) -> int:
    inst = fileio.load(args.instance, force=args.force)
    try:
        text = Path(args.assignment).read_text()
    except OSError as exc:
        raise SharpLLLError(f"cannot read {args.assignment}: {exc}") from None
    raw = fileio.loads_assignment(text)
    occurring = verify_assignment(inst, raw)
    report = {"occurring_events": occurring, "outcome": "verified" if not occurring else "failed"}
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if not occurring else EXIT_FAILED


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--tol", type=float, default=None, help="tolerance (command specific)")
    common.add_argument("--force", action="store_true", help="accept instances failing p*2^d < 1")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = _Parser(prog="sharplll", description="Distributed LLL fixing and representable-tuple geometry.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate an instance file")
    g.add_argument("--family", choices=FAMILIES, default="shared-variable-random")
    g.add_argument("--n", type=int, default=20, help="number of events")
    g.add_argument("--max-rank", type=int, default=3)
    g.add_argument("--max-domain", type=int, default=3)
    g.add_argument("--d", type=int, default=4, help="target maximum dependency degree")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", parents=[common], help="fix all variables and verify")
    r.add_argument("instance")
    r.add_argument("--mode", choices=("sequential", "local"), default="sequential")
    r.add_argument("--order", choices=("forward", "reverse", "random"), default="forward")
    r.add_argument("--ids", choices=("meta", "reverse", "random"), default="meta",
                   help="LOCAL identifiers for mode=local")
    r.set_defaults(func=cmd_run)

    p = sub.add_parser("probe", parents=[common], help="sample convex combinations of non-representable tuples")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_probe)

    b = sub.add_parser("boundary-table", parents=[common], help="oracle vs closed-form boundary at r=3")
    b.add_argument("--r", type=int, default=3)
    b.add_argument("--grid", type=int, default=50)
    b.add_argument("--lo", type=float, default=0.0)
    b.add_argument("--hi", type=float, default=0.5)
    b.set_defaults(func=cmd_boundary_table)

    v = sub.add_parser("verify", parents=[common], help="list events an assignment makes occur")
    v.add_argument("instance")
    v.add_argument("--assignment", required=True, help="JSON map of variable id to symbol")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except TheoremViolation as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_THEOREM
    except (SharpLLLError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
