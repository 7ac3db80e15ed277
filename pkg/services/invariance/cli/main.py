"""Command-line front end.

Exit codes: 0 when every check is within tolerance, 1 when a check exceeds
its tolerance, 2 on usage, input or convergence errors. Reports go to
standard output (or ``--out``); logs go to standard error.
"""

import argparse
import sys
import uuid
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional

import structlog

from core.errors import InvarianceError, to_error_model
from core.logging_config import bind_correlation_id, setup_logging
from core.settings import settings
from core.yaml_utils import dump_json
from noether import DRIFT_THRESHOLD, report_to_csv
from pipeline import charge_entry, run_report, solve_entry, verify_entry
from registry import export_problem_file, names, resolve_target
from solver import Extremal, ResolveConfig, ShootConfig
from symmetry import DEFAULT_S_SAMPLES, VerifyConfig

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


def _add_verify_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-samples", type=float, nargs="+", default=list(DEFAULT_S_SAMPLES), help="family parameters s")
    p.add_argument("--points", type=int, default=100, help="random feasible points for pointwise checks")
    p.add_argument("--inv-tol", type=float, default=1e-9, help="invariance residual floor")
    p.add_argument("--grid-factor", type=float, default=10.0, help="arc tolerance as a multiple of the s=0 residual")
    p.add_argument("--series", action="store_true", help="include per-node residual series")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--psi-a", type=float, nargs="+", default=None, help="initial costate guess")
    p.add_argument("--grid", type=int, default=1000, help="number of grid intervals N")
    p.add_argument("--tol", type=float, default=1e-8, help="boundary mismatch tolerance")
    p.add_argument("--max-iter", type=int, default=30, help="shooting Newton iterations")
    p.add_argument("--max-halvings", type=int, default=30, help="damping halvings per iteration")
    p.add_argument("--fd-step", type=float, default=1e-6, help="shooting Jacobian step")
    p.add_argument("--resolve-tol", type=float, default=1e-12, help="algebraic resolve tolerance")
    p.add_argument("--resolve-max-iter", type=int, default=50)
    p.add_argument("--active", type=int, nargs="*", default=None, help="active inequality rows (0-based)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noether-verify",
        description="Verify invariance of constrained optimal control problems and certify conserved charges.",
    )
    parser.add_argument("--seed", type=int, default=settings.default_seed, help="random seed for sample points")
    parser.add_argument("--log-level", default=None, help="override NOETHER_LOG_LEVEL")
    parser.add_argument("--log-format", choices=["json", "console"], default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="registry names")

    p = sub.add_parser("describe", help="problem summary and families")
    p.add_argument("target", help="registry name or problem file")
    p.add_argument("--json", action="store_true", help="emit the problem document")

    p = sub.add_parser("verify", help="invariance report")
    p.add_argument("target")
    p.add_argument("--arc", type=Path, default=None, help="verify along this arc instead of at random points")
    p.add_argument("--family", nargs="+", default=None)
    _add_verify_flags(p)

    p = sub.add_parser("solve", help="compute an extremal by shooting")
    p.add_argument("target")
    p.add_argument("--out", type=Path, default=None, help="arc JSON path (standard output otherwise)")
    _add_solver_flags(p)

    p = sub.add_parser("charge", help="conservation report along an arc")
    p.add_argument("target")
    p.add_argument("--arc", type=Path, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--threshold", type=float, default=DRIFT_THRESHOLD, help="relative drift threshold")
    p.add_argument("--csv", type=Path, default=None, help="write t, charge, drift series")

    p = sub.add_parser("report", help="solve, verify and check conservation")
    p.add_argument("target")
    p.add_argument("--out", type=Path, default=None, help="report JSON path (standard output otherwise)")
    p.add_argument("--csv-dir", type=Path, default=None, help="directory for per-family charge series")
    p.add_argument("--arc-out", type=Path, default=None, help="also persist the solved arc")
    p.add_argument("--threshold", type=float, default=DRIFT_THRESHOLD)
    _add_solver_flags(p)
    _add_verify_flags(p)
    return parser


def _verify_config(args: argparse.Namespace) -> VerifyConfig:
    return VerifyConfig(
        s_samples=args.s_samples,
        points=args.points,
        tol=args.inv_tol,
        grid_factor=args.grid_factor,
        seed=args.seed,
        include_series=args.series,
    )


def _shoot_config(args: argparse.Namespace, default_active: Sequence[int]) -> ShootConfig:
    return ShootConfig(
        grid=args.grid,
        fd_step=args.fd_step,
        tol=args.tol,
        max_iter=args.max_iter,
        max_halvings=args.max_halvings,
        active=list(default_active if args.active is None else args.active),
        resolve=ResolveConfig(tol=args.resolve_tol, max_iter=args.resolve_max_iter),
    )


def _emit(data: Any, out: Optional[Path] = None) -> None:
    text = dump_json(data, out)
    if out is None:
        print(text)


def _exit_for(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def run(args: argparse.Namespace) -> int:
    if args.command == "list":
        for name in names():
            print(name)
        return EXIT_OK

    entry = resolve_target(args.target)

    if args.command == "describe":
        if args.json:
            _emit(export_problem_file(entry))
        else:
            summary = entry.summary()
            print(f"{summary['name']}: {summary['description']}")
            print(f"  n={summary['n']} r={summary['r']} m={summary['m']} m_ineq={summary['m_ineq']} sense={summary['sense']}")
            print(f"  cost: {entry.problem.L.source}")
            for i, f in enumerate(entry.problem.dynamics, start=1):
                print(f"  x{i}' = {f.source}")
            for c in entry.problem.constraints:
                print(f"  constraint: {c.source}")
            for family in entry.families:
                law = entry.law(family.name)
                print(f"  family {family.name}: T = {family.T.source}" + (f"; law: {law.display}" if law else ""))
        return EXIT_OK

    if args.command == "verify":
        arc = Extremal.load(args.arc) if args.arc else None
        reports = verify_entry(entry, _verify_config(args), arc=arc, families=args.family)
        _emit([r.model_dump() for r in reports])
        return _exit_for(all(r.passed for r in reports))

    if args.command == "solve":
        arc = solve_entry(entry, args.psi_a, _shoot_config(args, entry.active))
        _emit(arc.to_model().model_dump(by_alias=True), args.out)
        assert arc.diagnostics is not None
        return _exit_for(arc.diagnostics.passed)

    if args.command == "charge":
        arc = Extremal.load(args.arc)
        report = charge_entry(entry, arc, args.family, args.threshold)
        _emit(report.model_dump())
        if args.csv:
            report_to_csv(report, arc.grid, args.csv)
        return _exit_for(report.passed)

    if args.command == "report":
        report, arc = run_report(
            entry,
            shoot_config=_shoot_config(args, entry.active),
            verify_config=_verify_config(args),
            threshold=args.threshold,
            psi_a=args.psi_a,
        )
        _emit(report.model_dump(), args.out)
        if args.arc_out:
            arc.save(args.arc_out)
        if args.csv_dir:
            args.csv_dir.mkdir(parents=True, exist_ok=True)
            for conservation in report.conservation:
                report_to_csv(conservation, arc.grid, args.csv_dir / f"{entry.name}_{conservation.family}.csv")
        return _exit_for(report.passed)

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR

    setup_logging(args.log_level, args.log_format, stream=sys.stderr)
    bind_correlation_id(uuid.uuid4().hex[:12])
    try:
        return run(args)
    except InvarianceError as exc:
        logger.error("command failed", command=args.command, code=exc.code, error=exc.message)
        print(dump_json(to_error_model(exc).model_dump()), file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        logger.error("io failure", command=args.command, error=str(exc))
        print(dump_json(to_error_model(exc).model_dump()), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
