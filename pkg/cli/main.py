"""Main entry point for the command line."""

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from builders.registry import build_algebra, lie_algebra_of
from config.logging_config import get_logger, setup_logging
from config.settings import settings
from core.field import FieldSpec
from schemas.experiment import ExperimentConfig
from schemas.report import Report
from services.experiment_service import ExperimentService
from services.export_service import ExportService
from services.report_service import ReportService
from services.verification_service import VerificationService, available_checks
from storage.algebra_repository import AlgebraRepository
from storage.report_repository import ReportRepository
from utils.exceptions import (
    DimensionCapExceeded,
    ModlieError,
    ParseError,
    PreconditionError,
    UnsupportedType,
    ValidationFailure,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_CONFIGURATION_ERROR = 2

CONFIGURATION_ERRORS = (ParseError, UnsupportedType, PreconditionError, DimensionCapExceeded, ValidationError)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the build, verify and experiment commands."""
    parser = argparse.ArgumentParser(prog="modlie", description="Modular Lie algebra generation engine")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="Construct an algebra and write it as JSON")
    build.add_argument("descriptor", help="e.g. A2, psl:5, W:2:1,1, Zass:2, A1+A1")
    build.add_argument("--p", type=int, default=5)
    build.add_argument("--ext", type=int, default=1)
    build.add_argument("--cap-dim", type=int, default=None)
    build.add_argument("--out", type=Path, default=None, help="Output file; <descriptor>.json by default")

    verify = commands.add_parser("verify", help="Run assertion suites")
    verify.add_argument("suite", choices=["axioms", "lemmas", "all"])
    verify.add_argument("--algebra", default=None, help="Restrict the axioms suite to one algebra")
    verify.add_argument("--file", type=Path, default=None, help="Validate an algebra file instead")
    verify.add_argument("--check", action="append", default=None, help="Run only this check (repeatable)")
    verify.add_argument("--list", action="store_true", help="List the checks and exit")
    verify.add_argument("--p", type=int, default=5)
    verify.add_argument("--trials", type=int, default=None)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", type=Path, default=None)
    verify.add_argument("--xlsx", type=Path, default=None, help="Also export the report to Excel")

    for name in ("experiment", "gen"):
        experiment = commands.add_parser(name, help="Run a generation experiment")
        experiment.add_argument("--algebra", required=True)
        experiment.add_argument("--experiment", required=True)
        experiment.add_argument("--p", type=int, default=5)
        experiment.add_argument("--ext", type=int, default=1)
        experiment.add_argument("--trials", type=int, default=100)
        experiment.add_argument("--seed", type=int, default=0)
        experiment.add_argument("--strategy", default="recipe")
        experiment.add_argument("--budget-pairs", type=int, default=None)
        experiment.add_argument("--cap-dim", type=int, default=None)
        experiment.add_argument("--out", type=Path, default=None)
        experiment.add_argument("--xlsx", type=Path, default=None, help="Also export the report to Excel")
    return parser


def emit_report(report: Report, out: Optional[Path], xlsx: Optional[Path] = None) -> None:
    """Append the report to ``out`` or print it to stdout."""
    if out is not None:
        ReportRepository(out).append(report)
    else:
        print(json.dumps(report.model_dump(mode="json", by_alias=True), sort_keys=True, indent=1))
    if xlsx is not None:
        xlsx.write_bytes(ExportService().export_report_to_excel(report).getvalue())


def cmd_build(args: argparse.Namespace) -> int:
    """Construct, validate and write an algebra."""
    spec = FieldSpec.create(args.p, args.ext)
    L = lie_algebra_of(build_algebra(args.descriptor, spec, cap=args.cap_dim))
    repository = AlgebraRepository(".")
    path = repository.save(L, args.out)
    print(f"{L.name}: dim {L.dim} over {spec.label} -> {path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Run a suite and report every assertion."""
    if args.list:
        print("\n".join(available_checks()))
        return EXIT_OK
    reports = ReportService(f"verify:{args.suite}", algebra=args.algebra, field=f"F{args.p}")
    reports.set_parameters(seed=args.seed, trials=args.trials, checks=args.check)
    if args.file is not None:
        _, validation = AlgebraRepository().load(args.file)
        reports.add_checks(validation.checks, prefix=f"{validation.algebra}:")
    else:
        service = VerificationService(seed=args.seed, trials=args.trials, p=args.p, algebra=args.algebra)
        for record in service.run(args.suite, args.check):
            reports.report.assertions.append(record)
    report = reports.finalize()
    emit_report(report, args.out, args.xlsx)
    return EXIT_OK if report.passed else EXIT_ASSERTION_FAILED


def cmd_experiment(args: argparse.Namespace) -> int:
    """Run one configured experiment."""
    values = {
        "algebra": args.algebra,
        "p": args.p,
        "ext": args.ext,
        "experiment": args.experiment,
        "trials": args.trials,
        "seed": args.seed,
        "out": args.out,
        "strategy": args.strategy,
    }
    if args.budget_pairs is not None:
        values["budget_pairs"] = args.budget_pairs
    if args.cap_dim is not None:
        values["cap_dim"] = args.cap_dim
    config = ExperimentConfig(**values)
    report = ExperimentService(config).run()
    emit_report(report, config.out, args.xlsx)
    return EXIT_OK if report.passed else EXIT_ASSERTION_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or settings.log_level)
    handlers = {"build": cmd_build, "verify": cmd_verify, "experiment": cmd_experiment, "gen": cmd_experiment}
    try:
        return handlers[args.command](args)
    except CONFIGURATION_ERRORS as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIGURATION_ERROR
    except ValidationFailure as e:
        logger.error(f"Validation failed: {e}")
        return EXIT_ASSERTION_FAILED
    except ModlieError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_ASSERTION_FAILED


if __name__ == "__main__":
    sys.exit(main())
