"""Shared argument handling and output for the command-line interface."""

import argparse
import sys
from pathlib import Path
from typing import NoReturn

from ..core.config import Settings, load_config_file
from ..core.exceptions import UsageError
from ..core.seeding import MAX_SEED
from ..schemas.metrics import SamplePolicy
from ..services.io_service import Report, ReportFormat, render_report, write_report


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports misuse as ``UsageError`` (exit 1) instead of exiting 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def add_output_arguments(parser: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    parser.add_argument("--out", type=Path, help="Output file; standard output when omitted")
    parser.add_argument("--format", choices=formats, help="Output format; inferred from --out, else csv")


def add_common_arguments(parser: argparse.ArgumentParser, config_help: str) -> None:
    parser.add_argument("--seed", type=int, help="Seed; PINNED_AUC_DEFAULT_SEED when omitted")
    parser.add_argument("--config", type=Path, help=config_help)


def add_policy_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pinned-set sampling")
    group.add_argument(
        "--sample-size",
        type=int,
        help="Subgroup examples per pinned set; every subgroup example when omitted",
    )
    group.add_argument("--replacement", action="store_true", help="Sample with replacement")
    group.add_argument(
        "--disjoint-background",
        action="store_true",
        help="Draw the background sample from examples outside the subgroup only",
    )


def policy_from_args(args: argparse.Namespace, settings: Settings) -> SamplePolicy:
    """Sample policy from ``--config`` (if any) with command-line flags on top."""
    policy = load_config_file(args.config, SamplePolicy) if args.config is not None else SamplePolicy()
    update: dict[str, object] = {}
    if args.seed is not None or args.config is None:
        update["seed"] = resolve_seed(args, settings)
    if args.sample_size is not None:
        if args.sample_size < 1:
            raise UsageError("--sample-size must be positive")
        update["subgroup_sample_size"] = args.sample_size
    if args.replacement:
        update["replacement"] = True
    if args.disjoint_background:
        update["background_excludes_subgroup"] = True
    return policy.model_copy(update=update)


def resolve_seed(args: argparse.Namespace, settings: Settings) -> int:
    seed = args.seed if args.seed is not None else settings.default_seed
    if not 0 <= seed <= MAX_SEED:
        raise UsageError("--seed must be between 0 and 2**64 - 1")
    return int(seed)


def require_path(path: Path | None, flag: str) -> Path:
    if path is None:
        raise UsageError(f"{flag} is required")
    return path


def output_format(args: argparse.Namespace, default: str = "csv") -> str:
    if args.format:
        return str(args.format)
    if args.out is not None and args.out.suffix:
        return args.out.suffix.lower().lstrip(".")
    return default


def emit_report(report: Report, args: argparse.Namespace) -> None:
    """Write ``report`` to ``--out`` or print it to standard output."""
    fmt = output_format(args)
    if fmt not in ("csv", "json"):
        raise UsageError(f"Reports are written as csv or json, not '{fmt}'")
    report_format: ReportFormat = "json" if fmt == "json" else "csv"
    if args.out is not None:
        write_report(report, args.out, report_format)
    else:
        sys.stdout.write(render_report(report, report_format))
