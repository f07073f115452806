"""Metric commands: evaluate, decompose, table1."""

import argparse
from pathlib import Path

from pydantic import TypeAdapter

from ..core.config import Settings, load_config_file
from ..core.exceptions import UsageError
from ..core.seeding import derive_seed
from ..schemas.simscore import ScoreModelSpec
from ..services.bias_service import bias_report
from ..services.io_service import load_dataset
from ..services.pinning_service import build_pinned_set, decompose
from ..services.simscore_service import column_a_model, table1_scenarios
from .common import (
    add_common_arguments,
    add_output_arguments,
    add_policy_arguments,
    emit_report,
    policy_from_args,
    require_path,
    resolve_seed,
)


def run_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_dataset(require_path(args.input, "--in"), args.in_format)
    policy = policy_from_args(args, settings)
    subgroups = args.subgroup or dataset.subgroups
    emit_report(bias_report(dataset, subgroups, policy), args)
    return 0


def run_decompose(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_dataset(require_path(args.input, "--in"), args.in_format)
    policy = policy_from_args(args, settings)
    reports = []
    for tag in args.subgroup or dataset.subgroups:
        # Same per-subgroup seed as evaluate, so both commands pin identical sets
        tag_policy = policy.with_seed(derive_seed(policy.seed, "pin", tag))
        reports.append(decompose(build_pinned_set(dataset, tag, tag_policy)))
    emit_report(reports, args)
    return 0


def run_table1(args: argparse.Namespace, settings: Settings) -> int:
    seed = resolve_seed(args, settings)
    if args.config is not None:
        model = load_config_file(args.config, TypeAdapter(ScoreModelSpec))
    else:
        model = column_a_model(args.subgroup, seed)
    if args.base_count < 2:
        raise UsageError("--base-count must be at least 2")
    empirical_seed = seed if args.empirical else None
    emit_report(table1_scenarios(model, args.base_count, empirical_seed), args)
    return 0


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="input", type=Path, required=True, help="Scored dataset (csv or jsonl)")
    parser.add_argument("--in-format", choices=("csv", "jsonl"), help="Input format; inferred from the suffix")
    parser.add_argument(
        "--subgroup",
        action="append",
        help="Subgroup to report (repeatable); every tag in the dataset when omitted",
    )


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    evaluate = subparsers.add_parser("evaluate", help="Subgroup, BPSN, BNSP and pinned AUC per subgroup")
    _add_input(evaluate)
    add_common_arguments(evaluate, "Sample policy (.toml or .json); flags override it")
    add_policy_arguments(evaluate)
    add_output_arguments(evaluate, ("csv", "json"))
    evaluate.set_defaults(handler=run_evaluate)

    decompose_parser = subparsers.add_parser("decompose", help="Four-term decomposition of the pinned AUC")
    _add_input(decompose_parser)
    add_common_arguments(decompose_parser, "Sample policy (.toml or .json); flags override it")
    add_policy_arguments(decompose_parser)
    add_output_arguments(decompose_parser, ("csv", "json"))
    decompose_parser.set_defaults(handler=run_decompose)

    table1 = subparsers.add_parser("table1", help="Analytic pinned AUC under three subgroup class balances")
    add_common_arguments(table1, "Simulated model spec; the column-A model when omitted")
    add_output_arguments(table1, ("csv", "json"))
    table1.add_argument("--subgroup", default="identity", help="Subgroup name used by the default model")
    table1.add_argument("--base-count", type=int, default=1000, help="Examples per cell in the balanced scenario")
    table1.add_argument("--empirical", action="store_true", help="Add the pinned AUC of one simulated draw")
    table1.set_defaults(handler=run_table1)
