"""Experiment commands: skew-experiment, compare."""

import argparse
from collections.abc import Callable
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..core.config import Settings, load_config_file
from ..core.exceptions import UsageError
from ..core.seeding import derive_seed
from ..schemas.datagen import SkewSpec, coerce_label
from ..schemas.experiment import DatasetSource, ExperimentConfig, ModelRef
from ..services.experiment_service import compare_models, run_skew_experiment
from ..services.simscore_service import column_a_model, mitigated_model
from .common import add_common_arguments, add_output_arguments, emit_report, resolve_seed

DefaultModels = Callable[[str, int], list[ModelRef]]


def _single_model(term: str, seed: int) -> list[ModelRef]:
    return [column_a_model(term, seed, name="biased")]


def _model_pair(term: str, seed: int) -> list[ModelRef]:
    # One scoring seed for both, so the models share every background score
    return [column_a_model(term, seed, name="biased"), mitigated_model(term, seed, name="mitigated")]


def _skew(args: argparse.Namespace, base: SkewSpec | None) -> SkewSpec | None:
    if args.term is None and args.fraction is None and args.target_label is None:
        return base
    term = args.term or (base.term if base else None)
    if term is None:
        raise UsageError("--term is required")
    return SkewSpec(
        term=term,
        target_label=coerce_label(args.target_label) if args.target_label else (base.target_label if base else 0),
        removal_fraction=args.fraction if args.fraction is not None else (base.removal_fraction if base else 0.5),
    )


def build_config(args: argparse.Namespace, settings: Settings, default_models: DefaultModels) -> ExperimentConfig:
    """Experiment config from ``--config`` (if any) with command-line flags on top."""
    base = load_config_file(args.config, ExperimentConfig) if args.config is not None else None
    if base is None and args.term is None:
        raise UsageError("--term is required without --config")

    master_seed = resolve_seed(args, settings) if args.seed is not None or base is None else base.master_seed
    try:
        skew = _skew(args, base.skew if base else None)
        fields: dict[str, Any] = {
            "dataset": base.dataset if base else DatasetSource(),
            "models": base.models if base else default_models(args.term, derive_seed(master_seed, "score")),
            "skew": skew,
            "trials": args.trials if args.trials is not None else (base.trials if base else 100),
            "subgroups": args.subgroup or (base.subgroups if base else []),
            "master_seed": master_seed,
        }
        if base is not None:
            fields["policy"] = base.policy
            fields["compare"] = base.compare
        if args.input is not None:
            fields["dataset"] = DatasetSource(kind="file", path=args.input)
        elif args.templates is not None:
            fields["dataset"] = DatasetSource(kind="generated", templates=args.templates)

        compare = dict(fields["compare"].model_dump()) if "compare" in fields else {}
        for flag, key in (("min_pinned_delta", "min_pinned_delta"), ("top_k", "top_k"), ("threshold", "improvement_threshold")):
            value = getattr(args, flag, None)
            if value is not None:
                compare[key] = value
        fields["compare"] = compare
        return ExperimentConfig.model_validate(fields)
    except ValidationError as e:
        raise UsageError(f"Invalid experiment settings: {e.errors()[0]['msg']}") from e


def _workers(args: argparse.Namespace, settings: Settings) -> int:
    workers = args.workers if args.workers is not None else settings.max_workers
    if workers < 1:
        raise UsageError("--workers must be at least 1")
    return int(workers)


def _api_key(settings: Settings) -> str | None:
    return settings.scorer_api_key.get_secret_value() if settings.scorer_api_key is not None else None


def run_skew(args: argparse.Namespace, settings: Settings) -> int:
    config = build_config(args, settings, _single_model)
    if config.skew is None:
        raise UsageError("skew-experiment needs a skew (--term/--fraction or [skew] in --config)")
    summary = run_skew_experiment(config, max_workers=_workers(args, settings), api_key=_api_key(settings))
    emit_report(summary, args)
    return 0


def run_compare(args: argparse.Namespace, settings: Settings) -> int:
    config = build_config(args, settings, _model_pair)
    table = compare_models(config, max_workers=_workers(args, settings), api_key=_api_key(settings))
    emit_report(table, args)
    return 0


def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser, "Experiment config (.toml or .json); flags override it")
    add_output_arguments(parser, ("csv", "json"))
    parser.add_argument("--term", help="Identity term to skew; also the default models' subgroup")
    parser.add_argument("--fraction", type=float, help="Share of the term's target-label examples removed per trial")
    parser.add_argument("--target-label", choices=("negative", "positive"), help="Class thinned out (default negative)")
    parser.add_argument("--trials", type=int, help="Number of trials (default 100)")
    parser.add_argument("--subgroup", action="append", help="Subgroup to report (repeatable); every tag when omitted")
    parser.add_argument("--in", dest="input", type=Path, help="Dataset file instead of the generated set")
    parser.add_argument("--templates", type=Path, help="Template spec for the generated set")
    parser.add_argument("--workers", type=int, help="Trial threads; PINNED_AUC_MAX_WORKERS when omitted")


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    skew = subparsers.add_parser("skew-experiment", help="Repeated skew-and-measure trials")
    _add_experiment_arguments(skew)
    skew.set_defaults(handler=run_skew)

    compare = subparsers.add_parser("compare", help="Two models side by side, baseline and skewed")
    _add_experiment_arguments(compare)
    compare.add_argument("--min-pinned-delta", type=float, help="Keep subgroups whose baseline pinned AUCs differ by more")
    compare.add_argument("--top-k", type=int, help="Keep the subgroups with the largest baseline pinned AUC differences")
    compare.add_argument("--threshold", type=float, help="Margin model B must win by to be flagged improved")
    compare.set_defaults(handler=run_compare)
