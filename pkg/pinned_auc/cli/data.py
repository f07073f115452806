"""Dataset commands: generate, stats, score."""

import argparse
import sys
from pathlib import Path

from pydantic import TypeAdapter, ValidationError

from ..core.config import Settings, load_config_file
from ..core.exceptions import UsageError
from ..models.dataset import Dataset
from ..schemas.experiment import ModelRef
from ..schemas.remote import RemoteModelRef
from ..schemas.simscore import ScoreModelSpec
from ..services.datagen_service import dataset_stats, generate_synthetic, load_template_spec
from ..services.experiment_service import score_with
from ..services.io_service import DatasetFormat, load_dataset, render_dataset, write_dataset
from ..services.simscore_service import column_a_model, mitigated_model
from .common import (
    add_common_arguments,
    add_output_arguments,
    emit_report,
    output_format,
    require_path,
    resolve_seed,
)


MODEL_PRESETS = {"column-a": column_a_model, "mitigated": mitigated_model}


def _emit_dataset(dataset: Dataset, args: argparse.Namespace) -> None:
    fmt = output_format(args)
    if fmt not in ("csv", "jsonl"):
        raise UsageError(f"Datasets are written as csv or jsonl, not '{fmt}'")
    dataset_format: DatasetFormat = "jsonl" if fmt == "jsonl" else "csv"
    if args.out is not None:
        write_dataset(dataset, args.out, dataset_format)
    else:
        sys.stdout.write(render_dataset(dataset, dataset_format))


def _input(args: argparse.Namespace) -> Dataset:
    path: Path = require_path(args.input, "--in")
    return load_dataset(path, args.in_format)


def run_generate(args: argparse.Namespace, settings: Settings) -> int:
    spec = load_template_spec(args.config)
    update: dict[str, object] = {}
    if args.seed is not None:
        update["seed"] = resolve_seed(args, settings)
    if args.per_term is not None:
        update["per_term_target"] = args.per_term
    if args.terms:
        update["identity_terms"] = args.terms
    if update:
        try:
            spec = type(spec).model_validate({**spec.model_dump(), **update})
        except ValidationError as e:
            raise UsageError(f"Invalid generation settings: {e.errors()[0]['msg']}") from e
    _emit_dataset(generate_synthetic(spec), args)
    return 0


def run_stats(args: argparse.Namespace, settings: Settings) -> int:
    emit_report(dataset_stats(_input(args)), args)
    return 0


def _model_from_args(args: argparse.Namespace, settings: Settings) -> ModelRef:
    seed = resolve_seed(args, settings)
    if args.config is not None:
        model: ModelRef = load_config_file(args.config, TypeAdapter(ModelRef))
        if args.seed is not None and isinstance(model, ScoreModelSpec):
            model = model.model_copy(update={"seed": seed})
        return model
    if args.subgroup is None:
        raise UsageError("score needs --config or --subgroup")
    return MODEL_PRESETS[args.model](args.subgroup, seed)


def run_score(args: argparse.Namespace, settings: Settings) -> int:
    dataset = _input(args)
    model = _model_from_args(args, settings)
    api_key = None
    if isinstance(model, RemoteModelRef) and settings.scorer_api_key is not None:
        api_key = settings.scorer_api_key.get_secret_value()
    _emit_dataset(score_with(dataset, model, api_key), args)
    return 0


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="input", type=Path, required=True, help="Dataset file (csv or jsonl)")
    parser.add_argument("--in-format", choices=("csv", "jsonl"), help="Input format; inferred from the suffix")


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    generate = subparsers.add_parser("generate", help="Generate a synthetic template dataset")
    add_common_arguments(generate, "Template spec (.toml or .json); the shipped corpus when omitted")
    add_output_arguments(generate, ("csv", "jsonl"))
    generate.add_argument("--per-term", type=int, help="Examples per term, split evenly between labels")
    generate.add_argument("--terms", nargs="+", help="Identity terms replacing the template file's list")
    generate.set_defaults(handler=run_generate)

    stats = subparsers.add_parser("stats", help="Per-term class counts of a dataset")
    _add_input(stats)
    add_output_arguments(stats, ("csv", "json"))
    stats.set_defaults(handler=run_stats)

    score = subparsers.add_parser("score", help="Score a dataset with a simulated or remote model")
    _add_input(score)
    add_common_arguments(score, "Model spec (.toml or .json), simulated or remote")
    add_output_arguments(score, ("csv", "jsonl"))
    score.add_argument("--subgroup", help="Subgroup scored by the preset model's subgroup cells")
    score.add_argument("--model", choices=sorted(MODEL_PRESETS), default="column-a", help="Preset simulated model")
    score.set_defaults(handler=run_score)
