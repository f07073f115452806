"""Dataset ingestion and report serialization (csv, jsonl, json)."""

import csv
import io
import json
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ValidationError

from ..core.exceptions import DatasetParseError, DuplicateIdError, RangeError, ReportWriteError, UsageError
from ..core.observability import get_logger
from ..models.dataset import Dataset
from ..schemas.common import Metric, MetricValue
from ..schemas.datagen import DatasetStats
from ..schemas.dataset import TAG_SEPARATOR, ScoredRecordRow
from ..schemas.experiment import ComparisonTable, TrialSummary
from ..schemas.metrics import BiasMetrics, BiasReport, DecompositionReport
from ..schemas.simscore import AnalyticScenario

logger = get_logger(__name__)

DatasetFormat = Literal["csv", "jsonl"]
ReportFormat = Literal["csv", "json"]
Report = (
    BiasReport
    | DecompositionReport
    | TrialSummary
    | ComparisonTable
    | DatasetStats
    | Sequence[DecompositionReport]
    | Sequence[AnalyticScenario]
)

DATASET_COLUMNS = ("id", "score", "label", "subgroups", "text")
NULL = "null"
TOTAL_ROW = "(all)"

# Validation error types that mean "parsed fine, but out of range"
_RANGE_ERRORS = {"greater_than_equal", "less_than_equal", "value_error"}


def infer_format(path: Path, allowed: Sequence[str]) -> str:
    suffix = path.suffix.lower().lstrip(".")
    if suffix not in allowed:
        raise UsageError(f"Cannot infer format of {path} from its suffix; use one of {list(allowed)} or pass --format")
    return suffix


# Ingestion

def _csv_records(path: Path) -> Iterator[tuple[int, dict[str, Any]]]:
    with path.open(encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DatasetParseError(str(path), 1, "missing header")
        missing = [c for c in ("id", "label") if c not in reader.fieldnames]
        if missing:
            raise DatasetParseError(str(path), 1, f"header lacks required columns {missing}")
        for record in reader:
            if None in record:
                raise DatasetParseError(str(path), reader.line_num, "more fields than header columns")
            yield reader.line_num, record


def _jsonl_records(path: Path) -> Iterator[tuple[int, dict[str, Any]]]:
    with path.open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetParseError(str(path), line_number, f"invalid JSON: {e.msg}") from e
            if not isinstance(record, dict):
                raise DatasetParseError(str(path), line_number, "expected a JSON object")
            yield line_number, record


def _row_error(path: Path, line: int, record: dict[str, Any], error: ValidationError) -> Exception:
    first = error.errors()[0]
    field = str(first["loc"][0]) if first["loc"] else ""
    if field == "label" or (field == "score" and first["type"] in _RANGE_ERRORS):
        return RangeError(str(path), line, field, record.get(field), first["msg"])
    return DatasetParseError(str(path), line, f"{field}: {first['msg']}" if field else first["msg"])


def load_dataset(path: Path, format: DatasetFormat | None = None) -> Dataset:
    """
    Read a csv or jsonl dataset; the format is taken from the suffix when not given.

    Raises:
        DatasetParseError: Unreadable file, bad header, malformed row (with line number)
        RangeError: Score outside [0, 1] or label outside {0, 1}
        DuplicateIdError: Two rows share an id
    """
    fmt = format or infer_format(path, ("csv", "jsonl"))
    records = _csv_records(path) if fmt == "csv" else _jsonl_records(path)

    ids: list[str] = []
    scores: list[float | None] = []
    labels: list[int] = []
    tags: list[frozenset[str]] = []
    texts: list[str | None] = []
    seen: set[str] = set()
    try:
        for line, record in records:
            try:
                row = ScoredRecordRow.model_validate(record)
            except ValidationError as e:
                raise _row_error(path, line, record, e) from e
            if row.id in seen:
                raise DuplicateIdError(row.id, line)
            seen.add(row.id)
            ids.append(row.id)
            scores.append(row.score)
            labels.append(row.label)
            tags.append(frozenset(row.subgroups))
            texts.append(row.text)
    except OSError as e:
        raise DatasetParseError(str(path), 0, f"cannot read file: {e.strerror}") from e
    except (UnicodeDecodeError, csv.Error) as e:
        raise DatasetParseError(str(path), 0, str(e)) from e

    dataset = Dataset.from_columns(ids, labels, tags, texts, scores)
    logger.info("Dataset loaded", path=str(path), format=fmt, examples=len(dataset))
    return dataset


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as e:
        raise ReportWriteError(str(path), e.strerror or str(e)) from e


def render_dataset(dataset: Dataset, format: DatasetFormat) -> str:
    """Serialize a dataset; scores are written with ``repr`` so they load back bit-identical."""
    if format == "jsonl":
        lines = []
        for example in dataset:
            record = ScoredRecordRow.from_example(example).model_dump()
            lines.append(json.dumps(record, ensure_ascii=False) + "\n")
        return "".join(lines)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(DATASET_COLUMNS)
    for example in dataset:
        row = ScoredRecordRow.from_example(example)
        writer.writerow([
            row.id,
            "" if row.score is None else repr(row.score),
            row.label,
            TAG_SEPARATOR.join(row.subgroups),
            row.text or "",
        ])
    return buffer.getvalue()


def write_dataset(dataset: Dataset, path: Path, format: DatasetFormat | None = None) -> None:
    """
    Write a dataset that ``load_dataset`` reads back unchanged.

    Raises:
        ReportWriteError: If the file cannot be written
    """
    fmt = format or infer_format(path, ("csv", "jsonl"))
    _write_text(path, render_dataset(dataset, fmt))  # type: ignore[arg-type]
    logger.info("Dataset written", path=str(path), format=fmt, examples=len(dataset))


# Reports

def _cell(value: Any) -> str:
    if value is None:
        return NULL
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _bias_rows(report: BiasReport) -> tuple[list[str], list[list[Any]]]:
    metrics = [m.value for m in Metric]
    header = ["subgroup", *metrics, "subgroup_negative", "subgroup_positive",
              "background_negative", "background_positive", *(f"{m}_reason" for m in metrics)]

    def row(r: BiasMetrics) -> list[Any]:
        values: list[MetricValue] = [r.metric(m) for m in Metric]
        c = r.counts
        return [
            r.subgroup,
            *(v.value for v in values),
            c.subgroup_negative,
            c.subgroup_positive,
            c.background_negative,
            c.background_positive,
            *(v.reason for v in values),
        ]

    return header, [row(r) for r in report.rows]


def _decomposition_rows(reports: Sequence[DecompositionReport]) -> tuple[list[str], list[list[Any]]]:
    header = ["subgroup", "pair_label", "pair_count", "weight", "auc", "mwu", "auc_reason"]
    rows: list[list[Any]] = []
    for report in reports:
        for term in report.terms:
            reason = None if term.auc is not None else "zero-pairs"
            rows.append([report.subgroup, term.pair_label.value, term.pair_count, term.weight, term.auc, term.mwu, reason])
        total_u = sum(t.mwu_half_units for t in report.terms) / 2
        weights = sum(t.weight for t in report.terms)
        rows.append([report.subgroup, "weighted-sum", report.total_pair_count, weights,
                     report.reconstructed_pinned_auc, total_u, None])
        rows.append([report.subgroup, "pinned", report.total_pair_count, 1.0,
                     report.direct_pinned_auc, total_u, None])
    return header, rows


def _summary_rows(summary: TrialSummary) -> tuple[list[str], list[list[Any]]]:
    header = ["subgroup", "model", "metric", "mean", "stddev", "stderr", "count",
              "baseline", "baseline_stderr", "delta", "mean_reason", "baseline_reason"]
    rows = [
        [c.subgroup, c.model, c.metric.value, c.mean, c.stddev, c.stderr, c.count,
         c.baseline, c.baseline_stderr, c.delta, c.reason, c.baseline_reason]
        for c in summary.cells
    ]
    return header, rows


def _comparison_rows(table: ComparisonTable) -> tuple[list[str], list[list[Any]]]:
    header = ["subgroup", "metric", "model_a", "model_b", "improved", "model_a_reason", "model_b_reason"]
    rows = [
        [r.subgroup, r.metric, r.model_a, r.model_b, r.improved, r.model_a_reason, r.model_b_reason]
        for r in table.rows
    ]
    return header, rows


def _stats_rows(stats: DatasetStats) -> tuple[list[str], list[list[Any]]]:
    header = ["term", "negative", "positive", "total", "positive_share"]
    rows: list[list[Any]] = [[r.term, r.negative, r.positive, r.total, r.positive_share] for r in stats.rows]
    rows.append([TOTAL_ROW, stats.total_negative, stats.total_positive, stats.total, stats.positive_share])
    return header, rows


def _scenario_rows(scenarios: Sequence[AnalyticScenario]) -> tuple[list[str], list[list[Any]]]:
    header = ["scenario", "description", "pair_label", "pair_count", "weight", "auc"]
    rows: list[list[Any]] = []
    for s in scenarios:
        for t in s.terms:
            rows.append([s.name, s.description, t.pair_label.value, t.pair_count, t.weight, t.auc])
        rows.append([s.name, s.description, "pinned", s.counts.total_pairs, 1.0, s.pinned_auc])
        if s.empirical_pinned_auc is not None:
            rows.append([s.name, s.description, "empirical", s.counts.total_pairs, 1.0, s.empirical_pinned_auc])
    return header, rows


def _tabulate(report: Report) -> tuple[list[str], list[list[Any]]]:
    if isinstance(report, BiasReport):
        return _bias_rows(report)
    if isinstance(report, DecompositionReport):
        return _decomposition_rows([report])
    if isinstance(report, TrialSummary):
        return _summary_rows(report)
    if isinstance(report, ComparisonTable):
        return _comparison_rows(report)
    if isinstance(report, DatasetStats):
        return _stats_rows(report)
    items = list(report)
    if all(isinstance(r, DecompositionReport) for r in items):
        return _decomposition_rows(items)  # type: ignore[arg-type]
    if all(isinstance(r, AnalyticScenario) for r in items):
        return _scenario_rows(items)  # type: ignore[arg-type]
    raise TypeError(f"unsupported report type {type(report).__name__}")


def _jsonable(report: Report) -> Any:
    if isinstance(report, BaseModel):
        return report.model_dump(mode="json")
    return [item.model_dump(mode="json") for item in report]


def render_report(report: Report, format: ReportFormat) -> str:
    """
    Serialize a report.

    Field order is fixed by the schema, so the same report always renders to the same
    bytes. csv floats have six decimals and absent values are ``null`` with the reason
    in a ``*_reason`` column.
    """
    if format == "json":
        return json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n"

    header, rows = _tabulate(report)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(v) for v in row] for row in rows)
    return buffer.getvalue()


def write_report(report: Report, path: Path, format: ReportFormat | None = None) -> None:
    """
    Write a report as csv or json; the format is taken from the suffix when not given.

    Raises:
        ReportWriteError: If the file cannot be written
    """
    fmt = format or infer_format(path, ("csv", "json"))
    _write_text(path, render_report(report, fmt))  # type: ignore[arg-type]
    logger.info("Report written", path=str(path), format=fmt, kind=type(report).__name__)
