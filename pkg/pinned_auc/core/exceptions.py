"""Error hierarchy shaped after RFC 9457 Problem Details."""

import json
from typing import Any

DATA_ERROR_EXIT = 2
USAGE_ERROR_EXIT = 1


class PinnedAucError(Exception):
    """
    Base exception carrying a problem-details payload.

    ``code`` is the machine-readable reason; it doubles as the reason attached to an
    absent metric, so degenerate measurements and hard failures share one vocabulary.
    """

    exit_code: int = DATA_ERROR_EXIT

    def __init__(
        self,
        title: str,
        code: str,
        detail: str | None = None,
        retryable: bool = False,
        extensions: dict[str, Any] | None = None,
    ):
        """
        Initialize the error.

        Args:
            title: Short, human-readable summary of the problem type
            code: Kebab-case machine-readable code
            detail: Explanation specific to this occurrence
            retryable: Whether repeating the operation may succeed
            extensions: Additional problem-specific members
        """
        self.title = title
        self.code = code
        self.detail = detail
        self.retryable = retryable
        self.type_uri = f"urn:pinned-auc:problem:{code}"
        self.extensions = extensions or {}

        self.problem_details: dict[str, Any] = {
            "type": self.type_uri,
            "title": self.title,
            "code": self.code,
        }
        if self.detail:
            self.problem_details["detail"] = self.detail
        if self.retryable:
            self.problem_details["retryable"] = True
        self.problem_details.update(self.extensions)

        super().__init__(detail or title)

    def to_json(self) -> str:
        """Render the problem details as one JSON line."""
        return json.dumps(self.problem_details, sort_keys=True, default=str)


class UsageError(PinnedAucError):
    """Command-line misuse."""

    exit_code = USAGE_ERROR_EXIT

    def __init__(self, detail: str):
        super().__init__(title="Usage Error", code="usage-error", detail=detail)


class ConfigError(PinnedAucError):
    """Config file missing, unparsable or invalid."""

    def __init__(self, path: str, detail: str, errors: list[dict[str, str]] | None = None):
        extensions: dict[str, Any] = {"path": path}
        if errors:
            extensions["errors"] = errors
        super().__init__(title="Invalid Configuration", code="invalid-config", detail=detail, extensions=extensions)


# Metric errors

class EmptySideError(PinnedAucError):
    """One side of a pairwise comparison is empty, so the AUC is undefined."""

    def __init__(self, side: str, context: str | None = None):
        if side not in ("negative", "positive"):
            raise ValueError(f"side must be 'negative' or 'positive', got {side!r}")
        detail = f"No {side} examples"
        if context:
            detail += f" in {context}"
        super().__init__(
            title="Undefined AUC",
            code=f"empty-{side}-side",
            detail=detail,
            extensions={"side": side},
        )
        self.side = side


class UnknownSubgroupError(PinnedAucError):
    """The subgroup tag does not occur in the dataset."""

    def __init__(self, subgroup: str):
        super().__init__(
            title="Unknown Subgroup",
            code="unknown-subgroup",
            detail=f"Subgroup '{subgroup}' has no examples in the dataset",
            extensions={"subgroup": subgroup},
        )
        self.subgroup = subgroup


class UnsatisfiablePolicyError(PinnedAucError):
    """A sample size exceeds its pool while sampling without replacement."""

    def __init__(self, pool: str, requested: int, available: int):
        super().__init__(
            title="Unsatisfiable Sample Policy",
            code="unsatisfiable-policy",
            detail=f"Requested {requested} {pool} examples without replacement but only {available} are available",
            extensions={"pool": pool, "requested": requested, "available": available},
        )


class UnscoredDatasetError(PinnedAucError):
    """A metric was requested on examples that carry no score."""

    def __init__(self, unscored: int):
        super().__init__(
            title="Unscored Dataset",
            code="unscored-dataset",
            detail=f"{unscored} examples have no score; run a scorer first",
            extensions={"unscored": unscored},
        )


class ZeroPairsError(PinnedAucError):
    """The cell counts produce no negative/positive pairs."""

    def __init__(self) -> None:
        super().__init__(
            title="No Pairs",
            code="zero-pairs",
            detail="Cell counts contain no negative/positive pair (N = 0)",
        )


class UnsupportedFamilyError(PinnedAucError):
    """No closed form exists and numeric integration is disabled."""

    def __init__(self, neg_family: str, pos_family: str):
        super().__init__(
            title="Unsupported Distribution Family",
            code="unsupported-family",
            detail=f"No closed form for ({neg_family}, {pos_family}) and numeric integration is disabled",
            extensions={"families": [neg_family, pos_family]},
        )


# Data generation errors

class InvalidTemplateError(PinnedAucError):
    """A template spec cannot be expanded (identity slots, fillers or labels)."""

    def __init__(self, detail: str, pattern: str | None = None):
        extensions: dict[str, Any] = {}
        if pattern is not None:
            extensions["pattern"] = pattern
        super().__init__(title="Invalid Template", code="invalid-template", detail=detail, extensions=extensions)


class UnknownTermError(PinnedAucError):
    """The skew term does not occur in the dataset."""

    def __init__(self, term: str):
        super().__init__(
            title="Unknown Term",
            code="unknown-term",
            detail=f"Term '{term}' does not occur in the dataset",
            extensions={"term": term},
        )


# Ingestion and output errors

class DatasetParseError(PinnedAucError):
    """A dataset file could not be parsed."""

    def __init__(self, path: str, line: int, detail: str):
        super().__init__(
            title="Dataset Parse Error",
            code="parse-error",
            detail=f"{path}:{line}: {detail}",
            extensions={"path": path, "line": line},
        )
        self.line = line


class RangeError(PinnedAucError):
    """A parsed field lies outside its allowed range."""

    def __init__(self, path: str, line: int, field: str, value: Any, detail: str):
        super().__init__(
            title="Value Out Of Range",
            code="range-error",
            detail=f"{path}:{line}: {field}={value!r} {detail}",
            extensions={"path": path, "line": line, "field": field},
        )
        self.line = line
        self.field = field


class DuplicateIdError(PinnedAucError):
    """Two examples share an id."""

    def __init__(self, example_id: str, line: int | None = None):
        extensions: dict[str, Any] = {"id": example_id}
        detail = f"Duplicate example id '{example_id}'"
        if line is not None:
            extensions["line"] = line
            detail += f" on line {line}"
        super().__init__(title="Duplicate Id", code="duplicate-id", detail=detail, extensions=extensions)


class ReportWriteError(PinnedAucError):
    """A report or dataset could not be written."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            title="Write Failed",
            code="io-error",
            detail=f"Cannot write {path}: {reason}",
            extensions={"path": path},
        )


# Remote scoring errors

class RemoteScorerError(PinnedAucError):
    """Base for failures talking to the remote scoring endpoint."""


class RemoteAuthError(RemoteScorerError):
    """The endpoint rejected the credential, or no credential is configured."""

    def __init__(self, detail: str = "The scoring endpoint rejected the credential", status: int | None = None):
        extensions: dict[str, Any] = {}
        if status is not None:
            extensions["status"] = status
        super().__init__(title="Authentication Failed", code="auth-error", detail=detail, extensions=extensions)


class RateLimitError(RemoteScorerError):
    """The endpoint asked us to slow down."""

    def __init__(self, retry_after: float | None = None):
        extensions: dict[str, Any] = {}
        if retry_after is not None:
            extensions["retry_after_seconds"] = retry_after
        super().__init__(
            title="Rate Limit Exceeded",
            code="rate-limit",
            detail="The scoring endpoint rate-limited the request",
            retryable=True,
            extensions=extensions,
        )
        self.retry_after = retry_after


class MalformedResponseError(RemoteScorerError):
    """The endpoint answered with something that is not a valid score list."""

    def __init__(self, detail: str):
        super().__init__(title="Malformed Response", code="malformed-response", detail=detail)
