"""Test configuration and fixtures."""

import pytest

from pinned_auc.core.config import Settings, get_settings
from pinned_auc.core.observability import setup_structured_logging
from pinned_auc.schemas.datagen import TemplatePattern, TemplateSpec
from pinned_auc.schemas.metrics import SamplePolicy
from pinned_auc.schemas.simscore import ScoreModelSpec
from pinned_auc.services.simscore_service import column_a_model

from .helpers import make_dataset


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Log warnings and above to whatever stderr the test sees."""
    setup_structured_logging(Settings(_env_file=None, log_level="WARNING"))
    yield


@pytest.fixture
def clean_settings(monkeypatch):
    """Settings read fresh from a scrubbed environment."""
    for name in ("ENVIRONMENT", "LOG_LEVEL", "LOG_JSON", "SCORER_API_KEY", "MAX_WORKERS", "DEFAULT_SEED"):
        monkeypatch.delenv(f"PINNED_AUC_{name}", raising=False)
    monkeypatch.setenv("PINNED_AUC_LOG_LEVEL", "WARNING")
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


@pytest.fixture
def mixed_dataset():
    """
    Subgroup ``g`` holds negatives {0.2, 0.4} and positives {0.3, 0.6}; the background
    (tag ``other``) mirrors it, so every robust metric of ``g`` is 0.75.
    """
    return make_dataset([
        ("g-n1", 0.2, 0, "g"),
        ("g-n2", 0.4, 0, "g"),
        ("g-p1", 0.3, 1, "g"),
        ("g-p2", 0.6, 1, "g"),
        ("o-n1", 0.2, 0, "other"),
        ("o-n2", 0.4, 0, "other"),
        ("o-p1", 0.3, 1, "other"),
        ("o-p2", 0.6, 1, "other"),
    ])


@pytest.fixture
def inverted_dataset():
    """Subgroup negatives score above every background positive."""
    return make_dataset([
        ("g-n1", 0.8, 0, "g"),
        ("g-n2", 0.85, 0, "g"),
        ("g-p1", 0.95, 1, "g"),
        ("g-p2", 0.9, 1, "g"),
        ("b-n1", 0.1, 0, ()),
        ("b-n2", 0.2, 0, ()),
        ("b-p1", 0.6, 1, ()),
        ("b-p2", 0.7, 1, ()),
    ])


@pytest.fixture
def default_policy():
    return SamplePolicy(seed=7)


@pytest.fixture
def biased_model() -> ScoreModelSpec:
    return column_a_model("g", seed=3)


@pytest.fixture
def small_template_spec():
    """Two patterns per label, three terms."""
    return TemplateSpec(
        templates=[
            TemplatePattern(pattern="{name} is a {nice} {identity} person", label="non-toxic"),
            TemplatePattern(pattern="I am {identity}", label="non-toxic"),
            TemplatePattern(pattern="{name} is a {nasty} {identity} person", label="toxic"),
            TemplatePattern(pattern="{identity} people are {nasty}", label="toxic"),
        ],
        identity_terms=["gay", "straight", "muslim"],
        fillers={"name": ["Ana", "Bo"], "nice": ["kind", "calm"], "nasty": ["awful", "vile"]},
        seed=5,
    )
