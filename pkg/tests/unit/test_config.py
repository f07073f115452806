"""Unit tests for settings and config-file loading."""

import json

import pytest
from pydantic import TypeAdapter, ValidationError

from pinned_auc.core.config import Settings, load_config_file
from pinned_auc.core.exceptions import ConfigError
from pinned_auc.schemas.experiment import ExperimentConfig, ModelRef
from pinned_auc.schemas.metrics import SamplePolicy
from pinned_auc.schemas.remote import RemoteModelRef
from pinned_auc.schemas.simscore import ScoreModelSpec
from pinned_auc.services.simscore_service import column_a_model

from ..helpers import CONFIGS


def test_settings_defaults(clean_settings):
    """Test settings defaults without any environment."""
    settings = Settings(_env_file=None)
    assert settings.environment == "development"
    assert settings.max_workers == 4
    assert settings.default_seed == 0
    assert settings.scorer_api_key is None
    assert settings.debug
    assert not settings.render_json


def test_settings_from_environment(clean_settings, monkeypatch):
    """Test settings read the PINNED_AUC_ prefix and normalise case."""
    monkeypatch.setenv("PINNED_AUC_ENVIRONMENT", "Production")
    monkeypatch.setenv("PINNED_AUC_LOG_LEVEL", "debug")
    monkeypatch.setenv("PINNED_AUC_SCORER_API_KEY", "s3cret")
    monkeypatch.setenv("PINNED_AUC_MAX_WORKERS", "2")
    settings = clean_settings()

    assert settings.environment == "production"
    assert settings.log_level == "DEBUG"
    assert settings.render_json
    assert settings.max_workers == 2
    assert settings.scorer_api_key.get_secret_value() == "s3cret"
    assert "s3cret" not in repr(settings)


@pytest.mark.parametrize(
    "field, value",
    [("environment", "moon"), ("log_level", "LOUD"), ("max_workers", 0), ("default_seed", -1), ("default_seed", 2**64)],
)
def test_settings_validation(field, value):
    """Test invalid settings are rejected."""
    with pytest.raises(ValidationError):
        Settings(_env_file=None, **{field: value})


def test_log_json_overrides_environment():
    assert Settings(_env_file=None, environment="production", log_json=False).render_json is False


@pytest.mark.parametrize(
    "name, model",
    [
        ("policy.toml", SamplePolicy),
        ("experiment.toml", ExperimentConfig),
        ("model_column_a.toml", ScoreModelSpec),
        ("model_beta.toml", ScoreModelSpec),
    ],
)
def test_shipped_configs_load(name, model):
    """Test every shipped config validates against its schema."""
    assert isinstance(load_config_file(CONFIGS / name, model), model)


def test_model_union_dispatches_on_kind():
    """Test a model file becomes a simulated or a remote model by its kind."""
    adapter = TypeAdapter(ModelRef)
    assert isinstance(load_config_file(CONFIGS / "model_remote.toml", adapter), RemoteModelRef)
    assert isinstance(load_config_file(CONFIGS / "model_column_a.toml", adapter), ScoreModelSpec)


def test_experiment_config_contents():
    """Test the shipped experiment pairs a biased and a mitigated model on one term."""
    config = load_config_file(CONFIGS / "experiment.toml", ExperimentConfig)
    assert config.model_names == ["biased", "mitigated"]
    assert config.skew.term == "gay"
    assert config.skew.removal_fraction == 0.5
    assert config.compare.min_pinned_delta == 0.02


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config_file(CONFIGS / "missing.toml", SamplePolicy)


def test_unsupported_suffix(tmp_path):
    """Test only toml and json are config formats."""
    path = tmp_path / "policy.yaml"
    path.write_text("seed: 1\n")
    with pytest.raises(ConfigError) as exc_info:
        load_config_file(path, SamplePolicy)
    assert exc_info.value.code == "invalid-config"


def test_unparsable_toml(tmp_path):
    path = tmp_path / "policy.toml"
    path.write_text("seed = = 1\n")
    with pytest.raises(ConfigError):
        load_config_file(path, SamplePolicy)


def test_json_must_be_object(tmp_path):
    path = tmp_path / "policy.json"
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config_file(path, SamplePolicy)


def test_validation_errors_are_listed(tmp_path):
    """Test a schema violation reports each failing field."""
    path = tmp_path / "policy.json"
    path.write_text('{"seed": -1, "replacement": "sometimes"}')
    with pytest.raises(ConfigError) as exc_info:
        load_config_file(path, SamplePolicy)

    locations = {e["loc"] for e in exc_info.value.extensions["errors"]}
    assert locations == {"seed", "replacement"}


def test_duplicate_model_names_rejected(tmp_path):
    """Test an experiment cannot name two models alike."""
    model = column_a_model("gay").model_dump(mode="json")
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"models": [model, model]}))
    with pytest.raises(ConfigError):
        load_config_file(path, ExperimentConfig)
