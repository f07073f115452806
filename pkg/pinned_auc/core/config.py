"""Configuration settings and config-file loading."""

import json
import tomllib
from functools import lru_cache
from pathlib import Path
from typing import Any, TypeVar

from pydantic import Field, SecretStr, TypeAdapter, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigError
from .seeding import MAX_SEED

ModelT = TypeVar("ModelT")


class Settings(BaseSettings):
    """Process-wide settings read from the environment (prefix ``PINNED_AUC_``)."""

    model_config = SettingsConfigDict(
        env_prefix="PINNED_AUC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Environment settings
    environment: str = Field(
        default="development",
        description="Runtime environment; development selects the console log renderer",
    )

    # Logging settings
    log_level: str = Field(default="INFO", description="Log level")
    log_json: bool | None = Field(
        default=None,
        description="Force JSON (true) or console (false) log rendering",
    )

    # Remote scorer credential; there is deliberately no command-line flag for it
    scorer_api_key: SecretStr | None = Field(
        default=None,
        description="Bearer credential for the remote scoring endpoint",
    )

    # Experiment settings
    max_workers: int = Field(default=4, ge=1, description="Trial pool size")
    default_seed: int = Field(default=0, ge=0, le=MAX_SEED, description="Seed used when a command gets no --seed")

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Validate environment value."""
        valid_environments = ["development", "staging", "production"]
        if v.lower() not in valid_environments:
            raise ValueError(f"Environment must be one of: {valid_environments}")
        return v.lower()

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level value."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @property
    def debug(self) -> bool:
        """Return True if in development mode."""
        return self.environment == "development"

    @property
    def render_json(self) -> bool:
        """Whether log events are rendered as JSON lines."""
        if self.log_json is not None:
            return self.log_json
        return not self.debug


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the cached settings instance."""
    return Settings()


def read_config_mapping(path: Path) -> dict[str, Any]:
    """Read a ``.toml`` or ``.json`` config file into a plain mapping."""
    suffix = path.suffix.lower()
    try:
        if suffix == ".toml":
            with path.open("rb") as fh:
                return tomllib.load(fh)
        if suffix == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(data, dict):
                raise ConfigError(path=str(path), detail=f"{path} must contain a JSON object")
            return data
    except OSError as e:
        raise ConfigError(path=str(path), detail=f"Cannot read {path}: {e.strerror}") from e
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(path=str(path), detail=f"Cannot parse {path}: {e}") from e
    raise ConfigError(path=str(path), detail=f"Unsupported config format '{suffix}' (use .toml or .json)")


def load_config_file(path: Path, model: type[ModelT] | TypeAdapter[ModelT]) -> ModelT:
    """
    Load and validate a config file into ``model``, a pydantic model or a TypeAdapter
    for unions such as the simulated/remote model reference.

    Raises:
        ConfigError: If the file is missing, unparsable or fails validation
    """
    data = read_config_mapping(path)
    adapter = model if isinstance(model, TypeAdapter) else TypeAdapter(model)
    name = getattr(model, "__name__", "config")
    try:
        return adapter.validate_python(data)
    except ValidationError as e:
        raise ConfigError(
            path=str(path),
            detail=f"{path} failed validation for {name}",
            errors=[{"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]} for err in e.errors()],
        ) from e
