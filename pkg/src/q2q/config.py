"""Service configuration: defaults, config file, environment overrides.

Precedence is env > file > defaults. File is JSON with keys matching the
field names below; environment variables are the upper-cased field names
prefixed with ``Q2Q_`` (e.g. ``Q2Q_EMBEDDING_DIM``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

from .errors import ConfigurationError

ENV_PREFIX = "Q2Q_"


@dataclass
class ServiceConfig:
    embedding_endpoint: str | None = None  # None = built-in hashing embedder
    embedding_dim: int = 384
    generation_endpoint: str | None = None
    sparql_endpoint: str = "https://query.wikidata.org/sparql"
    index_path: str = "data/index.q2q"
    store_path: str = "data/store.json"
    sentence_threshold: float = 0.3
    default_k: int = 3
    parallelism: int = 4
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    language: str = "en"
    ui_dir: str | None = None

    def __post_init__(self):
        if self.embedding_dim <= 0:
            raise ConfigurationError("embedding_dim must be positive")
        if not 0.0 <= self.sentence_threshold <= 1.0:
            raise ConfigurationError("sentence_threshold must be in [0, 1]")
        if self.default_k < 1:
            raise ConfigurationError("default_k must be >= 1")
        if self.parallelism < 1:
            raise ConfigurationError("parallelism must be >= 1")


_INT_FIELDS = {"embedding_dim", "default_k", "parallelism", "listen_port"}
_FLOAT_FIELDS = {"sentence_threshold"}


def load_config(
    path: str | None = None,
    env: dict[str, str] | None = None,
    overrides: dict | None = None,
) -> ServiceConfig:
    """Assemble configuration with env > file > defaults precedence.

    ``overrides`` (e.g. parsed CLI flags) win over everything and use the
    same keys as the config file.
    """
    env = os.environ if env is None else env
    values: dict = {}

    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                file_values = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(file_values, dict):
            raise ConfigurationError(f"config file {path} must hold a JSON object")
        values.update(file_values)

    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")

    for name in known:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw

    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    for name in _INT_FIELDS:
        if name in values and values[name] is not None:
            try:
                values[name] = int(values[name])
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"config key {name} must be an integer") from exc
    for name in _FLOAT_FIELDS:
        if name in values and values[name] is not None:
            try:
                values[name] = float(values[name])
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"config key {name} must be a number") from exc

    return ServiceConfig(**values)
