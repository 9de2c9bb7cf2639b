"""Dataclass configuration for the services, loaded from one JSON file.

Environment variables override file values; the variable name is the field
name upper-cased with an ``ICON_`` prefix (``ICON_PORT``, ``ICON_TFIDF_MIN``,
...). Nested analysis fields use the bare field name.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IconError


@dataclass
class AnalysisConfig:
    """Thresholds for term, concept and relation extraction."""

    tfidf_min: float = 1.0
    cvalue_min: float = 2.0
    pmi_min: float = 2.0
    pmi_cap: float = 8.0
    max_ngram: int = 4

    def validate(self) -> None:
        for name in ("tfidf_min", "cvalue_min", "pmi_min", "pmi_cap"):
            if getattr(self, name) < 0:
                raise IconError("INVALID_CONFIG", f"{name} must be >= 0")
        if not 1 <= self.max_ngram <= 8:
            raise IconError("INVALID_CONFIG", "max_ngram must be in 1..8")


@dataclass
class ServerConfig:
    """Logic-tier service configuration.

    ``storage`` selects the data-tier backend: ``embedded`` (in-process
    append-log store under ``data_dir``), ``wire`` (remote data-tier server at
    ``data_addr`` speaking the frame protocol) or ``resp`` (external key-value
    server at ``data_addr`` speaking the RESP dialect).
    """

    storage: str = "embedded"
    data_dir: str = "./icon-data"
    data_addr: str = "127.0.0.1:7600"
    host: str = "127.0.0.1"
    port: int = 7700
    credentials_file: str | None = None
    token_ttl_s: int = 3600
    lease_ttl_s: int = 300
    dictionaries: list[str] = field(default_factory=list)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def validate(self) -> None:
        if self.storage not in ("embedded", "wire", "resp"):
            raise IconError("INVALID_CONFIG", f"unknown storage backend {self.storage!r}")
        self.analysis.validate()


_ENV_PREFIX = "ICON_"


def _coerce(raw: str, target_type: type) -> object:
    if target_type is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    if target_type in (int, float):
        return target_type(raw)
    if target_type is list:
        return [item for item in raw.split(",") if item]
    return raw


def _apply_env(cfg: object) -> None:
    for f in dataclasses.fields(cfg):  # type: ignore[arg-type]
        value = getattr(cfg, f.name)
        if dataclasses.is_dataclass(value):
            _apply_env(value)
            continue
        raw = os.environ.get(_ENV_PREFIX + f.name.upper())
        if raw is None:
            continue
        base = type(value) if value is not None else str
        setattr(cfg, f.name, _coerce(raw, base))


def load_config(path: str | Path | None = None) -> ServerConfig:
    """Build a ServerConfig from an optional JSON file plus the environment."""
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise IconError("INVALID_CONFIG", f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise IconError("INVALID_CONFIG", f"config file is not valid JSON: {exc}")
    analysis = AnalysisConfig(**data.pop("analysis", {}))
    known = {f.name for f in dataclasses.fields(ServerConfig)}
    unknown = set(data) - known
    if unknown:
        raise IconError("INVALID_CONFIG", f"unknown config keys: {sorted(unknown)}")
    cfg = ServerConfig(analysis=analysis, **data)
    _apply_env(cfg)
    cfg.validate()
    return cfg
