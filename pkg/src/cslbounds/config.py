"""Run configuration: embedded defaults, user overrides, schema validation."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .cslcore import CslParams
from .projections import case as parameter_case

__all__ = ["ConfigError", "GridConfig", "RunConfig", "load_defaults", "load_schema", "load_config"]


class ConfigError(ValueError):
    """Raised for malformed or schema-violating configuration."""


@lru_cache(maxsize=1)
def _defaults_text() -> str:
    return resources.files("cslbounds.data").joinpath("defaults.json").read_text(encoding="utf-8")


def load_defaults() -> dict:
    return json.loads(_defaults_text())


@lru_cache(maxsize=1)
def load_schema() -> dict:
    return json.loads(resources.files("cslbounds.data").joinpath("schema.json").read_text(encoding="utf-8"))


def deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    g = doc["grid"]
    if g["lambda_max"] < g["lambda_min"] or g["rc_max"] < g["rc_min"]:
        raise ConfigError("grid: axis maximum below minimum")
    cosmo = doc["models"]["cosmology"]
    if abs(cosmo["Omega_m"] + cosmo["Omega_L"] - 1.0) > 1e-12:
        raise ConfigError("models/cosmology: only flat cosmologies are supported")


@dataclass(frozen=True)
class GridConfig:
    lambda_min: float
    lambda_max: float
    lambda_points: int
    rc_min: float
    rc_max: float
    rc_points: int
    edge: str = "permissive"


@dataclass(frozen=True)
class RunConfig:
    case: str
    lam: float | None
    rc: float | None
    channels: tuple[str, ...]
    format: str
    tol_scale: float
    workers: int
    seed: int
    grid: GridConfig
    models: dict[str, dict[str, Any]]

    @classmethod
    def from_dict(cls, doc: dict) -> RunConfig:
        validate(doc)
        return cls(
            case=doc["case"],
            lam=doc["lambda"],
            rc=doc["rc"],
            channels=tuple(doc["channels"]),
            format=doc["format"],
            tol_scale=float(doc["tol_scale"]),
            workers=int(doc["workers"]),
            seed=int(doc["seed"]),
            grid=GridConfig(**doc["grid"]),
            models=copy.deepcopy(doc["models"]),
        )

    def params(self) -> CslParams:
        base = parameter_case(self.case).params
        if self.lam is not None:
            base = base.with_lambda(self.lam)
        if self.rc is not None:
            base = base.with_rc(self.rc)
        return base

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "case": self.case,
            "lambda": self.lam,
            "rc": self.rc,
            "channels": list(self.channels),
            "format": self.format,
            "tol_scale": self.tol_scale,
            "workers": self.workers,
            "seed": self.seed,
            "grid": dict(vars(self.grid)),
            "models": copy.deepcopy(self.models),
        }


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the user file, then explicit overrides; validated once at the end."""
    doc = load_defaults()
    if path is not None:
        try:
            user = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config root must be an object")
        doc = deep_merge(doc, user)
    if overrides:
        doc = deep_merge(doc, overrides)
    return RunConfig.from_dict(doc)
