"""Run configuration: a flat JSON document plus ``key=value`` overrides.

See docs/config.md for the schema.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .model import DEFAULT_N_MAX, SystemParams

TASKS = ("eigen", "sweep", "table1", "spectrum", "classify", "oracle-check")
PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
SWEEPABLE = PARAM_KEYS + ("A_c", "A_p", "Delta")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis {self.name!r}: count must be an integer >= 2, got {self.count!r}")
        if not self.start < self.stop:
            raise ConfigError(f"axis {self.name!r}: need start < stop, got {self.start} .. {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))

    def to_dict(self) -> dict:
        return {"name": self.name, "start": self.start, "stop": self.stop, "count": int(self.count)}


@dataclass(frozen=True)
class RunConfig:
    task: str = "classify"
    params: SystemParams = field(default_factory=SystemParams)
    n_max: int = DEFAULT_N_MAX
    sweep: tuple[Axis, ...] = ()
    A_c: float = 5.0
    A_p: float = 0.01
    omega_c: float | None = 5037.0  # None: resonant with omega_32 at every point
    frame: str = "rotating"
    delta: Axis = field(default_factory=lambda: Axis("delta", -60.0, 60.0, 241))
    type_threshold: float = 0.15
    track_labels: bool = True
    Omega_values: tuple[float, ...] = (0.0, 10.0, 20.0, 30.0, 40.0)
    Gamma_31: float | None = None
    gamma_21: float | None = None
    Omega_c: float | None = None
    Delta_2: float = 0.0
    epsilon: float | None = None
    output: str | None = None
    format: str | None = None
    seed: int = 0

    @property
    def synthetic_rates(self) -> bool:
        return self.Omega_c is not None

    def omega_c_rotating(self) -> float | None:
        if self.omega_c is None:
            return None
        return self.omega_c - self.params.omega_d if self.frame == "lab" else self.omega_c

    def output_format(self) -> str:
        if self.format:
            return self.format
        if self.output and self.output.endswith(".json"):
            return "json"
        return "json" if self.task == "classify" else "csv"

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"task": self.task}
        d.update(asdict(self.params))
        for f in fields(self):
            if f.name in ("task", "params"):
                continue
            value = getattr(self, f.name)
            if f.name == "sweep":
                value = [a.to_dict() for a in value]
            elif f.name == "delta":
                value = value.to_dict()
            elif f.name == "omega_c" and value is None:
                value = "resonant"
            elif isinstance(value, tuple):
                value = list(value)
            d[f.name] = value
        return d

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunConfig":
        known = set(PARAM_KEYS) | {f.name for f in fields(cls)} - {"params"}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        try:
            params = SystemParams(**{k: float(raw[k]) for k in PARAM_KEYS if k in raw})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid system parameter: {exc}") from exc

        kw: dict[str, Any] = {"params": params}
        for f in fields(cls):
            if f.name == "params" or f.name not in raw:
                continue
            kw[f.name] = _coerce(f.name, raw[f.name])
        cfg = cls(**kw)
        _validate(cfg)
        return cfg


def _axis_from(name_hint: str | None, value: Any) -> Axis:
    if isinstance(value, str):
        parts = value.split(":")
        if name_hint is None:
            if len(parts) != 4:
                raise ConfigError(f"sweep axis {value!r}: expected name:start:stop:count")
            name, parts = parts[0], parts[1:]
        else:
            if len(parts) != 3:
                raise ConfigError(f"{name_hint} grid {value!r}: expected start:stop:count")
            name = name_hint
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"axis {value!r}: {exc}") from exc
        return Axis(name, start, stop, count)
    if isinstance(value, dict):
        missing = {"start", "stop", "count"} - set(value)
        if missing:
            raise ConfigError(f"axis {value!r} lacks field(s): {', '.join(sorted(missing))}")
        name = value.get("name", name_hint)
        if name is None:
            raise ConfigError(f"sweep axis {value!r} lacks a name")
        try:
            return Axis(str(name), float(value["start"]), float(value["stop"]), int(value["count"]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"axis {value!r}: {exc}") from exc
    raise ConfigError(f"cannot read axis from {value!r}")


def _coerce(name: str, value: Any) -> Any:
    try:
        if name == "sweep":
            if isinstance(value, str):
                value = [v for v in value.split(",") if v]
            if isinstance(value, dict):
                value = [value]
            return tuple(_axis_from(None, v) for v in value)
        if name == "delta":
            return _axis_from("delta", value)
        if name == "omega_c":
            if value is None or value == "resonant":
                return None
            return float(value)
        if name in ("Omega_values",):
            if isinstance(value, str):
                value = value.split(",")
            return tuple(float(v) for v in value)
        if name in ("Gamma_31", "gamma_21", "Omega_c", "epsilon"):
            return None if value is None else float(value)
        if name in ("A_c", "A_p", "type_threshold", "Delta_2"):
            return float(value)
        if name in ("n_max", "seed"):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"expected an integer, got {value}")
            return int(value)
        if name == "track_labels":
            if isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0"):
                    raise ValueError(f"expected a boolean, got {value!r}")
                return value.lower() in ("true", "1")
            return bool(value)
        if name in ("task", "frame", "output", "format"):
            return None if value is None else str(value)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {name!r}: {exc}") from exc
    return value


def _validate(cfg: RunConfig) -> None:
    if cfg.task not in TASKS:
        raise ConfigError(f"field 'task': unknown task {cfg.task!r}; choose from {', '.join(TASKS)}")
    if cfg.n_max < 2:
        raise ConfigError(f"field 'n_max': must be >= 2, got {cfg.n_max}")
    if cfg.frame not in ("rotating", "lab"):
        raise ConfigError(f"field 'frame': must be 'rotating' or 'lab', got {cfg.frame!r}")
    if cfg.format not in (None, "csv", "json"):
        raise ConfigError(f"field 'format': must be 'csv' or 'json', got {cfg.format!r}")
    names = [a.name for a in cfg.sweep]
    for n in names:
        if n not in SWEEPABLE:
            raise ConfigError(f"field 'sweep': unknown parameter {n!r}; sweepable: {', '.join(SWEEPABLE)}")
    if len(set(names)) != len(names):
        raise ConfigError(f"field 'sweep': repeated axis in {names}")
    if len(names) > 2:
        raise ConfigError("field 'sweep': at most two axes (outer, inner)")
    if cfg.A_p < 0 or cfg.A_c < 0:
        raise ConfigError("fields 'A_c', 'A_p': drive amplitudes must be >= 0")
    if cfg.synthetic_rates and (cfg.Gamma_31 is None or cfg.gamma_21 is None):
        raise ConfigError("synthetic rates need 'Gamma_31', 'gamma_21' and 'Omega_c' together")


def parse_override(item: str) -> tuple[str, Any]:
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, text = item.split("=", 1)
    key = key.strip()
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return key, value


def load_config(path: str | Path | None = None, overrides: list[str] = (), task: str | None = None) -> RunConfig:
    raw: dict[str, Any] = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    for item in overrides:
        key, value = parse_override(item)
        raw[key] = value
    if task is not None:
        raw["task"] = task
    return RunConfig.from_dict(raw)
