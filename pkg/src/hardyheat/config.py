"""Run configuration: a flat key=value layer over the experiment settings.

A run is determined by (experiments, Settings, out_dir, threads).  The config
file format is one `key = value` per line so manifests diff line-by-line;
command-line flags override file values.  Tuples are comma-separated in both
directions, and every key round-trips through :func:`dumps` unchanged.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping

from .verify import EXPERIMENTS, Settings

__all__ = [
    "RunConfig",
    "ConfigError",
    "parse_kv",
    "parse_value",
    "format_value",
    "load_config",
    "dumps",
]


class ConfigError(ValueError):
    """Malformed or unknown configuration input."""


_SETTINGS_FIELDS = {f.name: f for f in fields(Settings)}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, flat and serializable.

    `experiments` uses registry names; the empty tuple means "all".  The grid
    keys (length/spacing/horizon/step) describe the oracle grid and must tile
    evenly.  `threads` caps the experiment pool; 0 defers to the environment
    variable HARDYHEAT_THREADS and then to 1.
    """

    experiments: tuple[str, ...] = ()
    out_dir: str = "results"
    threads: int = 0
    settings: Settings = field(default_factory=Settings)

    def resolved_experiments(self) -> tuple[str, ...]:
        names = self.experiments or tuple(EXPERIMENTS)
        unknown = [n for n in names if n not in EXPERIMENTS]
        if unknown:
            raise ConfigError(
                f"unknown experiment(s) {unknown}; see the catalogue")
        return names

    def resolved_threads(self) -> int:
        if self.threads > 0:
            return self.threads
        env = os.environ.get("HARDYHEAT_THREADS", "").strip()
        if env:
            try:
                k = int(env)
            except ValueError:
                raise ConfigError(f"HARDYHEAT_THREADS={env!r} is not an integer")
            if k <= 0:
                raise ConfigError("HARDYHEAT_THREADS must be positive")
            return k
        return 1


def parse_value(key: str, raw: str, kind: type) -> object:
    raw = raw.strip()
    try:
        if kind is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(raw)
        if kind is float:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError("non-finite")
            return value
        if kind is tuple:
            parts = [p.strip() for p in raw.split(",") if p.strip()]
            return tuple(float(p) for p in parts)
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def format_value(value: object) -> str:
    if isinstance(value, tuple):
        return ",".join(format_value(v) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_kv(text: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment, blank lines skipped."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = raw.strip()
    return out


def _apply(config: RunConfig, pairs: Mapping[str, str]) -> RunConfig:
    settings_updates: dict[str, object] = {}
    run_updates: dict[str, object] = {}
    for key, raw in pairs.items():
        if key == "experiments":
            names = tuple(p.strip() for p in raw.split(",") if p.strip())
            run_updates["experiments"] = names
        elif key == "out_dir":
            run_updates["out_dir"] = raw.strip()
        elif key == "threads":
            run_updates["threads"] = parse_value(key, raw, int)
        elif key in _SETTINGS_FIELDS:
            f = _SETTINGS_FIELDS[key]
            kind = {"int": int, "float": float, "str": str, "bool": bool}.get(
                f.type.split("[")[0], tuple)
            settings_updates[key] = parse_value(key, raw, kind)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    settings = replace(config.settings, **settings_updates)
    return replace(config, settings=settings, **run_updates)


def load_config(path: str | Path | None, overrides: Mapping[str, str] = {}) -> RunConfig:
    """File values first, then overrides on top (flags win)."""
    config = RunConfig()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        config = _apply(config, parse_kv(p.read_text(encoding="utf-8")))
    config = _apply(config, overrides)
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    s = config.settings
    if s.n not in (1, 2):
        raise ConfigError(f"n must be 1 or 2, got {s.n}")
    if len(s.oracle_grid) != 4:
        raise ConfigError("oracle_grid needs four entries: L, nx, T, nt")
    L, nx, T, nt = s.oracle_grid
    for name, v in (("nx", nx), ("nt", nt)):
        if v < 1 or abs(v - round(v)) > 1e-9:
            raise ConfigError(f"oracle_grid {name} must be a positive integer, got {v}")
    if L <= 0 or T <= 0:
        raise ConfigError("oracle_grid extents must be positive")
    if any(v <= 4.0 for v in s.growth_T_values):
        raise ConfigError("growth_T_values must exceed the start time 4")
    if list(s.growth_T_values) != sorted(set(s.growth_T_values)):
        raise ConfigError("growth_T_values must be strictly increasing")
    config.resolved_experiments()


def dumps(config: RunConfig) -> str:
    """Canonical flat dump: run keys then settings keys, sorted, one per line."""
    lines = [
        "experiments = " + ",".join(config.resolved_experiments()),
        f"out_dir = {config.out_dir}",
        f"threads = {config.threads}",
    ]
    s = dataclasses.asdict(config.settings)
    lines += [f"{k} = {format_value(s[k])}" for k in sorted(s)]
    return "\n".join(lines) + "\n"
