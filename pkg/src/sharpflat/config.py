"""Run configuration: tolerances, budgets and defaults for the CLI.

A config file is plain `key=value` text (# comments allowed); flags given
on the command line override file values.  Unknown keys are rejected so
experiments stay self-describing.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError


@dataclass
class Config:
    relator_tol: float = 1e-9
    crossing_dedup_tol: float = 1e-6
    axis_dedup_tol: float = 1e-12
    word_cap: int = 64
    push_eps: float = 1e-3
    limset_eps: float = 1e-3
    limset_depth: int = 18
    bq_depth: int = 8
    oracle_depth: int = 10
    threads: int = 1
    out_dir: str = "."

    def validate(self):
        for name in ("relator_tol", "crossing_dedup_tol", "axis_dedup_tol",
                     "push_eps", "limset_eps"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("word_cap", "limset_depth", "bq_depth", "oracle_depth",
                     "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        return self

    def show(self) -> str:
        return "\n".join(f"{f.name}={getattr(self, f.name)}"
                         for f in fields(self)) + "\n"


def load_config(path: str | None = None, overrides: dict | None = None) -> Config:
    cfg = Config()
    field_map = {f.name: f for f in fields(Config)}
    if path:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in field_map:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            cfg = _set(cfg, key, value, field_map)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in field_map:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, value)
    return cfg.validate()


def _set(cfg: Config, key: str, raw: str, field_map) -> Config:
    kind = field_map[key].type
    try:
        if kind in ("int", int):
            setattr(cfg, key, int(raw))
        elif kind in ("float", float):
            setattr(cfg, key, float(raw))
        else:
            setattr(cfg, key, raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return cfg
