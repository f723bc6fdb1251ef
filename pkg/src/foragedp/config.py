"""Flat key=value config files for the batch runner.

Format: one ``section.key = value`` per line; ``#`` starts a comment; blank
lines are ignored. Sections are ``base.*`` (environment defaults shared by
every cell), ``sweep.*`` (grids and run sizing), and ``dp.*`` (solver). Grid
values accept either a comma list ("0,0.1,0.3") or a linspace spec
"start:stop:count" ("0:0.5:21").
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .params import ConfigError, DPConfig, EnvParams, SweepConfig

_BASE_FIELDS = {
    "h": float,
    "r_plus": float,
    "r_minus": float,
    "tau_d": int,
    "tau_s": int,
    "budget_n": int,
}
_DP_FIELDS = {
    "grid_points": int,
    "interpolation": str,
    "tie_break": str,
}
_SWEEP_SCALARS = {
    "n_realizations": int,
    "master_seed": int,
    "driver": str,
    "output_dir": str,
}


def parse_config_text(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def parse_grid(key: str, text: str) -> tuple[float, ...]:
    """Comma list or 'start:stop:count' linspace; single scalars work too."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:count")
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            if count < 1:
                raise ValueError("count must be >= 1")
            return tuple(float(v) for v in np.linspace(start, stop, count))
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{key}: bad grid {text!r} ({exc})") from None


def _convert(key: str, value: str, conv):
    try:
        return conv(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {conv.__name__}") from None


def build_sweep_config(mapping: dict[str, str]) -> SweepConfig:
    base_kwargs: dict = {}
    dp_kwargs: dict = {}
    sweep_kwargs: dict = {}
    grids: dict = {}
    for key, value in mapping.items():
        section, _, name = key.partition(".")
        if section == "base" and name in _BASE_FIELDS:
            base_kwargs[name] = _convert(key, value, _BASE_FIELDS[name])
        elif section == "dp" and name in _DP_FIELDS:
            dp_kwargs[name] = _convert(key, value, _DP_FIELDS[name])
        elif section == "sweep" and name in ("epsilon", "q", "gamma"):
            grids[name] = parse_grid(key, value)
        elif section == "sweep" and name == "objectives":
            sweep_kwargs["objectives"] = tuple(tok.strip() for tok in value.split(","))
        elif section == "sweep" and name in _SWEEP_SCALARS:
            sweep_kwargs[name] = _convert(key, value, _SWEEP_SCALARS[name])
        else:
            raise ConfigError(f"unknown config key {key!r}")
    base = EnvParams(epsilon=0.0, q=1.0, **base_kwargs)
    return SweepConfig(
        base=base,
        epsilon_grid=grids.get("epsilon", parse_grid("sweep.epsilon", "0:0.5:21")),
        q_grid=grids.get("q", parse_grid("sweep.q", "0.5:1:21")),
        gamma_list=grids.get("gamma", (1.0,)),
        dp=DPConfig(**dp_kwargs),
        **sweep_kwargs,
    )


def load_sweep_config(path) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return build_sweep_config(parse_config_text(fh.read()))


def override(cfg: SweepConfig, master_seed: int | None = None, output_dir=None) -> SweepConfig:
    """Apply CLI-level overrides on top of a parsed config."""
    if master_seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=master_seed)
    if output_dir is not None:
        cfg = dataclasses.replace(cfg, output_dir=str(output_dir))
    return cfg
