"""Flat YAML run configuration.

Every key is optional; missing keys take the defaults below and unknown
keys are rejected. ``LIFESYM_SEED`` in the environment overrides
``rng_seed``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import yaml

from .arena import MatchParams
from .census import CensusLimits
from .errors import ConfigError
from .evolution import EvoParams, GenomeParams

SEED_ENV = "LIFESYM_SEED"


def _prob(v):
    return 0.0 <= v <= 1.0


def _pos(v):
    return v > 0


def _nonneg(v):
    return v >= 0


# key: (type, check, hint, default)
SCHEMA = {
    "pop_size": (int, _pos, "must be >= 1", 200),
    "generations": (int, _pos, "must be >= 1", 100),
    "tournament_size": (int, lambda v: v >= 2, "must be >= 2", 2),
    "elite_k": (int, _pos, "must be >= 1", 50),
    "layer2": (bool, None, "", True),
    "layer3": (bool, None, "", True),
    "layer4": (bool, None, "", True),
    "p_sexual": (float, _prob, "must be in [0, 1]", 0.5),
    "p_fusion": (float, _prob, "must be in [0, 1]", 0.1),
    "full_reevaluation": (bool, None, "", False),
    "rng_seed": (int, _nonneg, "must be >= 0", 0),
    "space_factor": (float, _pos, "must be > 0", 5.0),
    "time_factor": (float, _pos, "must be > 0", 10.0),
    "min_gap": (int, _nonneg, "must be >= 0", 4),
    "random_orientation": (bool, None, "", True),
    "init_rows": (int, _pos, "must be >= 1", 5),
    "init_cols": (int, _pos, "must be >= 1", 5),
    "init_density": (float, _prob, "must be in [0, 1]", 0.375),
    "p_flip": (float, _prob, "must be in [0, 1]", 0.01),
    "p_grow": (float, _prob, "must be in [0, 1]", 0.5),
    "crossover_axis": (int, lambda v: v in (0, 1), "must be 0 or 1", 0),
    "fusion_gap": (int, _nonneg, "must be >= 0", 1),
    "p_max": (int, _pos, "must be >= 1", 30),
    "confirm_periods": (int, _pos, "must be >= 1", 10),
    "g_max": (int, _pos, "must be >= 1", 20_000),
    "escape_distance": (int, _pos, "must be >= 1", 24),
    "n_opponents": (int, _pos, "must be >= 1", 50),
}

DEFAULTS = {k: entry[3] for k, entry in SCHEMA.items()}


@dataclass(frozen=True)
class Config:
    evo: EvoParams
    census: CensusLimits
    n_opponents: int
    values: dict
    seed_from_env: bool = False

    @property
    def match(self) -> MatchParams:
        return self.evo.match


def _coerce(key, value):
    kind, check, hint, _ = SCHEMA[key]
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected true/false, got {value!r}")
    elif kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        value = float(value)
    if check is not None and not check(value):
        raise ConfigError(key, f"{hint}, got {value!r}")
    return value


def resolve(overrides: dict | None = None, env: dict | None = None) -> Config:
    """Defaults plus ``overrides``, validated, with the env seed applied."""
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(SCHEMA))
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    values = dict(DEFAULTS)
    for key, value in overrides.items():
        values[key] = _coerce(key, value)
    env = os.environ if env is None else env
    from_env = False
    if env.get(SEED_ENV):
        try:
            values["rng_seed"] = _coerce("rng_seed", int(env[SEED_ENV]))
        except ValueError:
            raise ConfigError("rng_seed", f"{SEED_ENV} is not an integer: {env[SEED_ENV]!r}") from None
        from_env = True
    if values["elite_k"] > values["pop_size"]:
        raise ConfigError("elite_k", "must not exceed pop_size")
    if values["tournament_size"] > values["pop_size"]:
        raise ConfigError("tournament_size", "must not exceed pop_size")
    v = values
    match = MatchParams(v["space_factor"], v["time_factor"], v["min_gap"], v["random_orientation"])
    genome = GenomeParams(v["init_rows"], v["init_cols"], v["init_density"], v["p_flip"],
                          v["p_grow"], v["crossover_axis"], v["fusion_gap"])
    evo = EvoParams(v["pop_size"], v["generations"], v["tournament_size"], v["elite_k"],
                    v["layer2"], v["layer3"], v["layer4"], v["p_sexual"], v["p_fusion"],
                    match, genome, v["rng_seed"], v["full_reevaluation"])
    limits = CensusLimits(v["p_max"], v["confirm_periods"], v["g_max"], v["escape_distance"])
    return Config(evo, limits, v["n_opponents"], values, from_env)


def load_config(path: str | Path, env: dict | None = None) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError("path", f"config file not found: {path}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("path", f"not valid YAML: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("path", "top level must be a mapping of key: value")
    return resolve(data, env)


def dump_config(values: dict) -> str:
    return yaml.safe_dump(values, sort_keys=False)
