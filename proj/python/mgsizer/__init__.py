"""Stochastic microgrid sizing (WT / PV / DG / BESS) with multi-objective GAs."""

import json as _json

from ._core import (
    ConfigError,
    InvariantViolation,
    SizingConfig,
    adaptive_probabilities,
    capacity_loss,
    diverse_count,
    ora,
    pv_power,
    scenario_count,
    wt_power,
)
from . import _core


def _config_text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def evaluate(sizing, config=None):
    """Objectives of one sizing; `config` is a dict or JSON text."""
    return _core.evaluate(sizing, _config_text(config))


def optimize(algorithm="", config=None):
    """Run samoga, nsga2, nsga-hs or aga and return the frontier."""
    return _core.optimize(algorithm, _config_text(config))


__all__ = [
    "ConfigError",
    "InvariantViolation",
    "SizingConfig",
    "adaptive_probabilities",
    "capacity_loss",
    "diverse_count",
    "evaluate",
    "optimize",
    "ora",
    "pv_power",
    "scenario_count",
    "wt_power",
]
