"""Numerical budgets and run configuration."""

from harmonic_lfun.config.load import PRESETS, get_preset, load_budget, resolve_budget
from harmonic_lfun.config.model import (
    Budget,
    Command,
    LatticeTruncation,
    OutputFormat,
    QuadratureSpec,
    RunConfig,
    SeriesBudget,
)

__all__ = [
    "PRESETS",
    "Budget",
    "Command",
    "LatticeTruncation",
    "OutputFormat",
    "QuadratureSpec",
    "RunConfig",
    "SeriesBudget",
    "get_preset",
    "load_budget",
    "resolve_budget",
]
