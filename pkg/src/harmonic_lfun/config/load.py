"""Budget presets and YAML budget files."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from harmonic_lfun.config.model import (
    Budget,
    LatticeTruncation,
    QuadratureSpec,
    SeriesBudget,
)

DEFAULT_PRESET = "default"
SECTIONS = ("series", "quadrature", "eisenstein", "resolvent")

PRESETS: dict[str, Budget] = {
    "fast": Budget(
        name="fast",
        series=SeriesBudget(max_terms=200, abs_tol=1e-14, rel_tol=1e-12),
        quadrature=QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10, max_subdiv=200),
        eisenstein=LatticeTruncation(radius=200, tol=5e-2),
        resolvent=LatticeTruncation(radius=60, tol=5e-2),
    ),
    "default": Budget(),
    "paranoid": Budget(
        name="paranoid",
        series=SeriesBudget(max_terms=1000, abs_tol=1e-16, rel_tol=1e-14),
        quadrature=QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdiv=1000),
        eisenstein=LatticeTruncation(radius=800, tol=5e-3),
        resolvent=LatticeTruncation(radius=200, tol=5e-3),
    ),
}


def get_preset(name: str) -> Budget:
    """Return a named budget preset.

    Raises:
        ValueError: If the preset name is unknown.
    """
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(PRESETS)
        raise ValueError(f"Unknown budget preset '{name}' (choose from {known})") from None


def load_budget(config_path: Path, preset: str | None = None) -> Budget:
    """Load a budget from a YAML file layered over a preset.

    The file is a mapping with an optional ``preset`` key and optional
    ``series``, ``quadrature``, ``eisenstein`` and ``resolvent`` sections.
    Null values keep the preset's value.

    Args:
        config_path: Path to the YAML budget file.
        preset: Preset to start from; overrides the file's ``preset`` key.

    Returns:
        Validated Budget.

    Raises:
        FileNotFoundError: If the file doesn't exist.
        ValueError: If the file is not a mapping or fails validation.
    """
    if not config_path.exists():
        raise FileNotFoundError(f"Budget file not found: {config_path}")

    with open(config_path, encoding="utf-8") as f:
        raw = yaml.safe_load(f)

    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"Budget file must be a mapping: {config_path}")

    base_name = preset or raw.get("preset") or DEFAULT_PRESET
    if not isinstance(base_name, str):
        raise ValueError(f"'preset' must be a string, got {type(base_name).__name__}")
    return _merge(get_preset(base_name), raw)


def resolve_budget(preset: str = DEFAULT_PRESET, config_path: Path | None = None) -> Budget:
    """Resolve the budget for a run from a preset and an optional file."""
    if config_path is None:
        return get_preset(preset)
    return load_budget(config_path, preset=preset)


def _merge(base: Budget, raw: dict[str, Any]) -> Budget:
    """Overlay the sections of a parsed budget file on ``base``."""
    unknown = set(raw) - {*SECTIONS, "preset"}
    if unknown:
        raise ValueError(f"Unknown budget keys: {', '.join(sorted(unknown))}")

    data = base.model_dump()
    for section in SECTIONS:
        overrides = raw.get(section)
        if overrides is None:
            continue
        if not isinstance(overrides, dict):
            raise ValueError(
                f"'{section}' must be a mapping, got {type(overrides).__name__}"
            )
        data[section].update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Budget.model_validate(data)
    except ValidationError as e:
        raise ValueError(str(e)) from None
