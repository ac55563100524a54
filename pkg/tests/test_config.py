"""Tests for budget presets and YAML budget files."""

import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from harmonic_lfun.config import (
    Budget,
    Command,
    LatticeTruncation,
    QuadratureSpec,
    RunConfig,
    get_preset,
    load_budget,
    resolve_budget,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_presets_scale_together():
    fast, default, paranoid = (get_preset(n) for n in ("fast", "default", "paranoid"))
    assert fast.eisenstein.radius < default.eisenstein.radius < paranoid.eisenstein.radius
    assert fast.quadrature.rel_tol > default.quadrature.rel_tol > paranoid.quadrature.rel_tol
    assert default == Budget()


def test_unknown_preset():
    with pytest.raises(ValueError, match="Unknown budget preset 'huge'"):
        get_preset("huge")


def test_load_budget_overrides_preset():
    budget = load_budget(FIXTURES / "budget_override.yml")

    assert budget.name == "fast"
    assert budget.quadrature.t0 == 1.25
    assert budget.quadrature.rel_tol == 1e-12
    # Untouched keys keep the preset's values
    assert budget.quadrature.max_subdiv == get_preset("fast").quadrature.max_subdiv
    assert budget.eisenstein.radius == 150
    assert budget.eisenstein.tol == get_preset("fast").eisenstein.tol


def test_explicit_preset_beats_file():
    budget = load_budget(FIXTURES / "budget_override.yml", preset="paranoid")
    assert budget.name == "paranoid"
    assert budget.eisenstein.radius == 150


def test_yaml_nulls_keep_preset():
    """YAML null leaves the preset value in place, for keys and whole sections."""
    budget = load_budget(FIXTURES / "budget_nulls.yml")

    assert budget.series.max_terms == Budget().series.max_terms
    assert budget.quadrature.tail_T is None
    assert budget.quadrature.max_subdiv == 600
    assert budget.resolvent == Budget().resolvent


def test_unknown_section():
    with pytest.raises(ValueError, match="Unknown budget keys: lattice"):
        load_budget(FIXTURES / "budget_unknown_key.yml")


def test_budget_must_be_mapping():
    with pytest.raises(ValueError, match="must be a mapping"):
        load_budget(FIXTURES / "budget_list.yml")


def test_cross_field_validation():
    with pytest.raises(ValueError, match="tail_T"):
        load_budget(FIXTURES / "budget_invalid_value.yml")


def test_empty_file_is_default(tmp_path: Path):
    path = tmp_path / "budget.yml"
    path.write_text("", encoding="utf-8")
    assert load_budget(path) == Budget()


def test_section_must_be_mapping(tmp_path: Path):
    path = tmp_path / "budget.yml"
    path.write_text("quadrature: 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="'quadrature' must be a mapping"):
        load_budget(path)


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_budget(Path("/nonexistent/budget.yml"))


def test_resolve_budget_without_file():
    assert resolve_budget("fast") == get_preset("fast")


def test_models_are_frozen_and_strict():
    q = QuadratureSpec()
    with pytest.raises(ValidationError):
        q.t0 = 2.0  # type: ignore[misc]
    with pytest.raises(ValidationError):
        QuadratureSpec(t00=1.0)  # type: ignore[call-arg]


def test_non_finite_tolerance():
    with pytest.raises(ValidationError, match="finite"):
        QuadratureSpec(rel_tol=math.nan)


def test_with_split_keeps_other_fields():
    q = QuadratureSpec(tail_T=20.0, rel_tol=1e-9).with_split(2.5)
    assert q.t0 == 2.5
    assert q.tail_T == 20.0
    assert q.rel_tol == 1e-9


@pytest.mark.parametrize("t0", [0.0, -1.0, math.inf])
def test_with_split_validates(t0):
    with pytest.raises(ValidationError):
        QuadratureSpec().with_split(t0)


def test_with_split_respects_tail():
    with pytest.raises(ValidationError, match="must exceed t0"):
        QuadratureSpec(tail_T=3.0).with_split(3.0)


def test_refined_quadrature():
    q = QuadratureSpec(tail_T=20.0).refined()
    assert q.rel_tol == pytest.approx(1e-12)
    assert q.max_subdiv == 4000
    assert q.tail_T == 40.0


def test_tail_bound_shrinks_with_radius():
    small, large = LatticeTruncation(radius=100), LatticeTruncation(radius=400)
    assert large.tail_bound(0, 1.5, 1.0) < small.tail_bound(0, 1.5, 1.0)
    assert math.isinf(small.tail_bound(0, 0.4, 1.0))
    assert small.scaled(0.01).radius == 4


def test_run_config_rejects_nan_params():
    with pytest.raises(ValidationError, match="must be finite"):
        RunConfig(command=Command.EVAL_LZ, params={"s": complex(math.nan, 0)})
