"""Tests for the verification harness."""

import math

import pytest

from harmonic_lfun.config import get_preset
from harmonic_lfun.errors import PoleError
from harmonic_lfun.verify import (
    SUITES,
    Check,
    CheckRecord,
    CheckStatus,
    all_passed,
    checks_for,
    run_check,
    run_suite,
)

FAST = get_preset("fast")


def _constant(value: float):
    def run(budget):
        return value

    return run


def _raises(budget):
    raise PoleError("pole at s = 1")


class TestRegistry:
    """Suites and their checks."""

    def test_every_suite_has_checks(self):
        for suite in SUITES:
            assert checks_for(suite), suite

    def test_all_is_the_union(self):
        named = sum(len(checks_for(s)) for s in SUITES if s != "all")
        assert len(checks_for("all")) == named

    def test_resolvent_covers_both_variables(self):
        theorems = {c.theorem for c in checks_for("resolvent")}
        assert "cusp growth of the raised kernel in z" in theorems
        assert "cusp growth of the raised kernel in tau" in theorems
        assert "G_w is a Laplace eigenfunction in z" in theorems
        assert "G_w settles as the lattice radius doubles" in theorems

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="Unknown suite 'nope'"):
            checks_for("nope")


class TestRunCheck:
    """Statuses of single checks."""

    def test_pass(self):
        record = run_check(Check("s", "t", "c", 1e-3, _constant(1e-4)), FAST)
        assert record.status is CheckStatus.PASS
        assert record.passed
        assert record.residual == 1e-4
        assert record.seconds >= 0

    def test_fail(self):
        record = run_check(Check("s", "t", "c", 1e-3, _constant(1e-2)), FAST)
        assert record.status is CheckStatus.FAIL
        assert not record.passed

    def test_nan_residual_fails(self):
        record = run_check(Check("s", "t", "c", 1e-3, _constant(math.nan)), FAST)
        assert record.status is CheckStatus.FAIL

    def test_numerical_error_is_recorded(self):
        record = run_check(Check("s", "t", "c", 1e-3, _raises), FAST)
        assert record.status is CheckStatus.ERROR
        assert record.residual is None
        assert record.message == "PoleError: pole at s = 1"

    def test_all_passed(self):
        ok = CheckRecord(
            suite="s",
            theorem="t",
            check="c",
            status=CheckStatus.PASS,
            residual=0.0,
            tolerance=1.0,
            seconds=0.0,
        )
        err = ok.model_copy(update={"status": CheckStatus.ERROR})
        assert all_passed([ok])
        assert not all_passed([ok, err])
        assert all_passed([])


class TestSuites:
    """Suites that run in a few seconds."""

    def test_modular(self):
        seen = []
        records = run_suite("modular", FAST, on_record=seen.append)
        assert seen == records
        assert all_passed(records), [r for r in records if not r.passed]
        assert any(r.theorem.startswith("Klein j") for r in records)

    def test_special_functions(self):
        records = run_suite("special-functions", FAST)
        assert all_passed(records), [r for r in records if not r.passed]

    def test_functional_equation_of_le2(self):
        records = run_suite("functional-equation", FAST)
        assert records[0].passed, records[0]


@pytest.mark.slow
@pytest.mark.parametrize("suite", [s for s in SUITES if s != "all"])
def test_suite_passes_with_default_budget(suite):
    records = run_suite(suite)
    assert all_passed(records), [r for r in records if not r.passed]
