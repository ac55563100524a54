"""Tests for robustness: non-finite values, I/O errors, near-singular input."""

import math
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest
from typer.testing import CliRunner

from harmonic_lfun.cli import app
from harmonic_lfun.errors import AccuracyError, DomainError, NumericalError
from harmonic_lfun.lfun import L_z
from harmonic_lfun.modforms import HalfPlanePoint, eval_Hz
from harmonic_lfun.results import EvalResult, checked

runner = CliRunner()


# =============================================================================
# Non-finite values
# =============================================================================


class TestNonFinite:
    """NaN and Inf never leave an evaluation."""

    def test_result_rejects_nan(self):
        with pytest.raises(AccuracyError, match="evaluation produced a non-finite"):
            EvalResult(complex(math.nan, 0), 0.0)

    def test_result_rejects_negative_error(self):
        with pytest.raises(AccuracyError, match="error estimate"):
            EvalResult(1.0 + 0j, -1.0)

    def test_checked(self):
        assert checked(np.complex128(1 + 1j), "x") == 1 + 1j
        with pytest.raises(AccuracyError, match="x produced"):
            checked(complex(0, math.inf), "x")

    def test_arithmetic_adds_errors(self):
        a = EvalResult(1 + 0j, 1e-3, {"a": 1})
        b = EvalResult(2j, 2e-3, {"b": 2})
        total = (a - b).scaled(-2).shifted(1, 1e-3)
        assert total.value == -1 + 4j
        assert total.err_est == pytest.approx(7e-3)
        assert total.diagnostics == {"a": 1, "b": 2}
        assert total.rel_err == pytest.approx(7e-3 / abs(-1 + 4j))

    def test_half_plane_rejects_real_axis(self):
        with pytest.raises(DomainError):
            HalfPlanePoint(0.3, 0.0)

    def test_errors_share_a_base(self):
        with pytest.raises(NumericalError):
            eval_Hz(0.1 + 1.1j, 0.1 + 1.1j)


# =============================================================================
# Near-singular input
# =============================================================================


class TestNearSingular:
    """Points next to the singular set still evaluate, with a warning."""

    def test_close_to_ray_evaluates(self):
        res = L_z(1e-3 + 1.5j, 1.4)
        assert math.isfinite(abs(res.value))

    def test_cli_warns_close_to_ray(self):
        result = runner.invoke(app, ["eval-lz", "--z", "1e-9+1.5i", "--s", "1.4"])
        assert "singular set" in result.output


# =============================================================================
# I/O errors
# =============================================================================


class TestIOErrors:
    """Write failures exit with 1 and a message."""

    def test_rows_write_error(self, tmp_path: Path):
        with patch.object(Path, "write_text", side_effect=OSError("disk full")):
            result = runner.invoke(
                app, ["eval-le2", "--s", "2.5", "--output", str(tmp_path / "out.txt")]
            )
        assert result.exit_code == 1
        assert "Error writing output" in result.output
        assert "disk full" in result.output

    def test_report_write_error(self, tmp_path: Path):
        with patch.object(Path, "write_text", side_effect=OSError("read-only")):
            result = runner.invoke(
                app, ["verify", "--suite", "modular", "--output", str(tmp_path / "r.txt")]
            )
        assert result.exit_code == 1
        assert "Error writing report" in result.output
