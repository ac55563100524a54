"""Smoke tests for end-to-end CLI functionality.

These tests actually invoke the CLI and verify it produces valid output.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path


def _run(*args: str, timeout: int = 120) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "harmonic_lfun.cli", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_smoke_cli_version() -> None:
    """Test CLI version flag works."""
    result = _run("--version", timeout=30)

    assert result.returncode == 0
    assert "harmonic-lfun" in result.stdout


def test_smoke_eval_le2(tmp_path: Path) -> None:
    """End-to-end: evaluate L(E2hat, s) into a JSON file."""
    out = tmp_path / "le2.json"
    result = _run("eval-le2", "--s", "2.5", "--format", "json", "--output", str(out))

    assert result.returncode == 0, f"CLI failed: {result.stderr}"
    assert "Wrote 1 rows" in result.stdout
    row = json.loads(out.read_text(encoding="utf-8"))["rows"][0]
    assert row["rel_error"] < 1e-8


def test_smoke_verify_modular() -> None:
    """The modular suite passes and prints its table."""
    result = _run("verify", "--suite", "modular", "--verbose")

    assert result.returncode == 0, f"CLI failed: {result.stderr}"
    assert "Budget: default" in result.stdout
    assert "checks passed" in result.stdout


def test_smoke_error_goes_to_stderr() -> None:
    """Numerical errors exit 1 with the message on stderr."""
    result = _run("eval-lz", "--z", "2i", "--s", "1.4", timeout=30)

    assert result.returncode == 1
    assert "SingularSetError" in result.stderr
    assert result.stdout == ""
