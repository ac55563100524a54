"""CSV, JSON and text renderings of evaluation rows and verification tables."""

from __future__ import annotations

import csv
import io
import json
import os
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from harmonic_lfun.config.model import OutputFormat
from harmonic_lfun.results import EvalResult
from harmonic_lfun.verify import CheckRecord

__all__ = [
    "OUTPUT_DIR_ENV",
    "SCHEMA_VERSION",
    "format_complex",
    "render_report",
    "render_rows",
    "resolve_output_path",
    "to_jsonable",
    "write_report",
    "write_rows",
]

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "HARMONIC_LFUN_OUTPUT_DIR"


def format_complex(value: complex) -> str:
    """Render as re+im i with 17 significant digits."""
    value = complex(value)
    return f"{value.real:.17g}{value.imag:+.17g}i"


def _cell(value: Any) -> str:
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return ""
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Convert complex numbers and results to plain JSON values."""
    if isinstance(value, EvalResult):
        return {
            "value": to_jsonable(value.value),
            "err_est": value.err_est,
            "diagnostics": to_jsonable(value.diagnostics),
        }
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def resolve_output_path(output: Path | None) -> Path | None:
    """Place a bare file name in $HARMONIC_LFUN_OUTPUT_DIR when it is set."""
    if output is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and output.parent == Path(".") and not output.is_absolute():
        return Path(base) / output
    return output


def render_rows(rows: Sequence[Mapping[str, Any]], fmt: OutputFormat) -> str:
    """Render evaluation rows; columns follow the keys of the first row."""
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        payload = {"schema_version": SCHEMA_VERSION, "rows": to_jsonable(list(rows))}
        return json.dumps(payload, indent=2) + "\n"
    if not rows:
        return ""
    columns = list(rows[0])
    if fmt is OutputFormat.CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in columns])
        return buf.getvalue()
    return "\n".join(
        "  ".join(f"{col}={_cell(row.get(col))}" for col in columns) for row in rows
    ) + "\n"


def _record_row(record: CheckRecord) -> dict[str, Any]:
    return {
        "suite": record.suite,
        "theorem": record.theorem,
        "check": record.check,
        "status": record.status.value,
        "residual": record.residual,
        "tolerance": record.tolerance,
        "seconds": record.seconds,
        "message": record.message,
    }


def render_report(suite: str, records: Sequence[CheckRecord], fmt: OutputFormat) -> str:
    """Render a verification table: theorem, check, status, residual."""
    fmt = OutputFormat(fmt)
    rows = [_record_row(r) for r in records]
    if fmt is OutputFormat.JSON:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "suite": suite,
            "passed": all(r.passed for r in records),
            "checks": to_jsonable(rows),
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt is OutputFormat.CSV:
        return render_rows(rows, fmt)

    lines = [f"Suite: {suite}"]
    width = max((len(r.theorem) for r in records), default=0)
    for r in records:
        residual = "-" if r.residual is None else f"{r.residual:.3e}"
        lines.append(
            f"  [{r.status.value.upper():4}] {r.theorem:<{width}}  {r.check}"
            f"  residual={residual} tol={r.tolerance:.1e} ({r.seconds:.2f}s)"
        )
        if r.message:
            lines.append(f"         {r.message}")
    failed = sum(not r.passed for r in records)
    lines.append(f"{len(records) - failed}/{len(records)} checks passed")
    return "\n".join(lines) + "\n"


def _write(text: str, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_rows(rows: Sequence[Mapping[str, Any]], fmt: OutputFormat, path: Path) -> Path:
    """Write evaluation rows to ``path``.

    Raises:
        OSError: If the file cannot be written.
    """
    return _write(render_rows(rows, fmt), path)


def write_report(
    suite: str, records: Sequence[CheckRecord], fmt: OutputFormat, path: Path
) -> Path:
    """Write a verification table to ``path``.

    Raises:
        OSError: If the file cannot be written.
    """
    return _write(render_report(suite, records, fmt), path)
