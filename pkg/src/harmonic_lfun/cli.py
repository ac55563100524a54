"""Command-line interface."""

from __future__ import annotations

import math
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Any

import numpy as np
import typer
import yaml

from harmonic_lfun import __version__
from harmonic_lfun.config import (
    Budget,
    Command,
    OutputFormat,
    RunConfig,
    resolve_budget,
)
from harmonic_lfun.config.load import DEFAULT_PRESET
from harmonic_lfun.eisenstein import eval_E_realanalytic
from harmonic_lfun.errors import NumericalError
from harmonic_lfun.lfun import (
    DEFAULT_GRID_S,
    DEFAULT_GRID_Z,
    L_E2hat,
    L_E2hat_closed_form,
    L_z,
    limit_experiment,
)
from harmonic_lfun.modforms import singular_set_distance
from harmonic_lfun.report import (
    format_complex,
    render_report,
    render_rows,
    resolve_output_path,
    write_report,
    write_rows,
)
from harmonic_lfun.resolvent import Gw_truncated, calGw
from harmonic_lfun.verify import SUITES, all_passed, run_suite

# |J(z) - ray| below this (relative) earns a warning before evaluation
_NEAR_SINGULAR = 1e-6


def _make_logger(
    quiet: bool, verbose: bool = False
) -> tuple[Callable[..., None], Callable[..., None]]:
    """Create log and log_verbose functions for CLI output.

    Args:
        quiet: If True, suppress all output.
        verbose: If True, enable verbose logging (quiet overrides this).

    Returns:
        Tuple of (log, log_verbose) functions.
    """
    effective_verbose = verbose and not quiet

    def log(msg: str, color: str = "green", err: bool = False) -> None:
        if not quiet:
            typer.secho(msg, fg=color, err=err)

    def log_verbose(msg: str, color: str = "green", err: bool = False) -> None:
        if effective_verbose:
            typer.secho(msg, fg=color, err=err)

    return log, log_verbose


def version_callback(value: bool) -> None:
    """Print version and exit if --version flag is set."""
    if value:
        typer.echo(f"harmonic-lfun {__version__}")
        raise typer.Exit()


def parse_complex(text: str) -> complex:
    """Parse 1.4, 0.27+1.31i or 0.27+1.31j.

    Raises:
        typer.BadParameter: If the text is not a finite complex number.
    """
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    if cleaned.endswith("j") and (len(cleaned) == 1 or cleaned[-2] in "+-"):
        cleaned = cleaned[:-1] + "1j"
    try:
        value = complex(cleaned)
    except ValueError:
        raise typer.BadParameter(f"not a complex number: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise typer.BadParameter(f"must be finite: {text!r}")
    return value


def parse_list(text: str) -> list[complex]:
    """Comma-separated complex numbers."""
    return [parse_complex(part) for part in text.split(",") if part.strip()]


def parse_reals(text: str) -> list[float]:
    """Comma-separated real numbers."""
    values = parse_list(text)
    if any(v.imag for v in values):
        raise typer.BadParameter(f"expected real numbers: {text!r}")
    return [v.real for v in values]


app = typer.Typer(
    help="Evaluate generalized L-functions of polar harmonic Maass forms.",
    no_args_is_help=True,
    context_settings={"help_option_names": ["-h", "--help"]},
)

BudgetOpt = Annotated[
    str,
    typer.Option("--budget", "-b", help="Budget preset: fast, default or paranoid"),
]
ConfigOpt = Annotated[
    Path | None,
    typer.Option("--config", "-c", help="YAML budget file layered over the preset"),
]
FormatOpt = Annotated[
    OutputFormat,
    typer.Option("--format", "-f", help="Output format"),
]
OutputOpt = Annotated[
    Path | None,
    typer.Option(
        "--output",
        "-o",
        help="Output file (bare names go to $HARMONIC_LFUN_OUTPUT_DIR)",
    ),
]
QuietOpt = Annotated[
    bool,
    typer.Option("--quiet", "-q", help="Suppress output (exit code only)"),
]
VerboseOpt = Annotated[
    bool,
    typer.Option("--verbose", "-v", help="Show diagnostics"),
]


@app.callback(invoke_without_command=True)
def main(
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            "-V",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit",
        ),
    ] = False,
) -> None:
    """Evaluate generalized L-functions of polar harmonic Maass forms."""


def _load_run(
    command: Command,
    params: dict[str, Any],
    budget: str,
    config: Path | None,
    fmt: OutputFormat,
    output: Path | None,
    log: Callable[..., None],
    seed: int = 0,
) -> RunConfig:
    try:
        resolved: Budget = resolve_budget(budget, config)
        return RunConfig(
            command=command,
            params=params,
            output=resolve_output_path(output),
            format=fmt,
            seed=seed,
            budget=resolved,
        )
    except (FileNotFoundError, ValueError, yaml.YAMLError) as e:
        log(f"Error loading budget: {e}", color="red", err=True)
        raise typer.Exit(1) from None


def _warn_singular(z: complex, log: Callable[..., None]) -> None:
    try:
        dist = singular_set_distance(z)
    except NumericalError:
        return
    if dist.on_ray(_NEAR_SINGULAR):
        log(
            f"Warning: z = {format_complex(z)} is within {dist.distance_to_ray:.2e} "
            "of the singular set (J(z) real and >= 984)",
            color="yellow",
            err=True,
        )


def _emit_rows(
    run: RunConfig, rows: list[dict[str, Any]], log: Callable[..., None]
) -> None:
    if run.output is not None:
        try:
            path = write_rows(rows, run.format, run.output)
        except OSError as exc:
            log(f"Error writing output: {exc}", color="red", err=True)
            raise typer.Exit(1) from None
        log(f"Wrote {len(rows)} rows to {path}")
        return
    log(render_rows(rows, run.format).rstrip("\n"))


def _fail(exc: Exception, log: Callable[..., None]) -> typer.Exit:
    log(f"Error: {type(exc).__name__}: {exc}", color="red", err=True)
    return typer.Exit(1)


@app.command("eval-lz")
def eval_lz(
    z: Annotated[str, typer.Option("--z", help="Point of the upper half-plane")],
    s: Annotated[str, typer.Option("--s", help="Complex argument s")],
    t0: Annotated[float | None, typer.Option("--t0", help="Split point")] = None,
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.TEXT,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Evaluate L_z(s)."""
    log, log_verbose = _make_logger(quiet, verbose)
    zc, sc = parse_complex(z), parse_complex(s)
    run = _load_run(Command.EVAL_LZ, {"z": zc, "s": sc}, budget, config, fmt, output, log)
    q = run.budget.quadrature
    if t0 is not None:
        try:
            q = q.with_split(t0)
        except ValueError as exc:
            log(f"Error: invalid --t0: {exc}", color="red", err=True)
            raise typer.Exit(1) from None
    _warn_singular(zc, log)
    try:
        res = L_z(zc, sc, q)
    except NumericalError as exc:
        raise _fail(exc, log) from None
    log_verbose(f"Diagnostics: {res.diagnostics}")
    _emit_rows(run, [{"z": zc, "s": sc, "value": res.value, "err_est": res.err_est}], log)


@app.command("eval-le2")
def eval_le2(
    s: Annotated[str, typer.Option("--s", help="Complex argument s")],
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.TEXT,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Evaluate L(E2hat, s) by quadrature next to its closed form."""
    log, log_verbose = _make_logger(quiet, verbose)
    sc = parse_complex(s)
    run = _load_run(Command.EVAL_LE2, {"s": sc}, budget, config, fmt, output, log)
    try:
        res = L_E2hat(sc, run.budget.quadrature)
        closed = L_E2hat_closed_form(sc)
    except NumericalError as exc:
        raise _fail(exc, log) from None
    log_verbose(f"Diagnostics: {res.diagnostics}")
    row = {
        "s": sc,
        "value": res.value,
        "err_est": res.err_est,
        "closed_form": closed,
        "rel_error": abs(res.value - closed) / abs(closed),
    }
    _emit_rows(run, [row], log)


@app.command("eval-eisenstein")
def eval_eisenstein(
    w: Annotated[str, typer.Option("--w", help="Spectral parameter")],
    tau: Annotated[str, typer.Option("--tau", help="Point of the upper half-plane")],
    k: Annotated[int, typer.Option("--k", help="Even weight")] = 0,
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.TEXT,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Evaluate the real-analytic Eisenstein series E_k(w; tau)."""
    log, log_verbose = _make_logger(quiet, verbose)
    wc, tc = parse_complex(w), parse_complex(tau)
    run = _load_run(
        Command.EVAL_EISENSTEIN, {"k": k, "w": wc, "tau": tc}, budget, config, fmt, output, log
    )
    try:
        res = eval_E_realanalytic(k, wc, tc, run.budget.eisenstein)
    except NumericalError as exc:
        raise _fail(exc, log) from None
    log_verbose(f"Diagnostics: {res.diagnostics}")
    row = {"k": k, "w": wc, "tau": tc, "value": res.value, "err_est": res.err_est}
    _emit_rows(run, [row], log)


@app.command("eval-resolvent")
def eval_resolvent(
    w: Annotated[str, typer.Option("--w", help="Spectral parameter, Re(w) > 1")],
    z: Annotated[str, typer.Option("--z", help="First point")],
    tau: Annotated[str, typer.Option("--tau", help="Second point")],
    raised: Annotated[
        bool, typer.Option("--raised/--plain", help="Raised kernel or G_w itself")
    ] = True,
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.TEXT,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Evaluate the resolvent kernel by its truncated orbit sum."""
    log, log_verbose = _make_logger(quiet, verbose)
    wc, zc, tc = parse_complex(w), parse_complex(z), parse_complex(tau)
    params = {"w": wc, "z": zc, "tau": tc, "raised": raised}
    run = _load_run(Command.EVAL_RESOLVENT, params, budget, config, fmt, output, log)
    evaluate = calGw if raised else Gw_truncated
    try:
        res = evaluate(wc, zc, tc, run.budget.resolvent)
    except NumericalError as exc:
        raise _fail(exc, log) from None
    log_verbose(f"Diagnostics: {res.diagnostics}")
    row = {"w": wc, "z": zc, "tau": tc, "value": res.value, "err_est": res.err_est}
    _emit_rows(run, [row], log)


@app.command()
def verify(
    suite: Annotated[
        str,
        typer.Option("--suite", help=f"One of: {', '.join(SUITES)}"),
    ] = "all",
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.TEXT,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Run a suite of theorem checks; exit 1 if any check does not pass."""
    log, log_verbose = _make_logger(quiet, verbose)
    if suite not in SUITES:
        log(f"Error: Unknown suite '{suite}'", color="red", err=True)
        log(f"Choose from: {', '.join(SUITES)}", color="yellow", err=True)
        raise typer.Exit(1)
    run = _load_run(Command.VERIFY, {"suite": suite}, budget, config, fmt, output, log)
    log_verbose(f"Budget: {run.budget.name}")

    def progress(record: Any) -> None:
        color = "green" if record.passed else "red"
        log_verbose(f"[{record.status.value}] {record.theorem}: {record.check}", color)

    records = run_suite(suite, run.budget, on_record=progress)
    if run.output is not None:
        try:
            path = write_report(suite, records, run.format, run.output)
        except OSError as exc:
            log(f"Error writing report: {exc}", color="red", err=True)
            raise typer.Exit(1) from None
        log(f"Wrote report to {path}")
    else:
        log(render_report(suite, records, run.format).rstrip("\n"))

    if not all_passed(records):
        failed = sum(not r.passed for r in records)
        log(f"{failed} check(s) did not pass", color="red", err=True)
        raise typer.Exit(1)


@app.command()
def limit(
    s: Annotated[str, typer.Option("--s", help="Complex argument, Re s >= 1")],
    x: Annotated[float, typer.Option("--x", help="Real part of z, not an integer")],
    y: Annotated[
        str, typer.Option("--y", help="Comma-separated heights, at most 100")
    ] = "16,32,64",
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Fit the subtracted residual of L_(x+iy)(s) as y grows."""
    log, log_verbose = _make_logger(quiet, verbose)
    sc, ys = parse_complex(s), parse_reals(y)
    run = _load_run(Command.LIMIT, {"s": sc, "x": x, "y": ys}, budget, config, fmt, output, log)
    try:
        report = limit_experiment(sc, x, ys, run.budget.quadrature)
    except NumericalError as exc:
        raise _fail(exc, log) from None
    for warning in report.warnings:
        log(f"Warning: {warning}", color="yellow", err=True)
    log_verbose(f"Fit exponents: {report.exponents}")
    rows = [
        {
            "y": row.y,
            "L_z": row.value.value,
            "residual": row.residual,
            "fit_A": report.extrapolated,
            "target": report.target,
            "rel_error": report.rel_error,
        }
        for row in report.rows
    ]
    _emit_rows(run, rows, log)


def _random_points(n: int, seed: int) -> list[complex]:
    """Points of the strip |u| <= 1/2, 0.9 <= v <= 2.5 away from the singular set."""
    rng = np.random.default_rng(seed)
    points: list[complex] = []
    while len(points) < n:
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.5))
        if not singular_set_distance(z).on_ray(1e-3):
            points.append(z)
    return points


@app.command()
def sweep(
    z: Annotated[
        str | None, typer.Option("--z", help="Comma-separated points (default grid)")
    ] = None,
    s: Annotated[
        str | None, typer.Option("--s", help="Comma-separated arguments (default grid)")
    ] = None,
    random: Annotated[
        int, typer.Option("--random", help="Number of random points instead of --z")
    ] = 0,
    seed: Annotated[int, typer.Option("--seed", help="Seed for --random")] = 0,
    budget: BudgetOpt = DEFAULT_PRESET,
    config: ConfigOpt = None,
    fmt: FormatOpt = OutputFormat.CSV,
    output: OutputOpt = None,
    quiet: QuietOpt = False,
    verbose: VerboseOpt = False,
) -> None:
    """Evaluate L_z(s) over a grid with the functional-equation residual."""
    log, log_verbose = _make_logger(quiet, verbose)
    if random < 0:
        log("Error: --random must be >= 0", color="red", err=True)
        raise typer.Exit(1)
    zs = _random_points(random, seed) if random else (parse_list(z) if z else list(DEFAULT_GRID_Z))
    ss = parse_list(s) if s else list(DEFAULT_GRID_S)
    params = {"z": zs, "s": ss}
    run = _load_run(Command.SWEEP, params, budget, config, fmt, output, log, seed=seed)
    q = run.budget.quadrature

    rows = []
    for zc in zs:
        _warn_singular(zc, log)
        for sc in ss:
            try:
                res = L_z(zc, sc, q)
                mirror = L_z(zc, 2.0 - sc, q)
            except NumericalError as exc:
                raise _fail(exc, log) from None
            log_verbose(f"z={format_complex(zc)} s={format_complex(sc)} done")
            rows.append(
                {
                    "z": zc,
                    "s": sc,
                    "value": res.value,
                    "err_est": res.err_est,
                    "fe_residual": abs(res.value + mirror.value) / max(abs(res.value), 1.0),
                }
            )
    _emit_rows(run, rows, log)


if __name__ == "__main__":
    app()
