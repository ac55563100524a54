"""Theorem checks grouped into suites.

Each check computes one scalar residual and compares it with a fixed
tolerance. A check that raises a ``NumericalError`` is recorded as an
error rather than aborting the suite.
"""

from __future__ import annotations

import cmath
import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import special

from harmonic_lfun.config.load import get_preset
from harmonic_lfun.config.model import Budget, LatticeTruncation
from harmonic_lfun.eisenstein import (
    CosetSum,
    estimate_residue_E0,
    eval_E_realanalytic,
    extrapolate_ladder,
    hyperbolic_laplacian,
    maass_raise,
    raised_E0,
    residue_E0_at_1,
    scattering_phi,
    second_coefficient,
)
from harmonic_lfun.errors import NumericalError
from harmonic_lfun.lfun import (
    DEFAULT_GRID_S,
    DEFAULT_GRID_Z,
    Branch,
    I_ws,
    J_integral,
    L_E2hat,
    L_E2hat_closed_form,
    L_z,
    L_z_general,
    correction_coefficients,
    limit_experiment,
)
from harmonic_lfun.modforms import (
    M211,
    S,
    T,
    HalfPlanePoint,
    eval_Delta,
    eval_E2hat,
    eval_E4,
    eval_E6,
    eval_Hz,
    eval_J,
    eval_j,
    j_growth_residual,
    q_coefficients,
)
from harmonic_lfun.resolvent import (
    Gw_truncated,
    calGw,
    cusp_term_tau,
    cusp_term_z,
    estimate_calG1_residue,
    verify_prop_dGs,
)
from harmonic_lfun.specfun import (
    gamma,
    hyp1f1_asymptotic,
    hyp1f1_s_splus1,
    inc_gamma_asymptotic,
    inc_gamma_generalized,
    inc_gamma_upper,
    polylog,
    polylog_regularized,
    sigma1_dirichlet,
    xi,
    zeta,
)

__all__ = [
    "SUITES",
    "Check",
    "CheckRecord",
    "CheckStatus",
    "all_passed",
    "checks_for",
    "run_check",
    "run_suite",
]

SUITES = (
    "special-functions",
    "modular",
    "eisenstein",
    "resolvent",
    "l-functions",
    "functional-equation",
    "invariance",
    "harmonicity",
    "limit",
    "residues",
    "all",
)


class CheckStatus(str, Enum):
    """Outcome of one check."""

    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class CheckRecord(BaseModel):
    """One row of the traceability table."""

    model_config = ConfigDict(frozen=True)

    suite: str
    theorem: str
    check: str
    status: CheckStatus
    residual: float | None
    tolerance: float
    seconds: float
    message: str = ""

    @property
    def passed(self) -> bool:
        """Only PASS counts; FAIL and ERROR do not."""
        return self.status is CheckStatus.PASS


@dataclass(frozen=True)
class Check:
    """A registered check: a function of the budget returning a residual."""

    suite: str
    theorem: str
    name: str
    tolerance: float
    run: Callable[[Budget], float]


_REGISTRY: list[Check] = []


def _check(
    suite: str, theorem: str, name: str, tolerance: float
) -> Callable[[Callable[[Budget], float]], Callable[[Budget], float]]:
    def register(fn: Callable[[Budget], float]) -> Callable[[Budget], float]:
        _REGISTRY.append(Check(suite, theorem, name, tolerance, fn))
        return fn

    return register


def _rel(a: complex, b: complex, floor: float = 1e-300) -> float:
    return abs(a - b) / max(abs(b), floor)


def _rel1(a: complex, b: complex) -> float:
    """|a - b| / max(|b|, 1)."""
    return abs(a - b) / max(abs(b), 1.0)


# =============================================================================
# special-functions
# =============================================================================


@_check("special-functions", "incomplete gamma via 1F1", "Gamma(s,y1,y2) = 1F1 difference", 1e-10)
def _gamma_1f1(budget: Budget) -> float:
    worst = 0.0
    for s in (0.5, 1.5 + 0.7j, 2.3):
        for y1, y2 in ((0.5, 2.0), (1.0, 7.5)):

            def lower(y: float, s: complex = s) -> complex:
                return cmath.exp(s * math.log(y)) * hyp1f1_s_splus1(s, -y, budget.series).value

            identity = (lower(y2) - lower(y1)) / s
            worst = max(worst, _rel(inc_gamma_generalized(s, y1, y2), identity))
    return worst


@_check("special-functions", "incomplete gamma asymptotics", "error / first omitted term", 10.0)
def _gamma_envelope(budget: Budget) -> float:
    s, y = 1.5 + 0.5j, 30.0
    approx, nxt = inc_gamma_asymptotic(s, y, 8)
    return abs(inc_gamma_upper(s, y, budget.series) - approx) / abs(nxt)


@_check("special-functions", "1F1(s; s+1; y) asymptotics", "error / first omitted term", 10.0)
def _hyp1f1_envelope(budget: Budget) -> float:
    s, y = 0.7 + 0.4j, 35.0
    approx, nxt = hyp1f1_asymptotic(s, y, 6)
    return abs(hyp1f1_s_splus1(s, y, budget.series).value - approx) / abs(nxt)


@_check("special-functions", "xi(s) = xi(1 - s)", "max relative residual", 1e-10)
def _xi_symmetry(budget: Budget) -> float:
    return max(_rel(xi(1 - s), xi(s)) for s in (0.3 + 2.0j, 0.7 - 1.1j, 2.5 + 0.5j))


@_check("special-functions", "zeta(s) zeta(s-1) Dirichlet series", "partial sum at s = 3", 1e-9)
def _sigma1_series(budget: Budget) -> float:
    return _rel(sigma1_dirichlet(3.0, 200_000), zeta(3.0) * zeta(2.0))


@_check("special-functions", "regularized polylog limit", "|error ratio - 10| / 10", 0.3)
def _polylog_limit(budget: Budget) -> float:
    x = 0.3
    target = polylog(2, -x)
    errors = [abs(polylog_regularized(2, x, eps) - target) for eps in (1e-2, 1e-3, 1e-4)]
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    return max(abs(r - 10.0) / 10.0 for r in ratios)


# =============================================================================
# modular
# =============================================================================


@_check("modular", "J is SL2(Z) invariant", "max |J(gz) - J(z)| / |J(z)|", 1e-10)
def _j_invariance(budget: Budget) -> float:
    worst = 0.0
    for z in DEFAULT_GRID_Z:
        jz = eval_J(z)
        for g in (S, T, M211):
            worst = max(worst, _rel(eval_J(g.act(z)), jz))
    return worst


@_check("modular", "J(it) grows like e^(2 pi t)", "|J(2i) e^(-4 pi) - 1|", 1e-5)
def _j_growth(budget: Budget) -> float:
    return j_growth_residual(2.0)


@_check("modular", "Klein j at the elliptic points", "|j(i) - 1728| / 1728 + |j(rho)| / 1728", 1e-9)
def _klein_j(budget: Budget) -> float:
    rho = cmath.exp(2j * math.pi / 3.0)
    return abs(eval_j(1j) - 1728.0) / 1728.0 + abs(eval_j(rho)) / 1728.0


@_check("modular", "q-expansion coefficients", "E4, E6 and Delta leading coefficients", 0.5)
def _coefficients(budget: Budget) -> float:
    expected = {
        "E4": (1, 240, 2160, 6720),
        "E6": (1, -504, -16632, -122976),
        "Delta": (0, 1, -24, 252),
    }
    bad = sum(q_coefficients(name, 5)[:4] != tuple(vals) for name, vals in expected.items())
    return float(bad)


@_check("modular", "Delta = (E4^3 - E6^2) / 1728", "relative residual", 1e-10)
def _delta_identity(budget: Budget) -> float:
    tau = 0.1 + 1.1j
    return _rel((eval_E4(tau) ** 3 - eval_E6(tau) ** 2) / 1728.0, eval_Delta(tau))


# =============================================================================
# eisenstein
# =============================================================================


def _e0_fourier(w: float, tau: complex, n_max: int = 40) -> float:
    """E_0(w; tau) for real w from its K-Bessel expansion."""
    u, v = tau.real, tau.imag
    total = v**w + scattering_phi(w).real * v ** (1.0 - w)
    scale = 2.0 * math.pi**w * math.sqrt(v) / (gamma(w).real * zeta(2.0 * w).real)
    acc = 0.0
    for n in range(1, n_max + 1):
        sigma = sum(d ** (1.0 - 2.0 * w) for d in range(1, n + 1) if n % d == 0)
        acc += (
            2.0
            * n ** (w - 0.5)
            * sigma
            * special.kv(w - 0.5, 2.0 * math.pi * n * v)
            * math.cos(2.0 * math.pi * n * u)
        )
    return total + scale * acc


@_check("eisenstein", "E_0(w) lattice sum vs Fourier expansion", "relative residual at w = 1.5", 1e-3)
def _e0_fourier_check(budget: Budget) -> float:
    tau = 0.2 + 1.3j
    value = eval_E_realanalytic(0, 1.5, tau, budget.eisenstein).value
    return _rel(value, _e0_fourier(1.5, tau))


@_check("eisenstein", "raising R_0 E_0(w) = w E_2(w - 1)", "stencil vs termwise at w = 1.5", 1e-4)
def _raising(budget: Budget) -> float:
    tau = HalfPlanePoint(0.2, 1.3)
    frozen = CosetSum(0, 1.5 + 0j, tau, budget.eisenstein)
    stencil = maass_raise(0, frozen, tau)
    return _rel(stencil, raised_E0(1.5, tau, budget.eisenstein).value)


@_check("eisenstein", "R_0 E_0(w) -> E2hat as w -> 1", "ladder extrapolation of w E_2(w - 1)", 5e-2)
def _raising_at_one(budget: Budget) -> float:
    tau = HalfPlanePoint(0.2, 1.3)
    ladder = (1.3, 1.2, 1.1)
    samples = [raised_E0(w, tau, budget.eisenstein).value for w in ladder]
    return _rel(extrapolate_ladder(ladder, samples, 1.0).value, eval_E2hat(tau))


@_check("eisenstein", "Laplace eigenvalue of E_0(w)", "Delta E_0 vs w(1 - w) E_0 at w = 1.5", 1e-4)
def _eisenstein_eigen(budget: Budget) -> float:
    tau = HalfPlanePoint(0.2, 1.3)
    frozen = CosetSum(0, 1.5 + 0j, tau, budget.eisenstein)
    lap = hyperbolic_laplacian(0, frozen, tau)
    return _rel(lap, 1.5 * (1.0 - 1.5) * frozen(tau))


@_check("eisenstein", "E_2(w; it) = t^w + b t^(-w-1)", "second coefficient at w = 1.5", 1e-3)
def _second_coefficient(budget: Budget) -> float:
    w = 1.5
    b = second_coefficient(w).real
    worst = 0.0
    for t in (10.0, 15.0, 20.0):
        value = eval_E_realanalytic(2, w, 1j * t, budget.eisenstein).value
        estimate = (value - t**w) * t ** (w + 1.0)
        worst = max(worst, _rel(estimate, b))
    return worst


# =============================================================================
# resolvent
# =============================================================================


@_check("resolvent", "raised kernel at w = 1 is -2 pi i H_z*", "ladder extrapolation", 5e-2)
def _bridge(budget: Budget) -> float:
    return verify_prop_dGs(0.3 + 1.2j, -0.1 + 1.7j, tr=budget.resolvent).deviation


@_check("resolvent", "cusp growth of the raised kernel in tau", "tau = 0.1 + 4i at w = 2", 5e-2)
def _cusp_tau(budget: Budget) -> float:
    z, tau = 0.2 + 1.1j, HalfPlanePoint(0.1, 4.0)
    kernel = calGw(2.0, z, tau, budget.resolvent, strict=False).value
    main = cusp_term_tau(2.0, tau.v, z, budget.eisenstein).value
    return _rel(kernel, main)


@_check("resolvent", "cusp growth of the raised kernel in z", "z = 0.2 + 4i at w = 2", 5e-2)
def _cusp_z(budget: Budget) -> float:
    z, tau = HalfPlanePoint(0.2, 4.0), -0.1 + 1.7j
    kernel = calGw(2.0, z, tau, budget.resolvent, strict=False).value
    main = cusp_term_z(2.0, z.v, tau, budget.eisenstein).value
    return _rel(kernel, main)


@_check("resolvent", "raised kernel at w = 1 tends to 2 pi i E2hat as y grows", "z = 0.2 + 4i", 5e-2)
def _cusp_bridge(budget: Budget) -> float:
    tau = -0.1 + 1.7j
    report = verify_prop_dGs(0.2 + 4.0j, tau, tr=budget.resolvent)
    return _rel(report.extrapolated.value, 2j * math.pi * eval_E2hat(tau))


@_check("resolvent", "G_w is a Laplace eigenfunction in z", "relative residual at w = 2", 1e-2)
def _gw_eigen(budget: Budget) -> float:
    z, tau, w = 0.3 + 1.2j, -0.1 + 1.7j, 2.0
    tr = budget.resolvent

    def f(t: complex) -> complex:
        return Gw_truncated(w, t, tau, tr, strict=False).value

    lap = hyperbolic_laplacian(0, f, z, 1e-2 * z.imag, richardson=False)
    return _rel(lap, w * (1.0 - w) * f(z))


@_check("resolvent", "G_w settles as the lattice radius doubles", "radius 60 vs 120 at w = 2", 1e-2)
def _gw_radius(budget: Budget) -> float:
    z, tau = 0.3 + 1.2j, -0.1 + 1.7j
    tol = budget.resolvent.tol
    coarse = Gw_truncated(2.0, z, tau, LatticeTruncation(radius=60, tol=tol), strict=False)
    fine = Gw_truncated(2.0, z, tau, LatticeTruncation(radius=120, tol=tol), strict=False)
    return _rel(coarse.value, fine.value)


# =============================================================================
# l-functions
# =============================================================================


@_check("l-functions", "closed form of L(E2hat, s)", "max relative residual", 1e-8)
def _le2_closed_form(budget: Budget) -> float:
    q = budget.quadrature
    return max(
        _rel(L_E2hat(s, q).value, L_E2hat_closed_form(s))
        for s in (1.5, 2.5, 1.5 + 0.7j, -0.5)
    )


@_check("l-functions", "t0-independence", "spread over t0 in {0.5, 1, 2}", 1e-8)
def _t0_independence(budget: Budget) -> float:
    q = budget.quadrature
    worst = 0.0
    for evaluate in (
        lambda qq: L_E2hat(1.5 + 0.7j, qq).value,
        lambda qq: L_z(DEFAULT_GRID_Z[0], 1.4, qq).value,
    ):
        values = [evaluate(q.with_split(t0)) for t0 in (0.5, 1.0, 2.0)]
        worst = max(worst, max(_rel1(v, values[1]) for v in values))
    return worst


@_check("l-functions", "inversion of the H_z integrals", "J0(0, 1/y) + Jinf_(2-s)(y, inf)", 1e-8)
def _j_flip(budget: Budget) -> float:
    z, s, y = 0.3 + 1.2j, 1.4, 2.0
    q = budget.quadrature
    zero = J_integral(z, s, Branch.AT_ZERO, 0.0, 1.0 / y, q).value
    inf = J_integral(z, 2.0 - s, Branch.AT_INFINITY, y, math.inf, q).value
    return _rel1(zero, -inf)


@_check("l-functions", "continued integral at large w", "I_(w,s) at t0 = 0.6 vs direct transform at w = 3", 1e-3)
def _iws_direct(budget: Budget) -> float:
    # t0 != 1 exercises the folded branch of the continuation
    z, s = 0.27 + 1.31j, 1.4
    cont = I_ws(z, 3.0, s, t0=0.6, tr=budget.resolvent, q=budget.quadrature).value
    direct = L_z_general(z, 3.0, 0.0, s, budget.resolvent, budget.quadrature).value
    return _rel1(cont, direct)


# =============================================================================
# functional-equation
# =============================================================================


@_check("functional-equation", "L(E2hat, 2 - s) = -L(E2hat, s)", "absolute residual", 1e-9)
def _le2_fe(budget: Budget) -> float:
    s = 1.5 + 0.7j
    q = budget.quadrature
    return abs(L_E2hat(2.0 - s, q).value + L_E2hat(s, q).value)


@_check("functional-equation", "L_z(2 - s) = -L_z(s)", "max over the default grid", 1e-7)
def _lz_fe(budget: Budget) -> float:
    q = budget.quadrature
    worst = 0.0
    for z in DEFAULT_GRID_Z:
        for s in DEFAULT_GRID_S:
            value = L_z(z, s, q).value
            worst = max(worst, _rel1(-L_z(z, 2.0 - s, q).value, value))
    return worst


@_check("functional-equation", "I_(w,2-s) = -I_(w,s)", "relative residual at w = 1.8", 1e-3)
def _iws_fe(budget: Budget) -> float:
    z, s = 0.27 + 1.31j, 1.4 + 0.3j
    tr, q = budget.resolvent, budget.quadrature
    return _rel1(-I_ws(z, 1.8, 2.0 - s, tr=tr, q=q).value, I_ws(z, 1.8, s, tr=tr, q=q).value)


# =============================================================================
# invariance
# =============================================================================


@_check("invariance", "L_(gz)(s) = L_z(s)", "max over S, T, (2 1; 1 1) and the grid", 1e-7)
def _lz_invariance(budget: Budget) -> float:
    q = budget.quadrature
    s = DEFAULT_GRID_S[1]
    worst = 0.0
    for z in DEFAULT_GRID_Z:
        value = L_z(z, s, q).value
        for g in (S, T, M211):
            worst = max(worst, _rel1(L_z(g.act(z), s, q).value, value))
    return worst


# =============================================================================
# harmonicity
# =============================================================================


@_check("harmonicity", "z -> L_z(s) is harmonic", "|stencil ratio at h, h/2 - 4|", 0.8)
def _lz_harmonic(budget: Budget) -> float:
    z, s = DEFAULT_GRID_Z[0], DEFAULT_GRID_S[0]
    q = budget.quadrature

    def f(tau: complex) -> complex:
        return L_z(tau, s, q).value

    h = 1e-2 * z.imag
    coarse = hyperbolic_laplacian(0, f, z, h, richardson=False)
    fine = hyperbolic_laplacian(0, f, z, h / 2.0, richardson=False)
    return abs(abs(coarse) / abs(fine) - 4.0)


@_check("harmonicity", "I_(w,s) is a Laplace eigenfunction", "relative residual at w = 1.6", 1e-2)
def _iws_eigen(budget: Budget) -> float:
    z, w, s = 0.27 + 1.31j, 1.6, 1.4
    tr, q = budget.resolvent, budget.quadrature

    def f(tau: complex) -> complex:
        return I_ws(tau, w, s, tr=tr, q=q).value

    lap = hyperbolic_laplacian(0, f, z, 0.05 * z.imag, richardson=False)
    return _rel(lap, w * (1.0 - w) * f(z))


# =============================================================================
# limit
# =============================================================================


@_check("limit", "approach of L_(x+iy)(s) to 2 pi i L(E2hat, s)", "fit at s = 1.5, x = 0.3", 1e-2)
def _limit(budget: Budget) -> float:
    return limit_experiment(1.5, 0.3, (16.0, 32.0, 64.0), budget.quadrature).rel_error


@_check("limit", "correction coefficients", "C_0, the Arg term, C_2 and x = 1/2 parity", 1e-12)
def _coefficient_structure(budget: Budget) -> float:
    s, x = 1.5 + 0.2j, 0.3
    coeffs = correction_coefficients(s, x)
    arg = cmath.phase(1.0 - cmath.exp(2j * math.pi * x))
    half = correction_coefficients(3.5, 0.5).C
    # Li_2(-1) = -pi^2/12 fixes C_2 at x = 1/2
    second = correction_coefficients(2.5, 0.5).C[2]
    return max(
        abs(coeffs.C[0] - 2j * math.pi / s),
        abs(coeffs.C[1] - 2.0 * arg),
        max(abs(c) for c in half[1::2]),
        abs(second - 1j * math.pi / 8.0),
    )


# =============================================================================
# residues
# =============================================================================


@_check("residues", "(s - 1) L(E2hat, s) -> 6/pi", "relative residual at s = 1 + 1e-4", 1e-3)
def _le2_residue(budget: Budget) -> float:
    delta = 1e-4
    return _rel(delta * L_E2hat(1.0 + delta, budget.quadrature).value, 6.0 / math.pi)


@_check("residues", "2 pi i (z - tau) H_z(tau) -> 1", "offset extrapolation", 1e-3)
def _hz_residue(budget: Budget) -> float:
    tau = 0.27 + 1.31j
    direction = (1.0 + 1.0j) / math.sqrt(2.0)
    offsets = (2e-3, 1e-3)
    samples = []
    for delta in offsets:
        z = tau + delta * direction
        samples.append(2j * math.pi * (z - tau) * eval_Hz(z, tau))
    return _rel(extrapolate_ladder(offsets, samples, 0.0).value, 1.0)


@_check("residues", "(z - tau) G_1(z, tau) -> -1", "offset and ladder extrapolation", 5e-2)
def _calg1_residue(budget: Budget) -> float:
    return _rel(estimate_calG1_residue(0.27 + 1.31j, tr=budget.resolvent).value, -1.0)


@_check("residues", "(w - 1) E_0(w) -> 3/pi", "ladder extrapolation", 5e-2)
def _e0_residue(budget: Budget) -> float:
    z = 0.2 + 1.3j
    return _rel(estimate_residue_E0(z, budget.eisenstein).value, residue_E0_at_1(z))


# =============================================================================
# Running
# =============================================================================


def checks_for(suite: str) -> list[Check]:
    """Checks of a suite in registration order.

    Raises:
        ValueError: If the suite name is unknown.
    """
    if suite not in SUITES:
        raise ValueError(f"Unknown suite '{suite}' (choose from {', '.join(SUITES)})")
    if suite == "all":
        return list(_REGISTRY)
    return [c for c in _REGISTRY if c.suite == suite]


def run_check(check: Check, budget: Budget) -> CheckRecord:
    """Run one check, turning numerical failures into an error record."""
    start = time.perf_counter()
    residual: float | None = None
    message = ""
    try:
        residual = float(check.run(budget))
    except NumericalError as exc:
        status = CheckStatus.ERROR
        message = f"{type(exc).__name__}: {exc}"
    else:
        if np.isfinite(residual) and residual <= check.tolerance:
            status = CheckStatus.PASS
        else:
            status = CheckStatus.FAIL
    return CheckRecord(
        suite=check.suite,
        theorem=check.theorem,
        check=check.name,
        status=status,
        residual=residual,
        tolerance=check.tolerance,
        seconds=time.perf_counter() - start,
        message=message,
    )


def run_suite(
    suite: str,
    budget: Budget | None = None,
    on_record: Callable[[CheckRecord], None] | None = None,
) -> list[CheckRecord]:
    """Run every check of ``suite`` under ``budget``.

    Args:
        suite: One of ``SUITES``.
        budget: Numerical budgets; the default preset when omitted.
        on_record: Called with each record as soon as it is available.

    Raises:
        ValueError: If the suite name is unknown.
    """
    budget = budget or get_preset("default")
    records = []
    for check in checks_for(suite):
        record = run_check(check, budget)
        if on_record is not None:
            on_record(record)
        records.append(record)
    return records


def all_passed(records: Iterable[CheckRecord]) -> bool:
    """True if every record passed."""
    return all(r.passed for r in records)
