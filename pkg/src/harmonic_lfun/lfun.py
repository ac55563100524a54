"""Regularized Mellin transforms along the imaginary axis.

Everything here integrates a weight-two form f(it) against t^(s-1). The
part of an integral below t = 1 is never evaluated near the real line: the
weight-two relation f(it) = -t^-2 f(i/t) moves it above t = 1 first, where
the q-expansions converge fast.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from harmonic_lfun.config.model import LatticeTruncation, QuadratureSpec
from harmonic_lfun.eisenstein import eval_E_realanalytic
from harmonic_lfun.errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    FitError,
    ParameterError,
    PoleError,
    SingularSetError,
)
from harmonic_lfun.modforms import (
    V_MIN,
    HalfPlanePoint,
    as_point,
    e2_minus_one_axis,
    hz_minus_one_axis,
    reduce_to_fundamental_domain,
    singular_set_distance,
)
from harmonic_lfun.quadrature import gauss_kronrod
from harmonic_lfun.resolvent import calGw_axis
from harmonic_lfun.results import EvalResult
from harmonic_lfun.specfun import (
    cpow,
    gamma,
    inc_gamma_upper,
    polylog,
    rising_factorial,
    zeta,
)

__all__ = [
    "DEFAULT_GRID_S",
    "DEFAULT_GRID_Z",
    "GENERAL_MIN_W",
    "Branch",
    "CorrectionCoefficients",
    "GeneralizedWeights",
    "LimitReport",
    "LimitRow",
    "I_ws",
    "J_integral",
    "L_E2hat",
    "L_E2hat_closed_form",
    "L_z",
    "L_z_general",
    "correction_coefficients",
    "limit_experiment",
    "limit_target",
    "subtracted_residual",
    "arg_form_residual",
]

DEFAULT_GRID_Z = (0.27 + 1.31j, -0.41 + 0.87j, 0.13 + 2.2j)
DEFAULT_GRID_S = (1.4 + 0j, 1.5 + 0.3j, 0.7 + 1.1j)
MAX_LIMIT_Y = 100.0
# smallest Re(w) the direct damped transform is evaluated at
GENERAL_MIN_W = 2.5
_SINGULAR_TOL = 1e-10
_PARAM_TOL = 1e-12
_TWO_PI = 2.0 * math.pi
# sum sigma_1(n) e^(-2 pi n t) <= 1.01 e^(-2 pi t) for t >= 1
_E2_TAIL_CONST = 25.0


class Branch(str, Enum):
    """Which growth of H_z(it) is subtracted."""

    AT_ZERO = "at_zero"
    AT_INFINITY = "at_infinity"


def _power(t: np.ndarray, s: complex) -> np.ndarray:
    return np.exp(complex(s) * np.log(t))


def _check_s(s: complex, poles: Sequence[int], what: str) -> complex:
    s = complex(s)
    for p in poles:
        if s == p:
            raise PoleError(f"{what} has a pole at s = {p}")
    return s


def _integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    q: QuadratureSpec,
    breakpoints: Sequence[float] = (),
) -> EvalResult:
    res = gauss_kronrod(
        f,
        a,
        b,
        abs_tol=q.abs_tol,
        rel_tol=q.rel_tol,
        max_subdiv=q.max_subdiv,
        breakpoints=breakpoints,
    )
    diagnostics = {"panels": res.panels, "evaluations": res.evaluations}
    if res.floor_limited:
        diagnostics["warnings"] = [f"quadrature on [{a:g}, {b:g}] hit the rounding floor"]
    return EvalResult(res.value, res.err_est, diagnostics)


def _tail_bound(const: float, sigma: float, cutoff: float) -> float:
    """Bound on |int_T^inf const e^(-2 pi t) t^(sigma-1) dt|."""
    return const * (_TWO_PI ** (-sigma)) * abs(inc_gamma_upper(sigma, _TWO_PI * cutoff))


# =============================================================================
# L(E2hat, s)
# =============================================================================


def _e2_minus_one(t: np.ndarray) -> np.ndarray:
    """E2(it) - 1 for any t > 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    high = t >= V_MIN
    out[high] = e2_minus_one_axis(t[high])
    if np.any(~high):
        low = t[~high]
        # E2(it) = -t^-2 E2(i/t) + 6/(pi t)
        e2_inv = 1.0 + e2_minus_one_axis(1.0 / low)
        out[~high] = -e2_inv / low**2 + 6.0 / (math.pi * low) - 1.0
    return out


def _e2_mellin(s: complex, a: float, q: QuadratureSpec) -> EvalResult:
    """int_a^inf (E2(it) - 1) t^(s-1) dt."""
    cutoff = max(a + 1.0, q.tail_T or 0.0, 7.0)
    res = _integrate(lambda t: _e2_minus_one(t) * _power(t, s - 1.0), a, cutoff, q)
    tail = _tail_bound(_E2_TAIL_CONST, s.real, cutoff)
    return res.shifted(0.0, tail)


def L_E2hat(s: complex, q: QuadratureSpec | None = None) -> EvalResult:
    """Completed L-function of the weight-two harmonic Eisenstein series.

    With M(s; a) the integral of (E2(it) - 1) t^(s-1) over [a, inf), the
    weight-two relation turns the regularized integral over (0, t0) into
    -M(2 - s; 1/t0), so

        L = M(s; t0) - M(2 - s; 1/t0) - t0^s/s - t0^(s-2)/(s-2)
            + (6/pi) t0^(s-1)/(s-1).

    Raises:
        PoleError: At s = 0, 1, 2.
    """
    q = q or QuadratureSpec()
    s = _check_s(s, (0, 1, 2), "L(E2hat, s)")
    t0 = q.t0
    upper = _e2_mellin(s, t0, q)
    lower = _e2_mellin(2.0 - s, 1.0 / t0, q)
    boundary = (
        -cpow(t0, s) / s
        - cpow(t0, s - 2.0) / (s - 2.0)
        + 6.0 / math.pi * cpow(t0, s - 1.0) / (s - 1.0)
    )
    return (upper - lower).shifted(boundary)


def L_E2hat_closed_form(s: complex) -> complex:
    """-24 (2 pi)^-s Gamma(s) zeta(s) zeta(s - 1)."""
    s = _check_s(s, (0, 1, 2), "L(E2hat, s)")
    return -24.0 * cpow(_TWO_PI, -s) * gamma(s) * zeta(s) * zeta(s - 1.0)


def limit_target(s: complex) -> complex:
    """2 pi i L(E2hat, s) = -24 i (2 pi)^(1-s) Gamma(s) zeta(s) zeta(s - 1)."""
    return 2j * math.pi * L_E2hat_closed_form(s)


# =============================================================================
# Integrals of H_z along the imaginary axis
# =============================================================================


@dataclass(frozen=True)
class _AxisData:
    """J(z) and the heights where the integrand of z changes character."""

    jz: complex
    y: float
    breakpoints: tuple[float, ...]

    @classmethod
    def of(cls, z: HalfPlanePoint | complex, q: QuadratureSpec) -> _AxisData:
        dist = singular_set_distance(z)
        if dist.on_ray(_SINGULAR_TOL):
            raise SingularSetError(
                f"z = {as_point(z)} lies on the orbit of the imaginary axis "
                f"(J(z) = {dist.j_value})"
            )
        reduced, _ = reduce_to_fundamental_domain(z)
        points: set[float] = {1.0}
        if q.near_pole_refine:
            # J(it) is real and increasing for t >= 1; it passes Re J(z) near t_star
            t_star = math.log(max(dist.j_value.real, 984.0) + 744.0) / _TWO_PI
            for t in (reduced.v, t_star):
                points.update({t, 1.0 / t})
        return cls(dist.j_value, reduced.v, tuple(sorted(points)))

    def default_cutoff(self) -> float:
        return self.y + 3.0 + math.log1p(abs(self.jz)) / _TWO_PI

    def h(self, t: np.ndarray) -> np.ndarray:
        """H_z(it) - 1 for t >= 1."""
        return hz_minus_one_axis(self.jz, t)

    def minus_one(self, t: np.ndarray) -> np.ndarray:
        """H_z(it) - 1 for any t > 0."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        high = t >= 1.0
        out[high] = self.h(t[high])
        low = t[~high]
        if low.size:
            out[~high] = -(1.0 + self.h(1.0 / low)) / low**2 - 1.0
        return out

    def plus_inverse_square(self, t: np.ndarray) -> np.ndarray:
        """H_z(it) + t^-2 for any t > 0."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        high = t >= 1.0
        th = t[high]
        out[high] = 1.0 + self.h(th) + 1.0 / th**2
        low = t[~high]
        if low.size:
            out[~high] = -self.h(1.0 / low) / low**2
        return out

    def tail(self, sigma: float, cutoff: float) -> float:
        return _tail_bound(2.0 * (1.0 + abs(self.jz)), sigma, cutoff)


def _interior(points: Sequence[float], a: float, b: float) -> list[float]:
    return [p for p in points if a < p < b]


def J_integral(
    z: HalfPlanePoint | complex,
    s: complex,
    branch: Branch | str,
    y1: float,
    y2: float,
    q: QuadratureSpec | None = None,
) -> EvalResult:
    """Integral of H_z(it) with its growth at 0 or at i infinity removed.

    ``at_zero`` integrates (H_z(it) + t^-2) t^(s-1) over [y1, y2] (y2 finite,
    y1 may be 0); ``at_infinity`` integrates (H_z(it) - 1) t^(s-1) (y1 > 0,
    y2 may be infinite). Infinite ranges stop at ``q.tail_T`` (or at
    y + 3 + log(1 + |J(z)|)/(2 pi)) and the rest is bounded analytically.

    Raises:
        SingularSetError: If z lies on the orbit of the imaginary axis.
        PoleProximityError: If the integrand passes too close to its pole.
        ParameterError: For an unsupported range.
    """
    q = q or QuadratureSpec()
    s = complex(s)
    branch = Branch(branch)
    if not 0.0 <= y1 < y2:
        raise ParameterError(f"need 0 <= y1 < y2, got [{y1}, {y2}]")
    data = _AxisData.of(z, q)
    cutoff = max(q.tail_T or data.default_cutoff(), 2.0)

    if branch is Branch.AT_INFINITY:
        if y1 == 0.0:
            raise ParameterError("the at_infinity integral needs y1 > 0")
        hi = y2 if math.isfinite(y2) else max(cutoff, y1 + 1.0)
        res = _integrate(
            lambda t: data.minus_one(t) * _power(t, s - 1.0),
            y1,
            hi,
            q,
            _interior(data.breakpoints, y1, hi),
        )
        if not math.isfinite(y2):
            res = res.shifted(0.0, data.tail(s.real, hi))
        return res

    if not math.isfinite(y2):
        raise ParameterError("the at_zero integral needs a finite y2")
    lo = y1 if y1 > 0.0 else min(1.0 / cutoff, 0.5 * y2)
    res = _integrate(
        lambda t: data.plus_inverse_square(t) * _power(t, s - 1.0),
        lo,
        y2,
        q,
        _interior(data.breakpoints, lo, y2),
    )
    if y1 == 0.0:
        res = res.shifted(0.0, data.tail(2.0 - s.real, 1.0 / lo))
    return res


def L_z(
    z: HalfPlanePoint | complex, s: complex, q: QuadratureSpec | None = None
) -> EvalResult:
    """Generalized L-function L_z(s) through the H_z decomposition.

    L_z(s) = 2 pi i [ L(E2hat, s) - J0(0, t0) - Jinf(t0, inf)
                      + t0^s/s + t0^(s-2)/(s-2) ].

    Raises:
        PoleError: At s = 0, 1, 2.
        SingularSetError: If z lies on the orbit of the imaginary axis.
    """
    q = q or QuadratureSpec()
    s = _check_s(s, (0, 1, 2), "L_z(s)")
    t0 = q.t0
    eis = L_E2hat(s, q)
    at_zero = J_integral(z, s, Branch.AT_ZERO, 0.0, t0, q)
    at_inf = J_integral(z, s, Branch.AT_INFINITY, t0, math.inf, q)
    boundary = cpow(t0, s) / s + cpow(t0, s - 2.0) / (s - 2.0)
    return (eis - at_zero - at_inf).shifted(boundary).scaled(2j * math.pi)


# =============================================================================
# The family I_{w,s} built on the raised resolvent kernel
# =============================================================================


def _power_integral(alpha: complex, a: float, b: float) -> complex:
    """int_a^b t^(alpha-1) dt."""
    if alpha == 0:
        return complex(math.log(b / a))
    return (cpow(b, alpha) - cpow(a, alpha)) / alpha


class _KernelOnAxis:
    """Raised kernel at tau = it, memoised by t so integrals can share nodes."""

    def __init__(self, w: complex, z: HalfPlanePoint, tr: LatticeTruncation) -> None:
        self.w = w
        self.z = z
        self.tr = tr
        self.cache: dict[float, complex] = {}
        self.worst = 0.0

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        missing = np.array([x for x in np.unique(t) if float(x) not in self.cache])
        if missing.size:
            values, err = calGw_axis(self.w, self.z, missing, self.tr)
            self.worst = max(self.worst, err)
            self.cache.update(zip(map(float, missing), values, strict=True))
        return np.array([self.cache[float(x)] for x in t.ravel()]).reshape(t.shape)


def _growth_constant(w: complex) -> complex:
    """2 pi i (w - 1) / (1 - 2w), the coefficient of E_0(w; z) v^-w."""
    return 2j * math.pi * (w - 1.0) / (1.0 - 2.0 * w)


def I_ws(
    z: HalfPlanePoint | complex,
    w: complex,
    s: complex,
    t0: float | None = None,
    tr: LatticeTruncation | None = None,
    q: QuadratureSpec | None = None,
) -> EvalResult:
    """Continuation I_{w,s}(z) of the Mellin transform of the raised kernel.

    At w = 1 the boundary terms collapse and the value is L_z(s).
    Otherwise, with A = 2 pi i (w-1)/(1-2w) and
    K(a, p) = int_a^inf (G(z, it) - A E_0(w; z) t^-w) t^(p-1) dt, the
    weight-two relation gives

        I = K(t0, s) - K(1/t0, 2 - s) - E1 - E2,

    E1 = A E_0 t0^(s+w-2)/(s+w-2) and E2 = A E_0 t0^(s-w)/(s-w). Only
    t >= 1 is summed over the lattice; the rest of each K is mapped there.

    Raises:
        ParameterError: For w in {1/2, s, 2 - s} or Re(w) < 1.3 off w = 1.
        pydantic.ValidationError: If ``t0`` is not a valid split point for ``q``.
    """
    q = q or QuadratureSpec()
    w, s = complex(w), complex(s)
    t0 = q.t0 if t0 is None else t0
    if w == 1:
        return L_z(z, s, q.with_split(t0))
    if any(abs(w - bad) < _PARAM_TOL for bad in (0.5, s, 2.0 - s)):
        raise ParameterError(f"I_(w,s) is singular at w = {w} for s = {s}")
    if w.real < 1.3:
        raise ParameterError(f"the lattice path needs Re(w) >= 1.3, got {w}")
    tr = tr or LatticeTruncation(radius=60)
    reduced, _ = reduce_to_fundamental_domain(z)
    e0 = eval_E_realanalytic(0, w, reduced)
    growth = _growth_constant(w) * e0.value
    kernel = _KernelOnAxis(w, reduced, tr)
    upper = reduced.v + 1.0 / reduced.v + 8.0
    rel_tol = max(q.rel_tol, 1e-7)
    quad = q.model_copy(update={"rel_tol": rel_tol, "abs_tol": max(q.abs_tol, 1e-10)})
    near = _interior((reduced.v, 1.0 / reduced.v), 1.0, upper)

    def direct(p: complex, lo: float, hi: float) -> EvalResult:
        def f(t: np.ndarray) -> np.ndarray:
            return (kernel(t) - growth * _power(t, -w)) * _power(t, p - 1.0)

        return _integrate(f, lo, hi, quad, _interior(near, lo, hi))

    def k_of(a: float, p: complex) -> EvalResult:
        if a >= 1.0:
            return direct(p, a, upper)
        folded = direct(2.0 - p, 1.0, 1.0 / a)
        closed = growth * (
            _power_integral(2.0 - p - w, 1.0, 1.0 / a) + _power_integral(p - w, a, 1.0)
        )
        return (direct(p, 1.0, upper) - folded).shifted(-closed)

    e1 = growth * cpow(t0, s + w - 2.0) / (s + w - 2.0)
    e2 = growth * cpow(t0, s - w) / (s - w)
    result = (k_of(t0, s) - k_of(1.0 / t0, 2.0 - s)).shifted(-(e1 + e2))
    span = upper - 1.0
    return EvalResult(
        result.value,
        result.err_est + kernel.worst * span * (1.0 + abs(s)),
        {
            **result.diagnostics,
            "radius": tr.radius,
            "kernel_evaluations": len(kernel.cache),
            "upper": upper,
        },
    )


@dataclass(frozen=True)
class GeneralizedWeights:
    """Damping r_z(it)^s0 r_z(i/t)^s0, r_z(tau) = |(tau - z)/(tau - conj z)|."""

    s0: complex
    z: complex

    def r(self, tau: np.ndarray) -> np.ndarray:
        """r_z at each tau."""
        tau = np.asarray(tau, dtype=complex)
        return np.abs((tau - self.z) / (tau - np.conj(self.z)))

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        product = self.r(1j * t) * self.r(1j / t)
        if self.s0 == 0:
            return np.ones(t.shape, dtype=complex)
        return np.exp(self.s0 * np.log(product))


def L_z_general(
    z: HalfPlanePoint | complex,
    w: complex,
    s0: complex,
    s: complex,
    tr: LatticeTruncation | None = None,
    q: QuadratureSpec | None = None,
) -> EvalResult:
    """Damped Mellin transform of the raised kernel for large Re(w).

    Split at t = 1 as J_s(1) - J_(2-s)(1), where J_p(1) integrates
    G_w(z, it) W(t) t^(p-1) over [1, inf) and W is symmetric under t -> 1/t.
    Beyond T = y + 1/y + 8 the kernel is replaced by its growth A E_0 t^-w.

    Raises:
        ConvergenceError: If Re(w) < GENERAL_MIN_W or Re(w) <= max(Re s, 2 - Re s),
            or if z lies on the orbit of the imaginary axis and Re(s0) < 1.
    """
    q = q or QuadratureSpec()
    w, s0, s = complex(w), complex(s0), complex(s)
    if w.real < GENERAL_MIN_W or w.real <= max(s.real, 2.0 - s.real):
        raise ConvergenceError(
            "the integral converges only for Re(w) > max(Re s, 2 - Re s) and is "
            f"evaluated for Re(w) >= {GENERAL_MIN_W}; w = {w}, s = {s}"
        )
    if singular_set_distance(z).on_ray(_SINGULAR_TOL) and s0.real < 1.0:
        raise ConvergenceError("z on the singular set needs Re(s0) >= 1")
    tr = tr or LatticeTruncation(radius=60)
    point = as_point(z)
    reduced, _ = reduce_to_fundamental_domain(point)
    weights = GeneralizedWeights(s0, point.tau)
    kernel = _KernelOnAxis(w, reduced, tr)
    growth = _growth_constant(w) * eval_E_realanalytic(0, w, reduced).value
    upper = reduced.v + 1.0 / reduced.v + 8.0
    quad = q.model_copy(
        update={"rel_tol": max(q.rel_tol, 1e-7), "abs_tol": max(q.abs_tol, 1e-10)}
    )
    near = _interior((reduced.v, 1.0 / reduced.v, point.v, 1.0 / point.v), 1.0, upper)

    def calj(p: complex) -> EvalResult:
        body = _integrate(
            lambda t: kernel(t) * weights(t) * _power(t, p - 1.0), 1.0, upper, quad, near
        )
        # int_T^inf t^(p-1-w) W(t) dt = int_0^(1/T) u^(w-p-1) W(1/u) du
        alpha = w - p
        smooth = _integrate(
            lambda u: _power(u, alpha - 1.0) * (weights(1.0 / u) - 1.0),
            0.0,
            1.0 / upper,
            quad,
        )
        tail = smooth.shifted(cpow(1.0 / upper, alpha) / alpha).scaled(growth)
        return body + tail

    result = calj(s) - calj(2.0 - s)
    return EvalResult(
        result.value,
        result.err_est + kernel.worst * (upper - 1.0) * (1.0 + abs(s)),
        {**result.diagnostics, "radius": tr.radius, "upper": upper},
    )


# =============================================================================
# The approach to i infinity
# =============================================================================


@dataclass(frozen=True)
class CorrectionCoefficients:
    """C_(l,s)(x) for l = 0..floor(Re s)."""

    s: complex
    x: float
    C: tuple[complex, ...]

    def power_sum(self, y: float) -> complex:
        """sum_l C_l y^(s - l)."""
        return sum(
            (c * cpow(y, self.s - ell) for ell, c in enumerate(self.C)), start=0j
        )


def correction_coefficients(s: complex, x: float) -> CorrectionCoefficients:
    """Polylogarithm coefficients of the growing powers of y in L_(x+iy)(s).

    Raises:
        BranchError: If x is an integer.
    """
    s = complex(s)
    if x == math.floor(x):
        raise BranchError(f"C_(l,s)(x) needs a non-integer x, got x = {x}")
    top = math.floor(s.real)
    coeffs: list[complex] = []
    for ell in range(0, top + 1):
        if ell == 0:
            coeffs.append(2j * math.pi / s)
            continue
        li = polylog(ell, x)
        scale = rising_factorial(1.0 - s, ell - 1) / _TWO_PI**ell
        if ell % 2 == 0:
            coeffs.append(4j * math.pi * scale * li.real)
        else:
            coeffs.append(-4.0 * math.pi * scale * li.imag)
    return CorrectionCoefficients(s, float(x), tuple(coeffs))


def subtracted_residual(s: complex, x: float, y: float, value: complex) -> complex:
    """L_(x+iy)(s) minus its growing powers of y."""
    s = complex(s)
    return (
        value
        - correction_coefficients(s, x).power_sum(y)
        + correction_coefficients(2.0 - s, x).power_sum(y)
    )


def arg_form_residual(s: complex, x: float, y: float, value: complex) -> complex:
    """The subtraction for 1 < Re s < 2 written with Arg(1 - e^(2 pi i x)).

    This is the literal form L - 2 pi i y^s / s - 2 pi i y^(2-s) / (s-2)
    + 2 Arg(1 - e^(2 pi i x)) y^(s-1). Its y^(s-1) term has the opposite
    sign of C_(1,s)(x) = 2 Arg(1 - e^(2 pi i x)); ``subtracted_residual``
    is the form that converges.

    Raises:
        DomainError: Unless 1 < Re s < 2.
    """
    s = complex(s)
    if not 1.0 < s.real < 2.0:
        raise DomainError(f"the Arg form applies for 1 < Re s < 2, got s = {s}")
    arg = cmath.phase(1.0 - cmath.exp(2j * math.pi * x))
    return (
        value
        - 2j * math.pi * cpow(y, s) / s
        - 2j * math.pi * cpow(y, 2.0 - s) / (s - 2.0)
        + 2.0 * arg * cpow(y, s - 1.0)
    )


@dataclass(frozen=True)
class LimitRow:
    """One height of the ladder: L_(x+iy)(s) and its subtracted residual."""

    y: float
    value: EvalResult
    residual: complex


@dataclass(frozen=True)
class LimitReport:
    """Residuals along the y ladder and their extrapolation to y = infinity."""

    s: complex
    x: float
    rows: tuple[LimitRow, ...]
    exponents: tuple[complex, ...]
    fit: tuple[complex, ...]
    target: complex
    coefficients: CorrectionCoefficients
    mirrored: CorrectionCoefficients
    warnings: list[str] = field(default_factory=list)

    @property
    def extrapolated(self) -> complex:
        """The fitted constant A."""
        return self.fit[0]

    @property
    def rel_error(self) -> float:
        """Relative distance of the fitted limit from the target."""
        return abs(self.extrapolated - self.target) / abs(self.target)


def _fit_exponents(s: complex) -> tuple[complex, complex]:
    """Decay rates of the first omitted powers of both sums."""
    first = math.floor(s.real) + 1.0 - s
    second = math.floor(2.0 - s.real) + s - 1.0
    if abs(first - second) < 1e-9:
        return first, first + 0.5
    return first, second


def limit_experiment(
    s: complex,
    x: float,
    y_ladder: Sequence[float],
    q: QuadratureSpec | None = None,
) -> LimitReport:
    """Subtract the growing powers of y from L_(x+iy)(s) and extrapolate.

    R(y) is fitted as A + B y^-a1 + C y^-a2 with a1, a2 the decay rates of
    the first omitted powers; A is compared with 2 pi i L(E2hat, s).

    Raises:
        DomainError: If Re s < 1, s or x is an integer, or some y > 100.
        FitError: If the fit is ill-conditioned or the residuals do not
            approach A along the ladder.
    """
    q = q or QuadratureSpec()
    s = complex(s)
    ys = sorted(float(y) for y in y_ladder)
    if s.real < 1.0:
        raise DomainError(f"the limit is taken for Re s >= 1, got s = {s}")
    if s.imag == 0 and s.real == math.floor(s.real):
        raise DomainError(f"s = {s.real:g} is an integer")
    if x == math.floor(x):
        raise DomainError(f"x = {x} is an integer")
    if len(ys) < 3:
        raise FitError("the three-term fit needs at least three heights")
    if ys[-1] > MAX_LIMIT_Y:
        raise DomainError(f"heights are capped at {MAX_LIMIT_Y:g}, got {ys[-1]:g}")

    rows = []
    for y in ys:
        value = L_z(complex(x, y), s, q)
        rows.append(LimitRow(y, value, subtracted_residual(s, x, y, value.value)))

    exponents = _fit_exponents(s)
    design = np.array(
        [[1.0, cpow(y, -exponents[0]), cpow(y, -exponents[1])] for y in ys],
        dtype=complex,
    )
    if np.linalg.cond(design) > 1e12:
        raise FitError(f"fit matrix is ill-conditioned for exponents {exponents}")
    rhs = np.array([row.residual for row in rows], dtype=complex)
    fit, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    fit = tuple(complex(c) for c in fit)

    deviations = [abs(row.residual - fit[0]) for row in rows]
    warnings = []
    for lower, higher in zip(deviations, deviations[1:]):
        if higher > 2.0 * lower + 1e-9 * abs(fit[0]):
            raise FitError(f"residuals move away from the fitted limit: {deviations}")
        if higher > lower:
            warnings.append(f"residual deviation grew from {lower:.3e} to {higher:.3e}")

    return LimitReport(
        s=s,
        x=float(x),
        rows=tuple(rows),
        exponents=exponents,
        fit=fit,
        target=limit_target(s),
        coefficients=correction_coefficients(s, x),
        mirrored=correction_coefficients(2.0 - s, x),
        warnings=warnings,
    )
