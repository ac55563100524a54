"""Real-analytic Eisenstein series and the weight-raising machinery.

E_k(w; tau) is the sum of (c tau + d)^(-k) Im(gamma tau)^w over
Gamma_infinity \\ SL2(Z), one term per coprime pair (c, d) up to sign. Terms
are ordered by the invariant size rho = |c tau + d| / sqrt(v) and damped by a
smooth step on the outer half [R/2, R] of the truncation shell, so the
truncated sum is a smooth function of tau. For k = 0 the damped part of the
shell and everything beyond it is added back from the mean pair density
(6/pi) rho d rho.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from harmonic_lfun.config.model import LatticeTruncation
from harmonic_lfun.errors import ConvergenceError, FitError, ParameterError, StepError
from harmonic_lfun.modforms import HalfPlanePoint, as_point, reduce_to_fundamental_domain
from harmonic_lfun.quadrature import gauss_legendre
from harmonic_lfun.results import EvalResult
from harmonic_lfun.specfun import gamma, zeta

__all__ = [
    "RESIDUE_E0",
    "CosetSum",
    "coprime_pairs",
    "eval_E_realanalytic",
    "estimate_residue_E0",
    "extrapolate_ladder",
    "hyperbolic_laplacian",
    "lattice_tail_correction",
    "maass_raise",
    "raised_E0",
    "residue_E0_at_1",
    "scattering_phi",
    "second_coefficient",
    "smooth_step",
    "taper",
]

RESIDUE_E0 = 3.0 / math.pi
DEFAULT_LADDER = (1.3, 1.2, 1.1)
_FROZEN_MARGIN = 0.05
_STEP_FRACTION = 1e-3


def smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def taper(rho: np.ndarray, radius: float) -> np.ndarray:
    """1 inside radius/2, smooth decay to 0 at radius."""
    half = 0.5 * radius
    return 1.0 - smooth_step((np.asarray(rho) - half) / half)


def coprime_pairs(tau: HalfPlanePoint, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Coprime (c, d) with c >= 1, plus (0, 1), and |c tau + d| <= radius sqrt(v)."""
    u, v = tau.u, tau.v
    cs = [np.array([0])]
    ds = [np.array([1])]
    for c in range(1, int(radius / math.sqrt(v)) + 1):
        span = radius * radius * v - c * c * v * v
        if span < 0:
            break
        r = math.sqrt(span)
        d = np.arange(math.ceil(-c * u - r), math.floor(-c * u + r) + 1)
        d = d[np.gcd(c, d) == 1]
        cs.append(np.full(d.size, c))
        ds.append(d)
    return np.concatenate(cs), np.concatenate(ds)


def lattice_tail_correction(w: complex, radius: float) -> complex:
    """Mean-density value of the damped and omitted k = 0 terms.

    (6/pi) [ int_{R/2}^{R} (1 - taper) r^(1-2w) dr + R^(2-2w)/(2w-2) ].
    """
    w = complex(w)
    half = 0.5 * radius

    def shell(r: np.ndarray) -> np.ndarray:
        return smooth_step((r - half) / half) * np.exp((1.0 - 2.0 * w) * np.log(r))

    inner = gauss_legendre(shell, half, radius, n=96)
    outer = np.exp((2.0 - 2.0 * w) * math.log(radius)) / (2.0 * w - 2.0)
    return complex(6.0 / math.pi * (inner + outer))


@dataclass(frozen=True, eq=False)
class CosetSum:
    """Tapered coset sum on a pair set frozen around ``center``.

    Every point within a small Euclidean neighbourhood of the centre is
    summed over the same pairs, which is what finite-difference stencils
    need.
    """

    k: int
    w: complex
    center: HalfPlanePoint
    tr: LatticeTruncation
    c: np.ndarray = field(init=False)
    d: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 0 or self.k % 2:
            raise ParameterError(f"weight must be even and >= 0, got {self.k}")
        sigma = complex(self.w).real
        if (self.k == 0 and sigma <= 1.0) or sigma <= 0.0:
            raise ParameterError(
                f"coset sum of weight {self.k} diverges at Re(w) = {sigma}"
            )
        c, d = coprime_pairs(self.center, self.tr.radius * (1.0 + _FROZEN_MARGIN))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def pairs(self) -> int:
        """Number of coprime pairs in the frozen set."""
        return int(self.c.size)

    def terms(self, tau: complex) -> np.ndarray:
        """Damped terms (c tau + d)^(-k) rho^(-2w) taper(rho)."""
        v = tau.imag
        lin = self.c * tau + self.d
        rho2 = (lin.real**2 + lin.imag**2) / v
        weight = taper(np.sqrt(rho2), self.tr.radius)
        vals = np.exp(-complex(self.w) * np.log(rho2)) * weight
        if self.k:
            vals = vals * lin ** (-self.k)
        return vals

    def __call__(self, tau: HalfPlanePoint | complex) -> complex:
        point = as_point(tau)
        if abs(point.tau - self.center.tau) > 0.5 * _FROZEN_MARGIN * self.center.v:
            raise ParameterError(
                f"{point} is outside the neighbourhood of the frozen centre {self.center}"
            )
        vals = self.terms(point.tau)
        total = complex(math.fsum(vals.real), math.fsum(vals.imag))
        if self.k == 0:
            total += lattice_tail_correction(self.w, self.tr.radius)
        return total


def eval_E_realanalytic(
    k: int,
    w: complex,
    tau: HalfPlanePoint | complex,
    tr: LatticeTruncation | None = None,
) -> EvalResult:
    """Weight-k real-analytic Eisenstein series E_k(w; tau).

    Args:
        k: Even weight >= 0.
        w: Spectral parameter, Re(w) > 1 for k = 0 and Re(w) > 0 otherwise.
        tau: Point of the upper half-plane; reduced before summing.
        tr: Truncation radius and tolerance.

    Returns:
        EvalResult with the lattice tail bound as error estimate.

    Raises:
        ParameterError: Outside the convergence region.
        ConvergenceError: If the tail bound exceeds ``tr.tol``.
    """
    tr = tr or LatticeTruncation(radius=400)
    point = as_point(tau)
    reduced, gamma_red = reduce_to_fundamental_domain(point)
    summer = CosetSum(k, complex(w), reduced, tr)
    bound = tr.tail_bound(k, complex(w).real, reduced.v)
    if bound > tr.tol:
        raise ConvergenceError(
            f"E_{k}({w}) tail bound {bound:.3e} exceeds {tr.tol:g} at R = {tr.radius}"
        )
    factor = gamma_red.automorphy(point) ** (-k)
    value = factor * summer(reduced)
    return EvalResult(
        complex(value),
        bound * abs(factor),
        {"radius": tr.radius, "pairs": summer.pairs},
    )


def raised_E0(
    w: complex, tau: HalfPlanePoint | complex, tr: LatticeTruncation | None = None
) -> EvalResult:
    """R_0 E_0(w; tau) = w E_2(w - 1; tau), raised term by term."""
    return eval_E_realanalytic(2, complex(w) - 1.0, tau, tr).scaled(w)


def scattering_phi(w: complex) -> complex:
    """Coefficient of v^(1-w) in the constant term of E_0(w; tau)."""
    w = complex(w)
    return (
        math.sqrt(math.pi) * gamma(w - 0.5) * zeta(2 * w - 1) / (gamma(w) * zeta(2 * w))
    )


def second_coefficient(w: complex) -> complex:
    """Coefficient b of t^(-w-1) in E_2(w; it) = t^w + b t^(-w-1) + ..."""
    w = complex(w)
    return (
        -math.sqrt(math.pi)
        * w
        * gamma(w + 0.5)
        * zeta(2 * w + 1)
        / (gamma(w + 2) * zeta(2 * w + 2))
    )


# =============================================================================
# Extrapolation in the spectral parameter
# =============================================================================


def extrapolate_ladder(
    ws: Sequence[complex], values: Sequence[complex], target: complex = 1.0
) -> EvalResult:
    """Lagrange extrapolation of values sampled along a ladder of w.

    The error estimate is the change against the extrapolation that drops
    the point farthest from ``target``.

    Raises:
        FitError: With fewer than two points or repeated nodes.
    """
    ws = [complex(w) for w in ws]
    values = [complex(v) for v in values]
    if len(ws) != len(values) or len(ws) < 2:
        raise FitError("ladder extrapolation needs at least two (w, value) pairs")
    if len(set(ws)) != len(ws):
        raise FitError(f"ladder has repeated nodes: {ws}")

    def lagrange(nodes: list[complex], vals: list[complex]) -> complex:
        total = 0j
        for i, (wi, fi) in enumerate(zip(nodes, vals, strict=True)):
            basis = 1.0 + 0j
            for j, wj in enumerate(nodes):
                if j != i:
                    basis *= (target - wj) / (wi - wj)
            total += fi * basis
        return total

    full = lagrange(ws, values)
    far = max(range(len(ws)), key=lambda i: abs(ws[i] - target))
    reduced = lagrange(
        [w for i, w in enumerate(ws) if i != far],
        [f for i, f in enumerate(values) if i != far],
    )
    return EvalResult(full, abs(full - reduced), {"ladder": [w.real for w in ws]})


def residue_E0_at_1(z: HalfPlanePoint | complex | None = None) -> float:
    """lim (w - 1) E_0(w; z) as w -> 1, which is 3/pi for every z."""
    return RESIDUE_E0


def estimate_residue_E0(
    z: HalfPlanePoint | complex,
    tr: LatticeTruncation | None = None,
    ladder: Sequence[float] = DEFAULT_LADDER,
) -> EvalResult:
    """Extrapolate (w - 1) E_0(w; z) from the ladder to w = 1."""
    samples = [
        (w - 1.0) * eval_E_realanalytic(0, w, z, tr).value for w in ladder
    ]
    return extrapolate_ladder(ladder, samples, 1.0)


# =============================================================================
# Differential operators by finite differences
# =============================================================================


def _step(tau: HalfPlanePoint, h: float | None) -> float:
    step = _STEP_FRACTION * tau.v if h is None else h
    if not 0 < step < 0.5 * tau.v:
        raise StepError(f"step {step} must lie in (0, v/2) at v = {tau.v}")
    return step


def _richardson(
    stencil: Callable[[float], complex], h: float, tol: float, scale: float
) -> complex:
    s1, s2, s3 = stencil(h), stencil(h / 2), stencil(h / 4)
    coarse = (4.0 * s2 - s1) / 3.0
    fine = (4.0 * s3 - s2) / 3.0
    if abs(fine - coarse) > tol * max(abs(fine), scale):
        raise StepError(
            f"Richardson levels disagree: {coarse} vs {fine} (tolerance {tol:g})"
        )
    return fine


def maass_raise(
    k: int,
    f: Callable[[complex], complex],
    tau: HalfPlanePoint | complex,
    h: float | None = None,
    *,
    richardson: bool = True,
    tol: float = 1e-6,
) -> complex:
    """Raising operator 2i d/dtau + k/v applied to f at tau.

    d/dtau = (d/du - i d/dv) / 2 by central differences with step h
    (default 1e-3 v), refined by Richardson extrapolation over h, h/2, h/4.

    Raises:
        StepError: If the Richardson levels disagree beyond ``tol``.
    """
    point = as_point(tau)
    t = point.tau
    h = _step(point, h)
    centre = complex(f(t))

    def stencil(step: float) -> complex:
        fu = (f(t + step) - f(t - step)) / (2.0 * step)
        fv = (f(t + 1j * step) - f(t - 1j * step)) / (2.0 * step)
        return 1j * (fu - 1j * fv) + k / point.v * centre

    if not richardson:
        return complex(stencil(h))
    return _richardson(stencil, h, tol, abs(centre))


def hyperbolic_laplacian(
    k: int,
    f: Callable[[complex], complex],
    tau: HalfPlanePoint | complex,
    h: float | None = None,
    *,
    richardson: bool = True,
    tol: float = 1e-4,
) -> complex:
    """Weight-k Laplacian -v^2 (f_uu + f_vv) + i k v (f_u + i f_v).

    Five-point stencil with step h; with ``richardson`` the h, h/2, h/4
    levels are combined and checked against each other.

    Raises:
        StepError: If the Richardson levels disagree beyond ``tol``.
    """
    point = as_point(tau)
    t, v = point.tau, point.v
    h = _step(point, h)
    centre = complex(f(t))

    def stencil(step: float) -> complex:
        east, west = f(t + step), f(t - step)
        north, south = f(t + 1j * step), f(t - 1j * step)
        f_uu = (east - 2.0 * centre + west) / step**2
        f_vv = (north - 2.0 * centre + south) / step**2
        f_u = (east - west) / (2.0 * step)
        f_v = (north - south) / (2.0 * step)
        return -(v**2) * (f_uu + f_vv) + 1j * k * v * (f_u + 1j * f_v)

    if not richardson:
        return complex(stencil(h))
    return _richardson(stencil, h, tol, abs(centre))
