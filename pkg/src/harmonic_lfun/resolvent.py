"""Resolvent kernel G_w(z, tau) and its raised companion.

Both kernels are sums over PSL2(Z) of point-pair terms in the hyperbolic
distance. The orbit of z is enumerated inside the ball cosh d(Mz, tau) <= X
with X = radius^2 / 2, coset by coset (coprime (c, d)) and translate by
translate, so every matrix is visited once. Only z is reduced; tau is used
as given, and since the damping depends on the invariant distance alone the
truncated sums keep the exact modularity of the full kernels.

Terms with cosh d in [X/4, X] are damped by a smooth step in log cosh d.
For G_w the damped and omitted part is restored from the orbit-counting
density 6 dC; for the raised kernel it averages to zero.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from harmonic_lfun.config.model import LatticeTruncation
from harmonic_lfun.eisenstein import (
    coprime_pairs,
    eval_E_realanalytic,
    extrapolate_ladder,
    raised_E0,
    smooth_step,
)
from harmonic_lfun.errors import (
    ConvergenceError,
    FitError,
    OrbitProximityError,
    ParameterError,
    SingularityError,
)
from harmonic_lfun.modforms import (
    HalfPlanePoint,
    UnimodularMatrix,
    as_point,
    eval_Hzstar,
    reduce_to_fundamental_domain,
)
from harmonic_lfun.quadrature import gauss_legendre
from harmonic_lfun.results import EvalResult
from harmonic_lfun.specfun import hyp2f1_ww2w, hyp2f1_ww2w_with_derivative, loggamma

__all__ = [
    "DEFAULT_W_LADDER",
    "ORBIT_FLOOR",
    "BridgeReport",
    "HyperbolicDistanceData",
    "OrbitPoints",
    "PointPairKernelTerm",
    "Gw_truncated",
    "calGw",
    "calGw_axis",
    "cusp_term_tau",
    "cusp_term_z",
    "estimate_calG1_residue",
    "extrapolate_ladder",
    "gw",
    "gw_raised",
    "kernel_terms",
    "orbit_points",
    "verify_prop_dGs",
]

ORBIT_FLOOR = 1e-6
DEFAULT_W_LADDER = (1.5, 1.25, 1.125)
DEFAULT_OFFSETS = (2e-2, 1e-2)


@dataclass(frozen=True)
class HyperbolicDistanceData:
    """cosh d(z, tau) and x = 2 / (1 + cosh d)."""

    cosh_d: float
    x_arg: float

    @classmethod
    def between(
        cls, z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex
    ) -> HyperbolicDistanceData:
        """Distance data of the pair (z, tau)."""
        z, tau = as_point(z), as_point(tau)
        near2 = abs(z.tau - tau.tau) ** 2
        far2 = abs(z.tau - tau.tau.conjugate()) ** 2
        return cls(1.0 + near2 / (2.0 * z.v * tau.v), 4.0 * z.v * tau.v / far2)


@dataclass(frozen=True)
class PointPairKernelTerm:
    """One orbit term g_w(Mz, tau) with its tau-raised value."""

    matrix: UnimodularMatrix
    value: complex
    raised_value: complex


@dataclass(frozen=True, eq=False)
class OrbitPoints:
    """Orbit points xi + i eta of z inside the ball cosh d <= cosh_cutoff.

    ``c``, ``d`` and ``a`` describe the coset of each point and ``n`` the
    translate, so the matrix is (a + n c, b + n d; c, d).
    """

    xi: np.ndarray
    eta: np.ndarray
    a: np.ndarray
    c: np.ndarray
    d: np.ndarray
    n: np.ndarray
    cosh_cutoff: float
    reduced_z: HalfPlanePoint
    to_reduced: UnimodularMatrix = field(repr=False)

    def __len__(self) -> int:
        return int(self.xi.size)

    def matrix(self, i: int) -> UnimodularMatrix:
        """The PSL2(Z) element carrying the original z to point i."""
        a, c, d, n = int(self.a[i]), int(self.c[i]), int(self.d[i]), int(self.n[i])
        b = (a * d - 1) // c if c else 0
        coset = UnimodularMatrix(a, b, c, d) if c else UnimodularMatrix(1, 0, 0, 1)
        return UnimodularMatrix(1, n, 0, 1) @ coset @ self.to_reduced


def _inverse_mod(d: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.array(
        [pow(int(dd), -1, int(cc)) if cc > 1 else int(cc == 0) for cc, dd in zip(c, d)],
        dtype=np.int64,
    )


def orbit_points(
    z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex, radius: float
) -> OrbitPoints:
    """Enumerate M z, M in PSL2(Z), with 2 cosh d(Mz, tau) <= radius^2."""
    cutoff = 0.5 * radius * radius
    if cutoff <= 1.0:
        raise ParameterError(f"radius {radius} leaves an empty ball")
    zr, to_reduced = reduce_to_fundamental_domain(z)
    tau = as_point(tau)
    u, v = tau.u, tau.v
    spread = cutoff + math.sqrt(cutoff * cutoff - 1.0)
    eta_min = v / spread

    c, d = coprime_pairs(zr, 1.0 / math.sqrt(eta_min))
    lin = c * zr.tau + d
    eta = zr.v / np.abs(lin) ** 2
    a = _inverse_mod(d, c)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi0 = np.where(c > 0, a / np.where(c > 0, c, 1) - np.real(1.0 / (c * lin)), zr.u)

    # (xi - u)^2 <= 2 eta v (X - 1) - (eta - v)^2 is cosh d <= X
    half_width2 = 2.0 * eta * v * (cutoff - 1.0) - (eta - v) ** 2
    keep = half_width2 >= 0
    half_width = np.sqrt(np.where(keep, half_width2, 0.0))
    lo = np.ceil(u - half_width - xi0).astype(np.int64)
    hi = np.floor(u + half_width - xi0).astype(np.int64)
    counts = np.where(keep, np.maximum(hi - lo + 1, 0), 0)

    idx = np.repeat(np.arange(c.size), counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    n = lo[idx] + (np.arange(idx.size) - starts)
    return OrbitPoints(
        xi=xi0[idx] + n,
        eta=eta[idx],
        a=a[idx],
        c=c[idx],
        d=d[idx],
        n=n,
        cosh_cutoff=cutoff,
        reduced_z=zr,
        to_reduced=to_reduced,
    )


def _norm(w: complex) -> complex:
    return cmath.exp(2.0 * loggamma(w) - loggamma(2.0 * w))


def _kernel_arrays(
    w: complex, xi: np.ndarray, eta: np.ndarray, tau: HalfPlanePoint, raised: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Point-pair values (or their d/dtau) and cosh d for orbit points."""
    u, v = tau.u, tau.v
    dx = xi - u
    near2 = dx * dx + (eta - v) ** 2
    far2 = dx * dx + (eta + v) ** 2
    x = 4.0 * eta * v / far2
    omx = near2 / far2
    if np.any(omx < ORBIT_FLOOR):
        i = int(np.argmin(omx))
        raise OrbitProximityError(
            f"orbit point {xi[i]:.17g}+{eta[i]:.17g}i is within the floor of tau = {tau}"
        )
    cosh = 1.0 + near2 / (2.0 * eta * v)
    xw = np.exp(w * np.log(x))
    if not raised:
        return -_norm(w) * xw * hyp2f1_ww2w(w, x, omx), cosh
    f, df = hyp2f1_ww2w_with_derivative(w, x, omx)
    # d x / d tau = x conj(X_tau) / (2 i v), X_tau = (zeta - tau) / (zeta - conj(tau))
    conj_ratio = (dx - 1j * (eta - v)) / (dx - 1j * (eta + v))
    return -_norm(w) * xw * (w * f + x * df) * conj_ratio / (2j * v), cosh


def _check_w(w: complex, lowest: float) -> complex:
    w = complex(w)
    if w.real < lowest:
        raise ParameterError(f"kernel needs Re(w) >= {lowest}, got {w}")
    return w


def gw(w: complex, z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex) -> complex:
    """Point-pair kernel -Gamma(w)^2/Gamma(2w) x^w 2F1(w, w; 2w; x).

    Raises:
        SingularityError: At z = tau.
        OrbitProximityError: If z is within the floor of tau.
    """
    w = _check_w(w, 1.0)
    z, tau = as_point(z), as_point(tau)
    if z == tau:
        raise SingularityError(f"g_w is singular on the diagonal z = tau = {z}")
    vals, _ = _kernel_arrays(w, np.array([z.u]), np.array([z.v]), tau, raised=False)
    return complex(vals[0])


def gw_raised(
    w: complex, z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex
) -> complex:
    """(1/2i) R_{0, tau} g_w(z, tau) = d g_w / d tau in closed form."""
    w = _check_w(w, 1.0)
    z, tau = as_point(z), as_point(tau)
    if z == tau:
        raise SingularityError(f"g_w is singular on the diagonal z = tau = {z}")
    vals, _ = _kernel_arrays(w, np.array([z.u]), np.array([z.v]), tau, raised=True)
    return complex(vals[0])


def kernel_terms(
    w: complex,
    z: HalfPlanePoint | complex,
    tau: HalfPlanePoint | complex,
    radius: float = 8.0,
) -> list[PointPairKernelTerm]:
    """The orbit terms closest to tau, nearest first."""
    w = _check_w(w, 1.0)
    tau = as_point(tau)
    pts = orbit_points(z, tau, radius)
    vals, cosh = _kernel_arrays(w, pts.xi, pts.eta, tau, raised=False)
    raised, _ = _kernel_arrays(w, pts.xi, pts.eta, tau, raised=True)
    order = np.argsort(cosh, kind="stable")
    return [
        PointPairKernelTerm(pts.matrix(int(i)), complex(vals[i]), complex(raised[i]))
        for i in order
    ]


# =============================================================================
# Truncated kernels
# =============================================================================


def _shell_weights(cosh: np.ndarray, cutoff: float) -> np.ndarray:
    lo = math.log(cutoff / 4.0)
    return 1.0 - smooth_step((np.log(cosh) - lo) / math.log(4.0))


def _tail_correction(w: complex, cutoff: float) -> complex:
    """6 [ int_{X/4}^{X} (1 - weight) g dC + int_X^inf g dC ]."""
    norm = _norm(w)
    lo, hi = math.log(cutoff / 4.0), math.log(cutoff)

    def shell(log_c: np.ndarray) -> np.ndarray:
        cosh = np.exp(log_c)
        x = 2.0 / (1.0 + cosh)
        g = -norm * np.exp(w * np.log(x)) * hyp2f1_ww2w(w, x)
        return (1.0 - _shell_weights(cosh, cutoff)) * g * cosh

    inner = gauss_legendre(shell, lo, hi, n=96)

    # int_X^inf g dC = -(2 norm) sum a_n x_X^(n+w-1) / (n+w-1), x_X = 2/(1+X)
    x_cut = 2.0 / (1.0 + cutoff)
    coeff, outer = 1.0 + 0j, 0j
    for k in range(200):
        term = coeff * cmath.exp((k + w - 1.0) * math.log(x_cut)) / (k + w - 1.0)
        outer += term
        if abs(term) < 1e-17 * abs(outer):
            break
        coeff *= (w + k) ** 2 / ((2.0 * w + k) * (k + 1))
    return complex(6.0 * (inner - 2.0 * norm * outer))


def _truncation_error(w: complex, cutoff: float, raised: bool, v: float) -> float:
    # Lattice-point discrepancy in the shell scales like X^(2/3).
    err = abs(_norm(w)) * 2.0**w.real * (cutoff / 4.0) ** (2.0 / 3.0 - w.real)
    return err * abs(w) / v if raised else err


def _truncated_sum(
    w: complex,
    z: HalfPlanePoint | complex,
    tau: HalfPlanePoint | complex,
    tr: LatticeTruncation,
    raised: bool,
    strict: bool,
) -> EvalResult:
    tau = as_point(tau)
    pts = orbit_points(z, tau, tr.radius)
    vals, cosh = _kernel_arrays(w, pts.xi, pts.eta, tau, raised=raised)
    weighted = vals * _shell_weights(cosh, pts.cosh_cutoff)
    total = complex(math.fsum(weighted.real), math.fsum(weighted.imag))
    if not raised:
        total += _tail_correction(w, pts.cosh_cutoff)
    err = _truncation_error(w, pts.cosh_cutoff, raised, tau.v)
    if strict and err > tr.tol:
        raise ConvergenceError(
            f"kernel truncation error {err:.3e} exceeds {tr.tol:g} at radius {tr.radius}"
        )
    return EvalResult(
        total,
        err,
        {"radius": tr.radius, "points": len(pts), "cosh_cutoff": pts.cosh_cutoff},
    )


def Gw_truncated(
    w: complex,
    z: HalfPlanePoint | complex,
    tau: HalfPlanePoint | complex,
    tr: LatticeTruncation | None = None,
    *,
    strict: bool = True,
) -> EvalResult:
    """Truncated resolvent kernel G_w(z, tau) for Re(w) > 1.

    Raises:
        ParameterError: If Re(w) <= 1.
        ConvergenceError: If ``strict`` and the truncation error exceeds
            ``tr.tol``.
        OrbitProximityError: If some orbit point of z nearly meets tau.
    """
    w = complex(w)
    if w.real <= 1.0:
        raise ParameterError(f"G_w is summed only for Re(w) > 1, got {w}")
    return _truncated_sum(w, z, tau, tr or LatticeTruncation(), False, strict)


def calGw(
    w: complex,
    z: HalfPlanePoint | complex,
    tau: HalfPlanePoint | complex,
    tr: LatticeTruncation | None = None,
    *,
    strict: bool = True,
) -> EvalResult:
    """Raised kernel (1/2i) R_{0, tau} G_w(z, tau), term by term.

    Weight two in tau, invariant in z, eigenvalue w(1 - w) in both.

    Raises:
        ParameterError: If Re(w) <= 1.
        ConvergenceError: If ``strict`` and the truncation error exceeds
            ``tr.tol``.
        OrbitProximityError: If some orbit point of z nearly meets tau.
    """
    w = complex(w)
    if w.real <= 1.0:
        raise ParameterError(f"the raised kernel is summed only for Re(w) > 1, got {w}")
    return _truncated_sum(w, z, tau, tr or LatticeTruncation(), True, strict)


def calGw_axis(
    w: complex,
    z: HalfPlanePoint | complex,
    ts: np.ndarray,
    tr: LatticeTruncation | None = None,
) -> tuple[np.ndarray, float]:
    """Raised kernel at tau = it for each t, with the largest error estimate."""
    tr = tr or LatticeTruncation()
    values = np.empty(np.shape(ts), dtype=complex)
    worst = 0.0
    for i, t in enumerate(np.asarray(ts, dtype=float)):
        res = calGw(w, z, HalfPlanePoint(0.0, float(t)), tr, strict=False)
        values[i] = res.value
        worst = max(worst, res.err_est)
    return values, worst


# =============================================================================
# Asymptotics and the bridge to H_z*
# =============================================================================


def cusp_term_z(
    w: complex, y: float, tau: HalfPlanePoint | complex, tr: LatticeTruncation | None = None
) -> EvalResult:
    """Main term 2 pi i / (2w - 1) y^(1-w) R_0 E_0(w; tau) as y grows."""
    w = complex(w)
    factor = 2j * math.pi / (2.0 * w - 1.0) * cmath.exp((1.0 - w) * math.log(y))
    return raised_E0(w, tau, tr).scaled(factor)


def cusp_term_tau(
    w: complex, v: float, z: HalfPlanePoint | complex, tr: LatticeTruncation | None = None
) -> EvalResult:
    """Main term 2 pi i (w - 1)/(1 - 2w) v^(-w) E_0(w; z) as v grows."""
    w = complex(w)
    factor = 2j * math.pi * (w - 1.0) / (1.0 - 2.0 * w) * cmath.exp(-w * math.log(v))
    return eval_E_realanalytic(0, w, z, tr).scaled(factor)


@dataclass(frozen=True)
class BridgeReport:
    """Ladder values of the raised kernel, their limit at w = 1 and the target."""

    ladder: tuple[float, ...]
    values: tuple[complex, ...]
    extrapolated: EvalResult
    target: complex

    @property
    def deviation(self) -> float:
        """Relative distance of the extrapolated limit from the target."""
        return abs(self.extrapolated.value - self.target) / abs(self.target)


def verify_prop_dGs(
    z: HalfPlanePoint | complex,
    tau: HalfPlanePoint | complex,
    w_ladder: Sequence[float] = DEFAULT_W_LADDER,
    tr: LatticeTruncation | None = None,
) -> BridgeReport:
    """Compare the w -> 1 limit of the raised kernel with -2 pi i H_z*(tau)."""
    values = [calGw(w, z, tau, tr, strict=False).value for w in w_ladder]
    limit = extrapolate_ladder(w_ladder, values, 1.0)
    target = -2j * math.pi * eval_Hzstar(z, tau)
    return BridgeReport(tuple(w_ladder), tuple(values), limit, target)


def estimate_calG1_residue(
    tau: HalfPlanePoint | complex,
    offsets: Sequence[float] = DEFAULT_OFFSETS,
    w_ladder: Sequence[float] = DEFAULT_W_LADDER,
    tr: LatticeTruncation | None = None,
) -> EvalResult:
    """(z - tau) times the raised kernel at w = 1, extrapolated to z = tau.

    z approaches tau along the diagonal direction (1 + i)/sqrt(2).

    Raises:
        FitError: With fewer than two offsets.
    """
    if len(offsets) < 2:
        raise FitError("residue extrapolation needs at least two offsets")
    tau = as_point(tau)
    direction = (1.0 + 1.0j) / math.sqrt(2.0)
    samples = []
    for delta in offsets:
        z = tau.tau + delta * direction
        values = [calGw(w, z, tau, tr, strict=False).value for w in w_ladder]
        at_one = extrapolate_ladder(w_ladder, values, 1.0).value
        samples.append(delta * direction * at_one)
    return extrapolate_ladder(offsets, samples, 0.0)
