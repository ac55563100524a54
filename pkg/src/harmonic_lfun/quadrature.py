"""Adaptive Gauss-Kronrod quadrature for complex integrands.

Panels are integrated with the 15-point Kronrod rule, the embedded 7-point
Gauss rule providing the error estimate. All panels refined in one pass are
evaluated in a single vectorised call of the integrand, so ``f`` must accept
a 1-d float array and return an array of the same shape.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from harmonic_lfun.errors import AccuracyError

__all__ = ["QuadResult", "gauss_kronrod", "gauss_legendre"]

_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node rule on [-1, 1]; Gauss nodes are the odd Kronrod indices.
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:14:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_FLOOR = 50.0 * _EPS


@dataclass(frozen=True)
class QuadResult:
    """Integral estimate and bookkeeping.

    ``floor_limited`` is set when the tolerance was not met but every panel
    had already reached the rounding floor, so further bisection could not
    help.
    """

    value: complex
    err_est: float
    panels: int
    evaluations: int
    floor_limited: bool = False


def _panel_rules(
    f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Integrate every panel [lo_i, hi_i] in one batch.

    Returns:
        Kronrod values, error estimates and rounding floors per panel.
    """
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    t = center[:, None] + half[:, None] * NODES[None, :]
    fv = np.asarray(f(t.ravel()), dtype=complex).reshape(t.shape)
    if not np.all(np.isfinite(fv)):
        bad = t[~np.isfinite(fv)][0]
        raise AccuracyError(f"integrand is not finite at t = {bad!r}")

    kron = (fv @ KRONROD_WEIGHTS) * half
    gauss = (fv @ GAUSS_WEIGHTS) * half
    resabs = (np.abs(fv) @ KRONROD_WEIGHTS) * np.abs(half)
    mean = kron / np.where(half == 0, 1.0, 2.0 * half)
    resasc = (np.abs(fv - mean[:, None]) @ KRONROD_WEIGHTS) * np.abs(half)

    diff = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            resasc > 0,
            resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5),
            diff,
        )
    floor = _FLOOR * resabs
    return kron, np.maximum(scaled, floor), floor


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def gauss_kronrod(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    abs_tol: float = 1e-13,
    rel_tol: float = 1e-11,
    max_subdiv: int = 400,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate ``f`` over the finite interval [a, b].

    Panels whose share of the error exceeds an equal split of the tolerance
    are bisected until the total estimate meets
    ``max(abs_tol, rel_tol * |I|)``.

    Args:
        f: Vectorised integrand, float array to complex array.
        a: Lower limit.
        b: Upper limit.
        abs_tol: Absolute tolerance.
        rel_tol: Relative tolerance.
        max_subdiv: Maximum number of panels.
        breakpoints: Interior points where the integrand changes character;
            they become initial panel boundaries.

    Returns:
        QuadResult with the value and its error estimate.

    Raises:
        AccuracyError: If the panel budget runs out before the tolerance is met.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"integration limits must be finite, got [{a}, {b}]")
    if a == b:
        return QuadResult(0j, 0.0, 0, 0)

    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    values, errors, floors = _panel_rules(f, lo, hi)
    evaluations = 15 * lo.size
    floor_limited = False

    while True:
        total = _fsum_complex(values)
        total_err = math.fsum(errors)
        tol = max(abs_tol, rel_tol * abs(total))
        if total_err <= tol:
            break

        splittable = errors > 2.0 * floors
        if not np.any(splittable):
            floor_limited = True
            break
        threshold = tol / lo.size
        split = splittable & (errors > threshold)
        if not np.any(split):
            split = splittable & (errors == errors[splittable].max())
        if lo.size + int(split.sum()) > max_subdiv:
            raise AccuracyError(
                f"quadrature on [{a}, {b}] needs more than {max_subdiv} panels "
                f"(error {total_err:.3e} > tolerance {tol:.3e})"
            )

        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        new_values, new_errors, new_floors = _panel_rules(f, new_lo, new_hi)
        evaluations += 15 * new_lo.size

        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        values = np.concatenate([values[keep], new_values])
        errors = np.concatenate([errors[keep], new_errors])
        floors = np.concatenate([floors[keep], new_floors])

    order = np.argsort(lo, kind="stable")
    return QuadResult(
        value=sign * _fsum_complex(values[order]),
        err_est=total_err,
        panels=int(lo.size),
        evaluations=evaluations,
        floor_limited=floor_limited,
    )


def gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int = 64
) -> complex:
    """Fixed-order Gauss-Legendre rule, used for smooth well-scaled integrands."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    t = 0.5 * (a + b) + half * x
    fv = np.asarray(f(t), dtype=complex)
    return complex(half * np.dot(w, fv))
