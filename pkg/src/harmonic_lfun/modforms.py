"""Modular forms on SL2(Z) through truncated q-expansions.

Coefficient tables are exact Python integers, built once per truncation
order and rounded to double only when a series is evaluated. Points with
``v < V_MIN`` are first moved into the fundamental domain and the
automorphy factor is applied afterwards.

H_z is never formed as a quotient of two large numbers. With
``A(q) = q J(tau)`` and ``D(q) = (E14 - E4^3) P + 744 q`` (P the reciprocal
of the 24th power of the Euler product) one has

    H_z(tau) - 1 = (D(q) + J(z) q) / (A(q) - J(z) q),

which stays finite for every tau high in the half-plane.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from harmonic_lfun.errors import (
    AccuracyError,
    DomainError,
    ParameterError,
    PoleProximityError,
)
from harmonic_lfun.results import checked
from harmonic_lfun.specfun import bernoulli, divisor_sigma_exact, zeta

__all__ = [
    "IDENTITY",
    "J_AT_I",
    "M211",
    "S",
    "T",
    "V_MIN",
    "FourierSeries",
    "HalfPlanePoint",
    "SingularSetDistance",
    "UnimodularMatrix",
    "as_point",
    "e2_minus_one_axis",
    "eval_Delta",
    "eval_E2",
    "eval_E2hat",
    "eval_E4",
    "eval_E6",
    "eval_Hz",
    "eval_Hzstar",
    "eval_J",
    "eval_j",
    "hz_minus_one_axis",
    "j_growth_residual",
    "nome",
    "q_coefficients",
    "reduce_to_fundamental_domain",
    "series",
    "singular_set_distance",
    "slash",
]

V_MIN = 0.5
DEFAULT_ORDER = 80
J_AT_I = 984.0
POLE_FLOOR = 1e-8
MAX_EXPONENT = 700.0
_TAIL_TOL = 1e-12
_TAIL_TERMS = 400
_MAX_REDUCTION_STEPS = 10_000
_TWO_PI = 2.0 * math.pi


# =============================================================================
# Points and matrices
# =============================================================================


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point u + iv of the upper half-plane (also used for z = x + iy)."""

    u: float
    v: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise DomainError(f"point ({self.u}, {self.v}) is not finite")
        if self.v <= 0.0:
            raise DomainError(f"point {self.u}+{self.v}i is not in the upper half-plane")

    @classmethod
    def from_complex(cls, tau: complex) -> HalfPlanePoint:
        """Build a point from u + iv."""
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    @property
    def tau(self) -> complex:
        """The point as a complex number."""
        return complex(self.u, self.v)

    def __complex__(self) -> complex:
        return self.tau

    def __str__(self) -> str:
        return f"{self.u:.17g}{self.v:+.17g}i"


def as_point(tau: HalfPlanePoint | complex) -> HalfPlanePoint:
    """Accept either a HalfPlanePoint or a complex number."""
    if isinstance(tau, HalfPlanePoint):
        return tau
    return HalfPlanePoint.from_complex(tau)


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix (a b; c d) with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ParameterError(
                f"({self.a} {self.b}; {self.c} {self.d}) has determinant "
                f"{self.a * self.d - self.b * self.c}, expected 1"
            )

    def __matmul__(self, other: UnimodularMatrix) -> UnimodularMatrix:
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> UnimodularMatrix:
        """Inverse matrix."""
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def automorphy(self, tau: HalfPlanePoint | complex) -> complex:
        """The factor c tau + d."""
        return self.c * complex(as_point(tau)) + self.d

    def act(self, tau: HalfPlanePoint | complex) -> HalfPlanePoint:
        """Moebius action; the imaginary part is taken as v / |c tau + d|^2."""
        point = as_point(tau)
        t = point.tau
        denom = self.c * t + self.d
        image = (self.a * t + self.b) / denom
        return HalfPlanePoint(image.real, point.v / abs(denom) ** 2)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)
T = UnimodularMatrix(1, 1, 0, 1)
M211 = UnimodularMatrix(2, 1, 1, 1)


def reduce_to_fundamental_domain(
    tau: HalfPlanePoint | complex,
) -> tuple[HalfPlanePoint, UnimodularMatrix]:
    """Map tau into |u| <= 1/2, |tau| >= 1 by translations and inversions.

    Returns:
        The reduced point and the matrix gamma with gamma(tau) equal to it.
    """
    point = as_point(tau)
    gamma = IDENTITY
    w = point.tau
    for _ in range(_MAX_REDUCTION_STEPS):
        n = math.floor(w.real + 0.5)
        if n:
            w -= n
            gamma = UnimodularMatrix(1, -n, 0, 1) @ gamma
        if abs(w) < 1.0 - 1e-14:
            w = -1.0 / w
            gamma = S @ gamma
        else:
            break
    else:
        raise AccuracyError(f"reduction of {point} did not terminate")
    return gamma.act(point), gamma


def slash(
    f: Callable[[HalfPlanePoint], complex],
    k: int,
    gamma: UnimodularMatrix,
    tau: HalfPlanePoint | complex,
) -> complex:
    """Weight-k slash action (c tau + d)^(-k) f(gamma tau)."""
    return complex(gamma.automorphy(tau) ** (-k) * f(gamma.act(tau)))


# =============================================================================
# Exact coefficient tables
# =============================================================================


def _mul(a: tuple[int, ...], b: tuple[int, ...], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


@lru_cache(maxsize=16)
def _eisenstein(k: int, order: int) -> tuple[int, ...]:
    const = -2 * k / bernoulli(k)
    if const.denominator != 1:
        raise ParameterError(f"E_{k} does not have integral coefficients")
    sig = divisor_sigma_exact(k - 1, order)
    return (1, *(int(const) * sig[n] for n in range(1, order + 1)))


@lru_cache(maxsize=16)
def _euler_power(r: int, order: int) -> tuple[int, ...]:
    """Coefficients of prod (1 - q^n)^r via n c_n = -r sum sigma_1(k) c_(n-k)."""
    sig = divisor_sigma_exact(1, order)
    c = [1] + [0] * order
    for n in range(1, order + 1):
        acc = sum(sig[k] * c[n - k] for k in range(1, n + 1))
        c[n] = -r * acc // n
    return tuple(c)


@lru_cache(maxsize=16)
def _table(name: str, order: int) -> tuple[int, ...]:
    match name:
        case "E2":
            return _eisenstein(2, order)
        case "E4":
            return _eisenstein(4, order)
        case "E6":
            return _eisenstein(6, order)
        case "E14":
            return _eisenstein(14, order)
        case "Delta":
            return (0, *_euler_power(24, order)[:order])
        case "P":
            return _euler_power(-24, order)
        case "qj" | "qJ":
            e4 = _eisenstein(4, order)
            cube = _mul(tuple(_mul(e4, e4, order)), e4, order)
            coeffs = _mul(tuple(cube), _euler_power(-24, order), order)
            if name == "qJ":
                coeffs[1] -= 744
            return tuple(coeffs)
        case "D":
            e4 = _eisenstein(4, order)
            cube = _mul(tuple(_mul(e4, e4, order)), e4, order)
            diff = tuple(x - y for x, y in zip(_eisenstein(14, order), cube, strict=True))
            coeffs = _mul(diff, _euler_power(-24, order), order)
            coeffs[1] += 744
            return tuple(coeffs)
    raise ParameterError(f"unknown q-series '{name}'")


def q_coefficients(name: str, order: int = DEFAULT_ORDER) -> tuple[int, ...]:
    """Exact integer q-expansion coefficients 0..order.

    Names: ``E2``, ``E4``, ``E6``, ``E14``, ``Delta``, ``P`` (reciprocal
    Euler product to the 24th power), ``qj`` and ``qJ`` (q times j and J,
    index n holding the coefficient of q^(n-1)) and ``D`` (the numerator
    series of H_z - 1).

    Raises:
        ParameterError: For an unknown name or order < 1.
    """
    if order < 1:
        raise ParameterError(f"truncation order must be >= 1, got {order}")
    return _table(name, order)


# =============================================================================
# Truncated series with tail bounds
# =============================================================================


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Truncated q-expansion with a remainder bound.

    ``log_majorant(n)`` bounds log |c(n)| for n beyond the table; the tail
    bound sums the majorant against |q|^n = e^(-2 pi n v).
    """

    weight: int
    coeffs: np.ndarray
    log_majorant: Callable[[np.ndarray], np.ndarray]
    v_min: float = V_MIN

    @property
    def truncation_order(self) -> int:
        """Index of the last stored coefficient."""
        return self.coeffs.size - 1

    def tail_bound(self, v: float) -> float:
        """Bound on the omitted terms at height v."""
        if v < self.v_min:
            raise DomainError(f"tail bound needs v >= {self.v_min}, got {v}")
        n = np.arange(self.truncation_order + 1, self.truncation_order + 1 + _TAIL_TERMS)
        terms = np.exp(self.log_majorant(n) - _TWO_PI * n * v)
        ratio = terms[-1] / terms[-2] if terms[-2] > 0 else 0.0
        return float(math.fsum(terms) + terms[-1] * ratio / (1.0 - ratio))

    def at_nome(self, q: np.ndarray, drop_constant: bool = False) -> np.ndarray:
        """Horner evaluation of the truncated sum at nome values q."""
        coeffs = self.coeffs[1:] if drop_constant else self.coeffs
        acc = np.full(np.shape(q), coeffs[-1], dtype=complex)
        for c in coeffs[-2::-1]:
            acc = acc * q + c
        return acc * q if drop_constant else acc

    def evaluate(self, tau: HalfPlanePoint | complex) -> complex:
        """Truncated sum at tau.

        Raises:
            DomainError: If Im tau < v_min.
            AccuracyError: If the tail bound exceeds the tolerance.
        """
        point = as_point(tau)
        if point.v < self.v_min:
            raise DomainError(f"q-series evaluation needs v >= {self.v_min}, got {point.v}")
        value = complex(self.at_nome(np.asarray(nome(point.tau)))[()])
        tail = self.tail_bound(point.v)
        if tail > _TAIL_TOL * max(abs(value), 1.0):
            raise AccuracyError(f"q-series tail {tail:.3e} too large at v = {point.v}")
        return value


def nome(tau: complex | np.ndarray) -> complex | np.ndarray:
    """q = e^(2 pi i tau)."""
    return np.exp(2j * np.pi * np.asarray(tau))


def _power_majorant(log_const: float, power: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda n: log_const + power * np.log(n)


def _e2_majorant(n: np.ndarray) -> np.ndarray:
    # 24 sigma_1(n) <= 24 n (1 + log n)
    return math.log(24.0) + np.log(n * (1.0 + np.log(n)))


def _fitted_exponential_majorant(coeffs: tuple[int, ...]) -> Callable[[np.ndarray], np.ndarray]:
    # Coefficients of P, q j and D grow like exp(4 pi sqrt(n)); the constant
    # is read off the table with a factor 2 of headroom.
    ratios = [
        math.log(abs(c)) - 4.0 * math.pi * math.sqrt(n)
        for n, c in enumerate(coeffs)
        if n >= 1 and c != 0
    ]
    log_const = max(ratios) + math.log(2.0)
    return lambda n: log_const + 4.0 * np.pi * np.sqrt(n)


@lru_cache(maxsize=32)
def series(name: str, order: int = DEFAULT_ORDER) -> FourierSeries:
    """FourierSeries for one of the names accepted by ``q_coefficients``."""
    coeffs = q_coefficients(name, order)
    array = np.array([float(c) for c in coeffs])
    match name:
        case "E2":
            weight = 2
            majorant = _e2_majorant
        case "E4" | "E6" | "E14":
            weight = int(name[1:])
            const = abs(float(-2 * weight / bernoulli(weight))) * zeta(weight - 1).real
            majorant = _power_majorant(math.log(const), weight - 1)
        case "Delta":
            weight = 12
            majorant = _power_majorant(0.0, 6.0)
        case _:
            weight = {"P": -12, "qj": 0, "qJ": 0, "D": 2}[name]
            majorant = _fitted_exponential_majorant(coeffs)
    return FourierSeries(weight=weight, coeffs=array, log_majorant=majorant)


# =============================================================================
# Holomorphic and harmonic forms
# =============================================================================


def _reduced(tau: HalfPlanePoint | complex) -> tuple[HalfPlanePoint, complex]:
    """Point where the q-series is evaluated and the factor c tau + d."""
    point = as_point(tau)
    if point.v >= V_MIN:
        return point, 1.0 + 0j
    red, gamma = reduce_to_fundamental_domain(point)
    return red, gamma.automorphy(point)


def _modular(name: str, tau: HalfPlanePoint | complex) -> complex:
    point, factor = _reduced(tau)
    fs = series(name)
    return complex(factor ** (-fs.weight) * fs.evaluate(point))


def eval_E4(tau: HalfPlanePoint | complex) -> complex:
    """Weight-four Eisenstein series E4."""
    return _modular("E4", tau)


def eval_E6(tau: HalfPlanePoint | complex) -> complex:
    """Weight-six Eisenstein series E6."""
    return _modular("E6", tau)


def eval_E2hat(tau: HalfPlanePoint | complex) -> complex:
    """Harmonic completion E2(tau) - 3/(pi v), modular of weight two."""
    point, factor = _reduced(tau)
    value = series("E2").evaluate(point) - 3.0 / (math.pi * point.v)
    return complex(factor ** (-2) * value)


def eval_E2(tau: HalfPlanePoint | complex) -> complex:
    """Quasimodular E2, obtained from its completion below V_MIN."""
    point = as_point(tau)
    if point.v >= V_MIN:
        return series("E2").evaluate(point)
    return eval_E2hat(point) + 3.0 / (math.pi * point.v)


def eval_Delta(tau: HalfPlanePoint | complex) -> complex:
    """Discriminant q prod (1 - q^n)^24, summed in log space.

    Raises:
        AccuracyError: If the neglected factors of the product matter.
    """
    point, factor = _reduced(tau)
    q = complex(nome(point.tau))
    n = np.arange(1, DEFAULT_ORDER + 1)
    log_prod = 24.0 * np.sum(np.log1p(-(q**n)))
    aq = abs(q)
    tail = 48.0 * aq ** (DEFAULT_ORDER + 1) / (1.0 - aq)
    if tail > _TAIL_TOL:
        raise AccuracyError(f"product tail {tail:.3e} too large at v = {point.v}")
    return complex(factor ** (-12) * q * cmath.exp(complex(log_prod)))


def _check_height(point: HalfPlanePoint) -> None:
    if _TWO_PI * point.v > MAX_EXPONENT:
        raise DomainError(
            f"J overflows at v = {point.v}: 2 pi v exceeds {MAX_EXPONENT:g}"
        )


def eval_J(tau: HalfPlanePoint | complex) -> complex:
    """Hauptmodul J = j - 744, normalized as q^-1 + O(q).

    Raises:
        DomainError: If 2 pi v of the reduced point exceeds the overflow cap.
    """
    point, _ = _reduced(tau)
    _check_height(point)
    q = complex(nome(point.tau))
    return checked(series("qJ").evaluate(point) / q, "J")


def eval_j(tau: HalfPlanePoint | complex) -> complex:
    """Klein j = J + 744."""
    return eval_J(tau) + 744.0


def j_growth_residual(t: float) -> float:
    """|J(it) e^(-2 pi t) - 1|, which decays like e^(-2 pi t)."""
    return abs(eval_J(HalfPlanePoint(0.0, t)) * math.exp(-_TWO_PI * t) - 1.0)


def _hz_minus_one(jz: complex, q: np.ndarray) -> np.ndarray:
    """H_z - 1 at nome values q; every entry must come from v >= V_MIN."""
    q = np.asarray(q, dtype=complex)
    numer = series("D").at_nome(q) + jz * q
    qjt = series("qJ").at_nome(q)
    denom = qjt - jz * q
    floor = POLE_FLOOR * (np.abs(q) + np.abs(qjt) + abs(jz) * np.abs(q))
    close = np.abs(denom) < floor
    if np.any(close):
        where = complex(np.atleast_1d(q)[np.atleast_1d(close)][0])
        raise PoleProximityError(
            f"J(tau) is within the pole floor of J(z) = {jz} (q = {where})"
        )
    return numer / denom


def eval_Hz(z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex) -> complex:
    """Weight-two meromorphic form E4^2 E6 / (Delta (J(tau) - J(z))).

    Raises:
        PoleProximityError: If |J(tau) - J(z)| < 1e-8 (1 + |J(tau)| + |J(z)|).
        DomainError: If z is too high for J(z) to be represented.
    """
    jz = eval_J(z)
    point, factor = _reduced(tau)
    fs = series("D")
    tail = fs.tail_bound(point.v)
    if tail > _TAIL_TOL:
        raise AccuracyError(f"q-series tail {tail:.3e} too large at v = {point.v}")
    value = 1.0 + complex(_hz_minus_one(jz, np.asarray(nome(point.tau)))[()])
    return checked(factor ** (-2) * value, "H_z")


def eval_Hzstar(z: HalfPlanePoint | complex, tau: HalfPlanePoint | complex) -> complex:
    """H_z* = H_z - E2hat."""
    return eval_Hz(z, tau) - eval_E2hat(tau)


# =============================================================================
# Vectorised restrictions to the imaginary axis
# =============================================================================


def _axis(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < V_MIN):
        raise DomainError(f"axis evaluation needs t >= {V_MIN}, got {t.min()}")
    return np.exp(-_TWO_PI * t).astype(complex)


def e2_minus_one_axis(t: np.ndarray) -> np.ndarray:
    """E2(it) - 1 for an array of t >= V_MIN, without the cancellation."""
    return series("E2").at_nome(_axis(t), drop_constant=True)


def hz_minus_one_axis(jz: complex, t: np.ndarray) -> np.ndarray:
    """H_z(it) - 1 for an array of t >= V_MIN, given J(z).

    Raises:
        PoleProximityError: If some it sits within the pole floor.
    """
    return _hz_minus_one(jz, _axis(t))


# =============================================================================
# The singular set
# =============================================================================


@dataclass(frozen=True)
class SingularSetDistance:
    """Distance of J(z) from the ray [J(i), infinity) of the real line."""

    j_value: complex
    distance_to_ray: float

    def on_ray(self, tol: float = 1e-10) -> bool:
        """True if J(z) is real and >= 984 up to a relative tolerance."""
        return self.distance_to_ray <= tol * (1.0 + abs(self.j_value))


def singular_set_distance(z: HalfPlanePoint | complex) -> SingularSetDistance:
    """How far z is from the orbit of the positive imaginary axis, in J."""
    jz = eval_J(z)
    if jz.real >= J_AT_I:
        dist = abs(jz.imag)
    else:
        dist = abs(jz - J_AT_I)
    return SingularSetDistance(j_value=jz, distance_to_ray=dist)
