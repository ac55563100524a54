"""Complex special functions.

Gamma and digamma come from ``scipy.special``. Everything the construction
needs beyond that (zeta and xi on the whole plane, incomplete gamma
functions, the two hypergeometric families that occur, polylogarithms on the
unit circle, divisor sums) is implemented here on top of numpy.

Branch conventions: principal logarithm everywhere, ``y**s`` means
``exp(s * Log y)`` with ``Arg`` in (-pi, pi].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from harmonic_lfun.config.model import SeriesBudget
from harmonic_lfun.errors import AccuracyError, BranchError, DomainError, PoleError
from harmonic_lfun.quadrature import gauss_kronrod

__all__ = [
    "EULER_GAMMA",
    "INT64_MAX",
    "TaggedValue",
    "bernoulli",
    "cpow",
    "divisor_sigma",
    "divisor_sigma_exact",
    "divisor_sigma_table",
    "gamma",
    "hyp1f1_asymptotic",
    "hyp1f1_s_splus1",
    "hyp2f1_ww2w",
    "hyp2f1_ww2w_with_derivative",
    "inc_gamma_asymptotic",
    "inc_gamma_generalized",
    "inc_gamma_lower",
    "inc_gamma_upper",
    "loggamma",
    "polylog",
    "polylog_regularized",
    "rising_factorial",
    "sigma1_dirichlet",
    "xi",
    "zeta",
]

EULER_GAMMA = 0.57721566490153286060651209008240243
INT64_MAX = 2**63 - 1
DEFAULT_SERIES = SeriesBudget()
_EM_TERMS = 8
_HYP1F1_SERIES_RADIUS = 40.0
_HYP2F1_SWITCH = 0.8
_HYP2F1_BANDS = (0.05, 0.3, _HYP2F1_SWITCH)
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class TaggedValue:
    """Series value together with the regime that produced it."""

    value: complex
    regime: str
    terms: int


def _is_nonpositive_integer(s: complex) -> bool:
    s = complex(s)
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


def cpow(base: complex, s: complex) -> complex:
    """Principal power ``exp(s * Log(base))``; ``0**s`` is 0 for Re s > 0."""
    base = complex(base)
    if base == 0:
        if complex(s).real > 0:
            return 0j
        raise PoleError(f"0**{s} is undefined")
    return cmath.exp(complex(s) * cmath.log(base))


# =============================================================================
# Gamma, Bernoulli numbers, zeta, xi
# =============================================================================


def gamma(s: complex) -> complex:
    """Gamma function of a complex argument.

    Raises:
        PoleError: At s = 0, -1, -2, ...
    """
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s = {s.real:g}")
    if s.imag == 0.0:
        return complex(special.gamma(s.real))
    return complex(special.gamma(s))


def loggamma(s: complex) -> complex:
    """Principal-branch log Gamma (scipy's ``loggamma``)."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s = {s.real:g}")
    return complex(special.loggamma(s))


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, B_1 = -1/2
    table = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * table[j]
            binom = binom * (m + 1 - j) // (j + 1)
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n < 0:
        raise DomainError(f"Bernoulli index must be >= 0, got {n}")
    size = max(32, n)
    return _bernoulli_table(size)[n]


def _zeta_em(s: complex, times_pole: bool = False) -> complex:
    """Euler-Maclaurin sum for zeta, optionally multiplied by (s - 1).

    Cutoff N = ceil(|s|) + 10 with eight Bernoulli correction terms.
    """
    n_cut = math.ceil(abs(s)) + 10
    n = np.arange(1, n_cut, dtype=float)
    terms = np.exp(-s * np.log(n))
    head = complex(math.fsum(terms.real), math.fsum(terms.imag))
    log_n = math.log(n_cut)
    n_pow = cmath.exp(-s * log_n)
    tail = 0.5 * n_pow
    rising = s
    power = n_pow / n_cut
    fact = 2.0
    for k in range(1, _EM_TERMS + 1):
        tail += float(bernoulli(2 * k)) / fact * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= n_cut * n_cut
        fact *= (2 * k + 1) * (2 * k + 2)
    pole_term = n_cut * n_pow  # N**(1-s)
    if times_pole:
        return (head + tail) * (s - 1) + pole_term
    return head + tail + pole_term / (s - 1)


def zeta(s: complex) -> complex:
    """Riemann zeta function on the complex plane.

    Euler-Maclaurin summation for Re s >= 0, the functional equation for
    Re s < 0. Non-positive integers use exact Bernoulli values.

    Raises:
        PoleError: At s = 1.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if _is_nonpositive_integer(s):
        m = -int(s.real)
        return complex(float((-1) ** m * bernoulli(m + 1) / (m + 1)))
    if s.real >= 0:
        return _zeta_em(s)
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    log_factor = s * math.log(2.0) + (s - 1) * math.log(math.pi) + loggamma(1 - s)
    return cmath.exp(log_factor) * cmath.sin(math.pi * s / 2) * _zeta_em(1 - s)


def xi(s: complex) -> complex:
    """Completed zeta ``xi(s) = 1/2 pi^(-s/2) s (s-1) Gamma(s/2) zeta(s)``.

    Entire; evaluated on Re s >= 1/2 and reflected through xi(s) = xi(1-s).
    """
    s = complex(s)
    if s.real < 0.5:
        s = 1 - s
    pole_free = _zeta_em(s, times_pole=True)  # (s-1) zeta(s)
    return 0.5 * cmath.exp(-s / 2 * math.log(math.pi) + loggamma(s / 2)) * s * pole_free


def rising_factorial(a: complex, ell: int) -> complex:
    """Pochhammer symbol (a)_ell = a (a+1) ... (a+ell-1); (a)_0 = 1."""
    if ell < 0:
        raise DomainError(f"rising factorial order must be >= 0, got {ell}")
    out = complex(1.0)
    for j in range(ell):
        out *= a + j
    return out


# =============================================================================
# Incomplete gamma functions
# =============================================================================


def _upper_continued_fraction(s: complex, y: float, budget: SeriesBudget) -> complex:
    """Lentz evaluation of the Legendre continued fraction for Gamma(s, y)."""
    tiny = 1e-300
    b = y + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, budget.max_terms + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < max(budget.rel_tol * 1e-2, 4.0 * _EPS):
            return cmath.exp(-y + s * math.log(y)) * h
    raise AccuracyError(f"continued fraction for Gamma({s}, {y}) did not converge")


def _lower_series(s: complex, y: float, budget: SeriesBudget) -> complex:
    """gamma(s, y) = y^s e^-y sum_n y^n / (s (s+1) ... (s+n))."""
    term = 1.0 / s
    total = term
    for n in range(1, budget.max_terms + 1):
        term *= y / (s + n)
        total += term
        if abs(term) < abs(total) * budget.rel_tol * 1e-2:
            return cmath.exp(-y + s * math.log(y)) * total
    raise AccuracyError(f"series for gamma({s}, {y}) did not converge")


def inc_gamma_upper(
    s: complex, y: float, budget: SeriesBudget = DEFAULT_SERIES
) -> complex:
    """Upper incomplete gamma Gamma(s, y) for y > 0.

    Continued fraction for y > Re s + 1, otherwise Gamma(s) minus the lower
    series. Arguments with Re s < 1/2 are lifted by the recurrence
    Gamma(s+1, y) = s Gamma(s, y) + y^s e^-y, and non-positive integers
    start from E_1.

    Raises:
        DomainError: If y <= 0.
    """
    s = complex(s)
    y = float(y)
    if not y > 0:
        raise DomainError(f"Gamma(s, y) needs y > 0, got y = {y}")
    if y > s.real + 1.0 and y > 1.0:
        return _upper_continued_fraction(s, y, budget)
    if _is_nonpositive_integer(s):
        m = -int(s.real)
        value = complex(special.exp1(y))
        for k in range(1, m + 1):
            value = (value - y ** (-k) * math.exp(-y)) / (-k)
        return value
    if s.real < 0.5:
        lift = math.ceil(0.5 - s.real)
        value = inc_gamma_upper(s + lift, y, budget)
        for k in range(lift - 1, -1, -1):
            sk = s + k
            value = (value - cmath.exp(-y + sk * math.log(y))) / sk
        return value
    return gamma(s) - _lower_series(s, y, budget)


def inc_gamma_lower(
    s: complex, y: float, budget: SeriesBudget = DEFAULT_SERIES
) -> complex:
    """Lower incomplete gamma gamma(s, y) by its power series (Re s > 0)."""
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"gamma(s, y) series needs Re s > 0, got s = {s}")
    if not y > 0:
        raise DomainError(f"gamma(s, y) needs y > 0, got y = {y}")
    return _lower_series(s, float(y), budget)


def inc_gamma_asymptotic(s: complex, y: float, n_terms: int) -> tuple[complex, complex]:
    """Large-y expansion of Gamma(s, y) truncated after ``n_terms`` terms.

    Gamma(s, y) ~ y^(s-1) e^-y sum_n (-1)^n (1-s)_n y^-n.

    Returns:
        The truncated sum and the first omitted term.
    """
    s = complex(s)
    prefactor = cmath.exp(-y + (s - 1) * math.log(y))
    total = 0j
    term = complex(1.0)
    for n in range(n_terms):
        total += term
        term *= -(1 - s + n) / y
    return prefactor * total, prefactor * term


def inc_gamma_generalized(
    s: complex,
    y1: float,
    y2: float,
    *,
    rel_tol: float = 1e-14,
) -> complex:
    """Generalised incomplete gamma, the integral of e^-t t^(s-1) over [y1, y2].

    Both limits must share a sign. For negative limits t^(s-1) is taken on
    the principal branch, Log t = log|t| + i pi.

    Raises:
        DomainError: If y1 * y2 <= 0.
    """
    s = complex(s)
    y1 = float(y1)
    y2 = float(y2)
    if not y1 * y2 > 0:
        raise DomainError(f"Gamma(s, y1, y2) needs y1 * y2 > 0, got ({y1}, {y2})")
    if y1 == y2:
        return 0j

    if y1 > 0:

        def integrand(t: np.ndarray) -> np.ndarray:
            return np.exp(-t + (s - 1) * np.log(t))

        res = gauss_kronrod(integrand, y1, y2, abs_tol=1e-300, rel_tol=rel_tol, max_subdiv=2000)
        return res.value

    # t = -u, u > 0: integral = -e^{i pi (s-1)} * int_{|y1|}^{|y2|} e^u u^(s-1) du
    def mirrored(u: np.ndarray) -> np.ndarray:
        return np.exp(u + (s - 1) * np.log(u))

    res = gauss_kronrod(mirrored, -y1, -y2, abs_tol=1e-300, rel_tol=rel_tol, max_subdiv=2000)
    return -cmath.exp(1j * math.pi * (s - 1)) * res.value


# =============================================================================
# Confluent hypergeometric 1F1(s; s+1; y)
# =============================================================================


def hyp1f1_asymptotic(s: complex, y: complex, n_terms: int) -> tuple[complex, complex]:
    """Dominant large-y expansion s e^y y^-1 sum_{j<N} (1-s)_j y^-j.

    Returns:
        The truncated sum and the first omitted term.
    """
    s = complex(s)
    y = complex(y)
    prefactor = s * cmath.exp(y) / y
    total = 0j
    term = complex(1.0)
    for j in range(n_terms):
        total += term
        term *= (1 - s + j) / y
    return prefactor * total, prefactor * term


def _hyp1f1_series(s: complex, y: complex, budget: SeriesBudget) -> TaggedValue:
    if y.real >= 0:
        # sum s/(s+n) y^n/n!
        power = complex(1.0)
        total = complex(1.0)
        for n in range(1, budget.max_terms + 1):
            power *= y / n
            term = s / (s + n) * power
            total += term
            if abs(term) <= budget.rel_tol * 1e-2 * abs(total) and n > abs(y):
                return TaggedValue(total, "series", n)
    else:
        # Kummer transform: e^y sum (-y)^n / (s+1)_n
        term = complex(1.0)
        total = complex(1.0)
        for n in range(1, budget.max_terms + 1):
            term *= -y / (s + n)
            total += term
            if abs(term) <= budget.rel_tol * 1e-2 * abs(total) and n > abs(y):
                return TaggedValue(cmath.exp(y) * total, "kummer", n)
    raise AccuracyError(f"1F1({s}; {s}+1; {y}) series did not converge")


def _hyp1f1_large(s: complex, y: complex, budget: SeriesBudget) -> TaggedValue:
    # Algebraic part Gamma(s+1) (-y)^-s is exact for the s, s+1 pair.
    algebraic = cmath.exp(loggamma(s + 1) - s * cmath.log(-y))
    prefactor = s * cmath.exp(y) / y
    total = 0j
    term = complex(1.0)
    best = math.inf
    for j in range(budget.max_terms):
        size = abs(term)
        if size > best:
            break
        total += term
        best = size
        if size <= budget.rel_tol * abs(total):
            exponential = prefactor * total
            if y.real >= 0 and abs(y.imag) <= y.real:
                return TaggedValue(exponential, "asymptotic", j + 1)
            return TaggedValue(exponential + algebraic, "asymptotic", j + 1)
        term *= (1 - s + j) / y
    exponential = prefactor * total
    if y.real < 0 and abs(exponential) <= budget.rel_tol * abs(algebraic):
        return TaggedValue(exponential + algebraic, "asymptotic", budget.max_terms)
    raise AccuracyError(
        f"1F1({s}; {s}+1; {y}) falls in the gap between series and asymptotic regimes"
    )


def hyp1f1_s_splus1(
    s: complex, y: complex, budget: SeriesBudget = DEFAULT_SERIES
) -> TaggedValue:
    """Confluent hypergeometric 1F1(s; s+1; y) with its regime tag.

    Kummer's series (or its transform for Re y < 0) for |y| <= 40 and the
    large-argument expansion beyond.

    Raises:
        PoleError: If s is a non-positive integer.
        AccuracyError: If neither regime reaches the tolerance.
    """
    s = complex(s)
    y = complex(y)
    if _is_nonpositive_integer(s):
        raise PoleError(f"1F1(s; s+1; y) is undefined at s = {s.real:g}")
    if y == 0:
        return TaggedValue(complex(1.0), "series", 0)
    if abs(y) <= _HYP1F1_SERIES_RADIUS:
        return _hyp1f1_series(s, y, budget)
    return _hyp1f1_large(s, y, budget)


# =============================================================================
# Gauss hypergeometric 2F1(w, w; 2w; x)
# =============================================================================


def _hyp2f1_power_series(
    w: complex, x: np.ndarray, derivative: bool
) -> tuple[np.ndarray, np.ndarray]:
    value = np.ones(x.shape, dtype=complex)
    deriv = np.zeros(x.shape, dtype=complex)
    if x.size == 0:
        return value, deriv
    coeff = complex(1.0)
    power = np.ones(x.shape)
    for n in range(1, 2000):
        # d/dx of a_n x^n = n a_n x^(n-1), with a_{n-1} x^(n-1) in hand
        coeff *= (w + n - 1) ** 2 / ((2 * w + n - 1) * n)
        if derivative:
            deriv += n * coeff * power
        power = power * x
        term = coeff * power
        value += term
        if np.max(np.abs(term)) < 1e-17 * np.min(np.abs(value)) and (
            not derivative or np.max(n * np.abs(coeff) * power) < 1e-17 * np.min(np.abs(deriv))
        ):
            break
    return value, deriv


def _hyp2f1_banded(
    w: complex, x: np.ndarray, derivative: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Power series evaluated band by band so small x stop early."""
    value = np.empty(x.shape, dtype=complex)
    deriv = np.empty(x.shape, dtype=complex)
    lower = -np.inf
    for upper in _HYP2F1_BANDS:
        band = (x > lower) & (x <= upper)
        if np.any(band):
            value[band], deriv[band] = _hyp2f1_power_series(w, x[band], derivative)
        lower = upper
    return value, deriv


def _hyp2f1_connection(
    w: complex, omx: np.ndarray, derivative: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Log-type connection formula at 1 - x for c = a + b."""
    norm = cmath.exp(loggamma(2 * w) - 2 * loggamma(w))
    log_omx = np.log(omx)
    psi_k1 = -EULER_GAMMA
    psi_wk = complex(special.psi(w))
    coeff = complex(1.0)
    power = np.ones(omx.shape)
    value = np.zeros(omx.shape, dtype=complex)
    deriv = np.zeros(omx.shape, dtype=complex)
    for k in range(0, 2000):
        bracket = 2 * psi_k1 - 2 * psi_wk - log_omx
        term = coeff * power * bracket
        value += term
        if derivative:
            # d/dx [ (1-x)^k (A_k - log(1-x)) ] = (1-x)^(k-1) [1 - k (A_k - log(1-x))]
            deriv += coeff * (power / omx) * (1.0 - k * bracket)
        if k > 2 and np.max(np.abs(term)) < 1e-17 * np.min(np.abs(value)):
            break
        coeff *= ((w + k) / (k + 1)) ** 2
        psi_k1 += 1.0 / (k + 1)
        psi_wk += 1.0 / (w + k)
        power = power * omx
    return norm * value, norm * deriv


def _as_unit_interval(x: np.ndarray | float, one_minus_x: np.ndarray | float | None):
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if one_minus_x is None:
        omx = 1.0 - x_arr
    else:
        omx = np.atleast_1d(np.asarray(one_minus_x, dtype=float))
    if np.any(x_arr < 0) or np.any(omx <= 0) or np.any(~np.isfinite(x_arr)):
        raise DomainError("2F1(w, w; 2w; x) needs 0 <= x < 1")
    return x_arr, omx


def hyp2f1_ww2w_with_derivative(
    w: complex,
    x: np.ndarray | float,
    one_minus_x: np.ndarray | float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Values and x-derivatives of 2F1(w, w; 2w; x) on arrays.

    Power series for x <= 0.8, the log-type connection formula at 1 - x
    above. Pass ``one_minus_x`` when it is known to better precision than
    ``1 - x`` (near the diagonal of a kernel).

    Raises:
        DomainError: Unless 0 <= x < 1 everywhere.
    """
    w = complex(w)
    x_arr, omx = _as_unit_interval(x, one_minus_x)
    value = np.empty(x_arr.shape, dtype=complex)
    deriv = np.empty(x_arr.shape, dtype=complex)
    near = x_arr > _HYP2F1_SWITCH
    value[~near], deriv[~near] = _hyp2f1_banded(w, x_arr[~near], True)
    if np.any(near):
        value[near], deriv[near] = _hyp2f1_connection(w, omx[near], True)
    return value, deriv


def hyp2f1_ww2w(
    w: complex,
    x: np.ndarray | float,
    one_minus_x: np.ndarray | float | None = None,
) -> np.ndarray | complex:
    """Gauss hypergeometric 2F1(w, w; 2w; x) for 0 <= x < 1.

    Scalars in, scalar out; arrays are evaluated elementwise.

    Raises:
        DomainError: Unless 0 <= x < 1.
    """
    scalar = np.ndim(x) == 0
    w = complex(w)
    x_arr, omx = _as_unit_interval(x, one_minus_x)
    value = np.empty(x_arr.shape, dtype=complex)
    near = x_arr > _HYP2F1_SWITCH
    value[~near] = _hyp2f1_banded(w, x_arr[~near], False)[0]
    if np.any(near):
        value[near] = _hyp2f1_connection(w, omx[near], False)[0]
    return complex(value[0]) if scalar else value


# =============================================================================
# Polylogarithm on the unit circle
# =============================================================================


def _zeta_at_integer(n: int) -> float:
    if n <= 0:
        m = -n
        return float((-1) ** m * bernoulli(m + 1) / (m + 1))
    return zeta(n).real


def polylog(ell: int, x: float) -> complex:
    """Li_ell(e^(2 pi i x)) for integer ell >= 1 and non-integer x.

    Li_1 is -Log(1 - e^(2 pi i x)) with 1 - e^(2 pi i x) formed without
    cancellation. Higher orders use the expansion in mu = 2 pi i x' around
    Z = 1, x' the representative of x in (-1/2, 1/2], which converges
    geometrically with ratio |x'| <= 1/2.

    Raises:
        BranchError: If x is an integer.
        DomainError: If ell < 1.
    """
    if ell < 1:
        raise DomainError(f"polylog order must be >= 1, got {ell}")
    x = float(x)
    frac = x - math.floor(x + 0.5)
    if frac == -0.5:
        frac = 0.5
    if frac == 0.0:
        raise BranchError(f"Li_{ell}(e^(2 pi i x)) sits on the branch point at x = {x}")

    if ell == 1:
        sin_px = math.sin(math.pi * frac)
        one_minus_z = complex(2.0 * sin_px * sin_px, -math.sin(2.0 * math.pi * frac))
        return -cmath.log(one_minus_z)

    mu = 2j * math.pi * frac
    harmonic = math.fsum(1.0 / j for j in range(1, ell))
    total = complex(0.0)
    power = complex(1.0)
    factorial = 1.0
    for k in range(200):
        if k == ell - 1:
            total += power / factorial * (harmonic - cmath.log(-mu))
        else:
            term = _zeta_at_integer(ell - k) * power / factorial
            total += term
            if k > ell + 2 and term != 0 and abs(term) < 1e-18 * max(abs(total), 1.0):
                break
        power *= mu
        factorial *= k + 1
    return total


def polylog_regularized(
    ell: int, x: float, eps: float, y: float = 1.0, max_terms: int = 5_000_000
) -> complex:
    """Damped series sum e^(-2 pi n (i x + eps y)) / (n (1 + eps))^ell.

    As eps -> 0 this tends to Li_ell(e^(-2 pi i x)) for ell >= 2.
    """
    if eps <= 0 or y <= 0:
        raise DomainError("damping needs eps > 0 and y > 0")
    decay = 2.0 * math.pi * eps * y
    # Stop where e^(-decay n) n^-ell drops below double precision.
    n_max = int(min(max_terms, max(1000.0, 40.0 / decay)))
    n = np.arange(1, n_max + 1, dtype=float)
    terms = np.exp(-decay * n - 2j * math.pi * x * n) / (n * (1.0 + eps)) ** ell
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


# =============================================================================
# Divisor sums
# =============================================================================


def divisor_sigma(ell: int, n: int) -> int:
    """Exact sigma_ell(n) = sum of d^ell over divisors d of n.

    Raises:
        DomainError: If n < 1 or ell < 0.
        OverflowError: If the result does not fit a signed 64-bit integer.
    """
    if n < 1 or ell < 0:
        raise DomainError(f"sigma_{ell}({n}) needs n >= 1 and ell >= 0")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**ell
            other = n // d
            if other != d:
                total += other**ell
        d += 1
    if total > INT64_MAX:
        raise OverflowError(f"sigma_{ell}({n}) = {total} exceeds the 64-bit range")
    return total


@lru_cache(maxsize=32)
def divisor_sigma_exact(ell: int, n_max: int) -> tuple[int, ...]:
    """Exact sigma_ell(n) for n = 0..n_max as Python integers (entry 0 is 0)."""
    table = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dl = d**ell
        for m in range(d, n_max + 1, d):
            table[m] += dl
    return tuple(table)


def divisor_sigma_table(ell: int, n_max: int) -> np.ndarray:
    """Float array of sigma_ell(n) for n = 0..n_max (entry 0 is 0).

    Exact integers are rounded to double only at the end.
    """
    return np.array([float(v) for v in divisor_sigma_exact(ell, n_max)])


def sigma1_dirichlet(s: complex, n_max: int, tail: bool = True) -> complex:
    """Partial sum of sum sigma_1(n) n^-s, optionally with its mean tail.

    The tail beyond n_max is replaced by (pi^2/6) times the integral of
    x^(1-s) from n_max + 1/2, the average order of sigma_1(n)/n.
    """
    s = complex(s)
    n = np.arange(1, n_max + 1, dtype=float)
    sig = divisor_sigma_table(1, n_max)[1:]
    terms = sig * np.exp(-s * np.log(n))
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    if tail:
        total += math.pi**2 / 6 * cpow(n_max + 0.5, 2 - s) / (s - 2)
    return total
