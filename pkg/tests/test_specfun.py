"""Tests for the special functions, against mpmath."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from harmonic_lfun.errors import BranchError, DomainError, PoleError
from harmonic_lfun.specfun import (
    bernoulli,
    cpow,
    divisor_sigma,
    divisor_sigma_exact,
    gamma,
    hyp1f1_asymptotic,
    hyp1f1_s_splus1,
    hyp2f1_ww2w,
    hyp2f1_ww2w_with_derivative,
    inc_gamma_asymptotic,
    inc_gamma_generalized,
    inc_gamma_lower,
    inc_gamma_upper,
    polylog,
    polylog_regularized,
    rising_factorial,
    sigma1_dirichlet,
    xi,
    zeta,
)


def rel(a: complex, b: complex) -> float:
    return abs(complex(a) - complex(b)) / abs(complex(b))


# =============================================================================
# Gamma, Bernoulli, zeta, xi
# =============================================================================


class TestGammaZeta:
    """Gamma, zeta and xi."""

    @pytest.mark.parametrize("s", [0.5, 2.5 + 1.0j, -1.5 + 0.3j, 7.0])
    def test_gamma_matches_mpmath(self, s):
        assert rel(gamma(s), mpmath.gamma(s)) < 1e-13

    def test_gamma_poles(self):
        with pytest.raises(PoleError, match="pole"):
            gamma(-2)

    def test_bernoulli_exact(self):
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(12) == Fraction(-691, 2730)
        assert bernoulli(13) == 0

    @pytest.mark.parametrize("s", [2.0, 0.5 + 14.134725j, -1.5, -2.5 + 3.0j, 0.3])
    def test_zeta_matches_mpmath(self, s):
        expected = complex(mpmath.zeta(s))
        # near the first zero only an absolute bound is meaningful
        assert abs(zeta(s) - expected) < 1e-11 * max(abs(expected), 1.0)

    def test_zeta_at_nonpositive_integers(self):
        assert zeta(0) == pytest.approx(-0.5)
        assert zeta(-1) == pytest.approx(-1 / 12)
        assert zeta(-2) == 0

    def test_zeta_pole(self):
        with pytest.raises(PoleError):
            zeta(1)

    @pytest.mark.parametrize("s", [0.3 + 2.0j, 2.5 - 1.0j, -3.0 + 0.5j])
    def test_xi_functional_equation(self, s):
        assert rel(xi(1 - s), xi(s)) < 1e-10

    def test_xi_at_two(self):
        # xi(2) = pi / 6
        assert xi(2.0) == pytest.approx(math.pi / 6, rel=1e-13)

    def test_rising_factorial(self):
        assert rising_factorial(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
        assert rising_factorial(2 + 1j, 0) == 1

    def test_rising_factorial_rejects_negative_order(self):
        with pytest.raises(DomainError, match=">= 0"):
            rising_factorial(1.0, -1)

    def test_cpow_principal_branch(self):
        assert cpow(-1.0, 0.5) == pytest.approx(1j)
        assert cpow(0.0, 1.5) == 0
        with pytest.raises(PoleError):
            cpow(0.0, -0.5)


# =============================================================================
# Incomplete gamma
# =============================================================================


class TestIncompleteGamma:
    """Upper, lower and generalized incomplete gamma."""

    @pytest.mark.parametrize(
        ("s", "y"),
        [(1.5, 0.3), (1.5 + 0.5j, 30.0), (-0.7 + 0.2j, 2.0), (-2, 1.5), (0.2, 5.0)],
    )
    def test_upper_matches_mpmath(self, s, y):
        assert rel(inc_gamma_upper(s, y), mpmath.gammainc(s, y)) < 1e-11

    def test_lower_matches_mpmath(self):
        s, y = 2.2 + 0.4j, 3.0
        assert rel(inc_gamma_lower(s, y), mpmath.gammainc(s, 0, y)) < 1e-12

    def test_lower_requires_positive_real_part(self):
        with pytest.raises(DomainError, match="Re s > 0"):
            inc_gamma_lower(-0.5, 1.0)

    def test_upper_requires_positive_y(self):
        with pytest.raises(DomainError, match="y > 0"):
            inc_gamma_upper(1.0, 0.0)

    def test_generalized_matches_mpmath(self):
        s = 1.5 + 0.7j
        assert rel(inc_gamma_generalized(s, 1.0, 7.5), mpmath.gammainc(s, 1.0, 7.5)) < 1e-12

    def test_generalized_rejects_sign_change(self):
        with pytest.raises(DomainError, match="y1 \\* y2 > 0"):
            inc_gamma_generalized(1.0, -1.0, 2.0)

    def test_generalized_agrees_with_1f1_difference(self):
        s, y1, y2 = 2.3, 0.5, 2.0

        def lower(y):
            return y**s * hyp1f1_s_splus1(s, -y).value

        assert rel(inc_gamma_generalized(s, y1, y2), (lower(y2) - lower(y1)) / s) < 1e-10

    def test_asymptotic_envelope(self):
        s, y = 1.5 + 0.5j, 30.0
        approx, nxt = inc_gamma_asymptotic(s, y, 8)
        assert abs(inc_gamma_upper(s, y) - approx) <= 10 * abs(nxt)


# =============================================================================
# Hypergeometric functions
# =============================================================================


class TestHypergeometric:
    """1F1(s; s+1; y) and 2F1(w, w; 2w; x)."""

    @pytest.mark.parametrize("y", [3.0, -5.0, 2.0 + 1.0j, 50.0, -60.0])
    def test_hyp1f1_matches_mpmath(self, y):
        s = 0.7 + 0.4j
        assert rel(hyp1f1_s_splus1(s, y).value, mpmath.hyp1f1(s, s + 1, y)) < 1e-10

    def test_hyp1f1_regime_tags(self):
        assert hyp1f1_s_splus1(1.5, 3.0).regime == "series"
        assert hyp1f1_s_splus1(1.5, -3.0).regime == "kummer"
        assert hyp1f1_s_splus1(1.5, 50.0).regime == "asymptotic"

    def test_hyp1f1_pole(self):
        with pytest.raises(PoleError):
            hyp1f1_s_splus1(-2, 1.0)

    def test_hyp1f1_asymptotic_envelope(self):
        s, y = 0.7 + 0.4j, 35.0
        approx, nxt = hyp1f1_asymptotic(s, y, 6)
        assert abs(hyp1f1_s_splus1(s, y).value - approx) <= 10 * abs(nxt)

    @pytest.mark.parametrize("x", [0.01, 0.2, 0.5, 0.9, 0.999])
    def test_hyp2f1_matches_mpmath(self, x):
        w = 1.5 + 0.3j
        assert rel(hyp2f1_ww2w(w, x), mpmath.hyp2f1(w, w, 2 * w, x)) < 1e-10

    def test_hyp2f1_vectorised_with_derivative(self):
        w = 2.0
        x = np.array([0.1, 0.6, 0.95])
        value, deriv = hyp2f1_ww2w_with_derivative(w, x)
        for xi_, v, d in zip(x, value, deriv, strict=True):
            assert rel(v, mpmath.hyp2f1(w, w, 2 * w, xi_)) < 1e-10
            assert rel(d, mpmath.diff(lambda t: mpmath.hyp2f1(w, w, 2 * w, t), xi_)) < 1e-8


# =============================================================================
# Polylogarithm
# =============================================================================


class TestPolylog:
    """Li_ell on the unit circle."""

    @pytest.mark.parametrize("ell", [1, 2, 3, 4])
    @pytest.mark.parametrize("x", [0.3, 0.5, -0.2, 0.01])
    def test_matches_mpmath(self, ell, x):
        expected = mpmath.polylog(ell, mpmath.exp(2j * mpmath.pi * x))
        assert abs(polylog(ell, x) - complex(expected)) < 1e-12 * max(1.0, abs(expected))

    def test_closed_forms(self):
        assert polylog(2, 0.5) == pytest.approx(-(math.pi**2) / 12, rel=1e-13)
        assert polylog(2, 0.25) == pytest.approx(complex(-(math.pi**2) / 48, 0.915965594177219), rel=1e-12)

    def test_li1_is_minus_log(self):
        x = 0.3
        assert polylog(1, x) == pytest.approx(-cmath.log(1 - cmath.exp(2j * math.pi * x)))

    def test_branch_point(self):
        with pytest.raises(BranchError, match="branch"):
            polylog(2, 1.0)

    def test_order_must_be_positive(self):
        with pytest.raises(DomainError, match=">= 1"):
            polylog(0, 0.3)

    def test_regularized_limit_is_linear(self):
        x = 0.3
        target = polylog(2, -x)
        errors = [abs(polylog_regularized(2, x, eps) - target) for eps in (1e-2, 1e-3, 1e-4)]
        assert errors[0] / errors[1] == pytest.approx(10.0, rel=0.3)
        assert errors[1] / errors[2] == pytest.approx(10.0, rel=0.3)


# =============================================================================
# Divisor sums
# =============================================================================


class TestDivisorSums:
    """sigma_ell(n) and the Dirichlet series of sigma_1."""

    def test_sigma_values(self):
        assert divisor_sigma(1, 12) == 28
        assert divisor_sigma(0, 12) == 6
        assert divisor_sigma(3, 5) == 126

    def test_exact_table(self):
        assert divisor_sigma_exact(1, 6) == (0, 1, 3, 4, 7, 6, 12)

    def test_sigma_rejects_zero(self):
        with pytest.raises(DomainError):
            divisor_sigma(1, 0)

    def test_dirichlet_series_is_zeta_product(self):
        assert rel(sigma1_dirichlet(4.0, 5000), zeta(4.0) * zeta(3.0)) < 1e-9
