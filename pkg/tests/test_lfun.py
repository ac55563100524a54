"""Tests for L(E2hat, s), L_z(s) and the family I_(w,s)."""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from pydantic import ValidationError

from harmonic_lfun.config import QuadratureSpec
from harmonic_lfun.errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    FitError,
    ParameterError,
    PoleError,
    SingularSetError,
)
from harmonic_lfun.lfun import (
    DEFAULT_GRID_S,
    DEFAULT_GRID_Z,
    Branch,
    GeneralizedWeights,
    I_ws,
    J_integral,
    L_E2hat,
    L_E2hat_closed_form,
    L_z,
    L_z_general,
    arg_form_residual,
    correction_coefficients,
    limit_experiment,
    limit_target,
    subtracted_residual,
)
from harmonic_lfun.modforms import M211, S, T


def rel(a: complex, b: complex) -> float:
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1.0)


Z = DEFAULT_GRID_Z[0]


# =============================================================================
# L(E2hat, s)
# =============================================================================


class TestLE2hat:
    """The harmonic Eisenstein L-function."""

    @pytest.mark.parametrize("s", [1.5, 2.5, 1.5 + 0.7j, -0.5])
    def test_matches_closed_form(self, s):
        assert rel(L_E2hat(s).value, L_E2hat_closed_form(s)) < 1e-8

    def test_closed_form_matches_mpmath(self):
        s = 2.5 + 0.4j
        expected = (
            -24
            * (2 * mpmath.pi) ** (-s)
            * mpmath.gamma(s)
            * mpmath.zeta(s)
            * mpmath.zeta(s - 1)
        )
        assert rel(L_E2hat_closed_form(s), complex(expected)) < 1e-12

    def test_functional_equation(self):
        s = 1.5 + 0.7j
        assert abs(L_E2hat(2 - s).value + L_E2hat(s).value) < 1e-9

    @pytest.mark.parametrize("t0", [0.5, 2.0])
    def test_independent_of_t0(self, t0):
        s = 1.5 + 0.7j
        moved = L_E2hat(s, QuadratureSpec(t0=t0)).value
        assert rel(moved, L_E2hat(s).value) < 1e-8

    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_poles(self, s):
        with pytest.raises(PoleError, match="pole"):
            L_E2hat(s)

    def test_residue_at_one(self):
        delta = 1e-4
        assert delta * L_E2hat(1 + delta).value == pytest.approx(6 / math.pi, rel=1e-3)

    def test_error_estimate_is_reported(self):
        res = L_E2hat(1.5)
        assert 0 < res.err_est < 1e-8
        assert res.diagnostics["panels"] >= 1

    def test_limit_target(self):
        assert limit_target(1.5) == pytest.approx(2j * math.pi * L_E2hat_closed_form(1.5))


# =============================================================================
# L_z(s)
# =============================================================================


class TestLz:
    """L_z through the H_z decomposition."""

    @pytest.mark.parametrize("s", DEFAULT_GRID_S)
    def test_functional_equation(self, s):
        assert rel(-L_z(Z, 2 - s).value, L_z(Z, s).value) < 1e-7

    @pytest.mark.parametrize("gamma", [S, T, M211])
    def test_invariance(self, gamma):
        s = DEFAULT_GRID_S[1]
        assert rel(L_z(gamma.act(Z), s).value, L_z(Z, s).value) < 1e-7

    def test_independent_of_t0(self):
        base = L_z(Z, 1.4).value
        for t0 in (0.5, 2.0):
            assert rel(L_z(Z, 1.4, QuadratureSpec(t0=t0)).value, base) < 1e-8

    def test_reflection_conjugates(self):
        s = 1.5 + 0.3j
        mirrored = L_z(-Z.conjugate(), s.conjugate()).value
        assert rel(mirrored, -L_z(Z, s).value.conjugate()) < 1e-8

    def test_other_grid_points(self):
        for z in DEFAULT_GRID_Z[1:]:
            res = L_z(z, 1.4)
            assert math.isfinite(abs(res.value))
            assert res.err_est < 1e-7 * max(abs(res.value), 1.0)

    def test_singular_set(self):
        with pytest.raises(SingularSetError, match="imaginary axis"):
            L_z(2j, 1.4)

    def test_pole(self):
        with pytest.raises(PoleError):
            L_z(Z, 2)


class TestJIntegral:
    """The two subtracted integrals of H_z."""

    def test_inversion(self):
        z, s, y = 0.3 + 1.2j, 1.4, 2.0
        zero = J_integral(z, s, Branch.AT_ZERO, 0.0, 1.0 / y).value
        inf = J_integral(z, 2.0 - s, Branch.AT_INFINITY, y, math.inf).value
        assert rel(zero, -inf) < 1e-8

    def test_ranges_add_up(self):
        whole = J_integral(Z, 1.4, "at_infinity", 1.0, math.inf).value
        left = J_integral(Z, 1.4, "at_infinity", 1.0, 2.0).value
        right = J_integral(Z, 1.4, "at_infinity", 2.0, math.inf).value
        assert rel(left + right, whole) < 1e-9

    def test_at_infinity_needs_positive_start(self):
        with pytest.raises(ParameterError, match="y1 > 0"):
            J_integral(Z, 1.4, Branch.AT_INFINITY, 0.0, 1.0)

    def test_at_zero_needs_finite_end(self):
        with pytest.raises(ParameterError, match="finite y2"):
            J_integral(Z, 1.4, Branch.AT_ZERO, 0.5, math.inf)

    def test_empty_range(self):
        with pytest.raises(ParameterError, match="y1 < y2"):
            J_integral(Z, 1.4, Branch.AT_ZERO, 2.0, 1.0)

    def test_unknown_branch(self):
        with pytest.raises(ValueError):
            J_integral(Z, 1.4, "sideways", 1.0, 2.0)


# =============================================================================
# I_(w,s)
# =============================================================================


class TestIws:
    """The lattice-built family and its damped transform."""

    def test_w_one_is_lz(self):
        assert I_ws(Z, 1.0, 1.4).value == pytest.approx(L_z(Z, 1.4).value)

    def test_w_one_validates_split(self):
        with pytest.raises(ValidationError, match="must exceed t0"):
            I_ws(Z, 1.0, 1.4, t0=5.0, q=QuadratureSpec(tail_T=4.0))

    @pytest.mark.parametrize("w", [0.5, 1.4, 0.6, 2.0 - 1.4])
    def test_singular_parameters(self, w):
        with pytest.raises(ParameterError, match="singular"):
            I_ws(Z, w, 1.4)

    def test_singular_parameters_off_real_axis(self):
        s = 0.3 + 0.7j
        with pytest.raises(ParameterError, match="singular"):
            I_ws(Z, 2.0 - s + 1e-14, s)

    def test_lattice_path_needs_large_w(self):
        with pytest.raises(ParameterError, match="1.3"):
            I_ws(Z, 1.2, 1.4 + 0.3j)

    @pytest.mark.parametrize(("w", "s"), [(1.5, 1.4), (2.2, 1.4), (3.0, 3.5)])
    def test_general_needs_convergence(self, w, s):
        with pytest.raises(ConvergenceError, match="converges only"):
            L_z_general(Z, w, 0.0, s)

    def test_general_singular_set_needs_damping(self):
        with pytest.raises(ConvergenceError, match="s0"):
            L_z_general(2j, 3.0, 0.0, 1.4)

    def test_weights_are_symmetric(self):
        weights = GeneralizedWeights(0.7, Z)
        t = np.array([0.3, 1.7, 4.0])
        assert weights(t) == pytest.approx(weights(1.0 / t))
        assert GeneralizedWeights(0.0, Z)(t).tolist() == [1, 1, 1]

    @pytest.mark.slow
    def test_matches_direct_transform(self):
        cont = I_ws(Z, 3.0, 1.4, t0=0.6).value
        direct = L_z_general(Z, 3.0, 0.0, 1.4).value
        assert rel(cont, direct) < 1e-3

    @pytest.mark.slow
    def test_functional_equation(self):
        s = 1.4 + 0.3j
        assert rel(-I_ws(Z, 1.8, 2 - s).value, I_ws(Z, 1.8, s).value) < 1e-3


# =============================================================================
# Approach to i infinity
# =============================================================================


class TestLimit:
    """Correction coefficients and the y -> infinity experiment."""

    def test_leading_coefficients(self):
        s, x = 1.5 + 0.2j, 0.3
        coeffs = correction_coefficients(s, x)
        arg = cmath.phase(1 - cmath.exp(2j * math.pi * x))
        assert coeffs.C[0] == pytest.approx(2j * math.pi / s)
        assert coeffs.C[1] == pytest.approx(2 * arg)
        assert len(coeffs.C) == 2

    def test_odd_coefficients_vanish_at_half(self):
        coeffs = correction_coefficients(3.5, 0.5)
        assert len(coeffs.C) == 4
        assert all(abs(c) < 1e-12 for c in coeffs.C[1::2])

    @pytest.mark.parametrize("x", [0.3, 0.5, -0.2])
    def test_higher_coefficients_match_polylog(self, x):
        s = 3.5 + 0.2j
        coeffs = correction_coefficients(s, x)
        assert len(coeffs.C) == 4
        for ell in (2, 3):
            li = complex(mpmath.polylog(ell, mpmath.exp(2j * mpmath.pi * x)))
            scale = complex(mpmath.rf(1 - s, ell - 1)) / (2 * math.pi) ** ell
            part = 1j * li.real if ell % 2 == 0 else -li.imag
            assert coeffs.C[ell] == pytest.approx(4 * math.pi * scale * part, rel=1e-11)

    def test_second_coefficient_at_half(self):
        # Li_2(-1) = -pi^2/12
        assert correction_coefficients(2.5, 0.5).C[2] == pytest.approx(1j * math.pi / 8, rel=1e-12)

    def test_integer_x(self):
        with pytest.raises(BranchError, match="non-integer"):
            correction_coefficients(1.5, 1.0)

    def test_arg_form_differs_in_the_middle_power(self):
        s, x, y, value = 1.5 + 0.1j, 0.3, 20.0, 1.0 + 2.0j
        arg = cmath.phase(1 - cmath.exp(2j * math.pi * x))
        diff = arg_form_residual(s, x, y, value) - subtracted_residual(s, x, y, value)
        assert diff == pytest.approx(4 * arg * y ** (s - 1))

    def test_arg_form_strip(self):
        with pytest.raises(DomainError, match="1 < Re s < 2"):
            arg_form_residual(2.5, 0.3, 10.0, 0j)

    @pytest.mark.parametrize(
        ("s", "x", "ys", "match"),
        [
            (0.5, 0.3, (16, 32, 64), "Re s >= 1"),
            (2.0, 0.3, (16, 32, 64), "integer"),
            (1.5, 1.0, (16, 32, 64), "integer"),
            (1.5, 0.3, (16, 32, 200), "capped"),
        ],
    )
    def test_domain(self, s, x, ys, match):
        with pytest.raises(DomainError, match=match):
            limit_experiment(s, x, ys)

    def test_needs_three_heights(self):
        with pytest.raises(FitError, match="three heights"):
            limit_experiment(1.5, 0.3, (16, 32))

    @pytest.mark.slow
    def test_extrapolates_to_target(self):
        report = limit_experiment(1.5, 0.3, (16.0, 32.0, 64.0))
        assert report.rel_error < 1e-2
        assert [row.y for row in report.rows] == [16.0, 32.0, 64.0]
        assert report.target == pytest.approx(limit_target(1.5))

    @pytest.mark.slow
    def test_extrapolates_above_two(self):
        report = limit_experiment(2.5, 0.3, (16.0, 32.0, 64.0))
        assert len(report.coefficients.C) == 3
        assert report.rel_error < 5e-2
