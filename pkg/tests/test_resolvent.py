"""Tests for the resolvent kernel and its raised companion."""

from __future__ import annotations

import math

import mpmath
import pytest

from harmonic_lfun.config import LatticeTruncation
from harmonic_lfun.errors import (
    ConvergenceError,
    FitError,
    OrbitProximityError,
    ParameterError,
    SingularityError,
)
from harmonic_lfun.eisenstein import hyperbolic_laplacian
from harmonic_lfun.modforms import M211, S, HalfPlanePoint, eval_E2hat
from harmonic_lfun.resolvent import (
    Gw_truncated,
    HyperbolicDistanceData,
    calGw,
    calGw_axis,
    cusp_term_tau,
    cusp_term_z,
    estimate_calG1_residue,
    gw,
    gw_raised,
    kernel_terms,
    orbit_points,
    verify_prop_dGs,
)


def rel(a: complex, b: complex) -> float:
    return abs(complex(a) - complex(b)) / abs(complex(b))


Z = 0.3 + 1.2j
TAU = -0.1 + 1.7j
SMALL = LatticeTruncation(radius=40, tol=1.0)


# =============================================================================
# Point-pair kernel
# =============================================================================


class TestPointPair:
    """g_w and its tau derivative."""

    def test_matches_mpmath(self):
        w = 1.7
        x = HyperbolicDistanceData.between(Z, TAU).x_arg
        expected = (
            -mpmath.gamma(w) ** 2 / mpmath.gamma(2 * w) * x**w * mpmath.hyp2f1(w, w, 2 * w, x)
        )
        assert rel(gw(w, Z, TAU), complex(expected)) < 1e-11

    def test_symmetric(self):
        assert gw(1.5, Z, TAU) == pytest.approx(gw(1.5, TAU, Z), rel=1e-13)

    def test_distance_data(self):
        data = HyperbolicDistanceData.between(1j, 2j)
        assert data.cosh_d == pytest.approx(1.25)
        assert data.x_arg == pytest.approx(2.0 / 2.25)

    def test_raised_is_tau_derivative(self):
        w, h = 1.6, 1e-5

        def f(t: complex) -> complex:
            return gw(w, Z, t)

        fu = (f(TAU + h) - f(TAU - h)) / (2 * h)
        fv = (f(TAU + 1j * h) - f(TAU - 1j * h)) / (2 * h)
        assert rel(gw_raised(w, Z, TAU), (fu - 1j * fv) / 2) < 1e-7

    def test_diagonal(self):
        with pytest.raises(SingularityError, match="diagonal"):
            gw(1.5, Z, Z)

    def test_w_below_one(self):
        with pytest.raises(ParameterError, match="Re\\(w\\)"):
            gw(0.8, Z, TAU)


# =============================================================================
# Orbit enumeration
# =============================================================================


class TestOrbit:
    """Orbit points inside the truncation ball."""

    def test_matrices_map_z_to_points(self):
        pts = orbit_points(Z, TAU, 8.0)
        assert len(pts) > 10
        for i in range(0, len(pts), max(1, len(pts) // 15)):
            image = pts.matrix(i).act(Z).tau
            assert image == pytest.approx(complex(pts.xi[i], pts.eta[i]), abs=1e-9)

    def test_points_inside_ball(self):
        pts = orbit_points(Z, TAU, 8.0)
        for xi, eta in zip(pts.xi, pts.eta, strict=True):
            cosh = HyperbolicDistanceData.between(complex(xi, eta), TAU).cosh_d
            assert cosh <= pts.cosh_cutoff * (1 + 1e-12)

    def test_points_are_distinct(self):
        pts = orbit_points(Z, TAU, 8.0)
        keys = {(round(x, 9), round(e, 9)) for x, e in zip(pts.xi, pts.eta, strict=True)}
        assert len(keys) == len(pts)

    def test_empty_ball(self):
        with pytest.raises(ParameterError, match="empty ball"):
            orbit_points(Z, TAU, 1.0)

    def test_kernel_terms_sorted(self):
        terms = kernel_terms(1.5, Z, TAU, radius=6.0)
        dists = [
            HyperbolicDistanceData.between(t.matrix.act(Z), TAU).cosh_d for t in terms
        ]
        assert dists == sorted(dists)
        assert terms[0].value == pytest.approx(gw(1.5, terms[0].matrix.act(Z), TAU))


# =============================================================================
# Truncated kernels
# =============================================================================


class TestKernels:
    """Invariance, weight and errors of the orbit sums."""

    def test_gw_invariant_in_z(self):
        a = Gw_truncated(2.0, Z, TAU, SMALL).value
        b = Gw_truncated(2.0, M211.act(Z), TAU, SMALL).value
        assert rel(b, a) < 1e-9

    def test_gw_invariant_in_tau(self):
        a = Gw_truncated(2.0, Z, TAU, SMALL).value
        b = Gw_truncated(2.0, Z, S.act(TAU), SMALL).value
        assert rel(b, a) < 1e-9

    def test_raised_kernel_has_weight_two(self):
        tau = 0.1 + 0.9j
        a = calGw(1.8, Z, tau, SMALL).value
        b = calGw(1.8, Z, -1.0 / tau, SMALL).value
        assert rel(b, tau**2 * a) < 1e-9

    def test_axis_matches_pointwise(self):
        values, worst = calGw_axis(1.8, Z, [1.3, 2.5], SMALL)
        assert values[1] == pytest.approx(calGw(1.8, Z, 2.5j, SMALL).value)
        assert worst > 0

    def test_w_must_exceed_one(self):
        with pytest.raises(ParameterError, match="Re\\(w\\) > 1"):
            Gw_truncated(1.0, Z, TAU)
        with pytest.raises(ParameterError, match="Re\\(w\\) > 1"):
            calGw(1.0, Z, TAU)

    def test_orbit_meets_tau(self):
        with pytest.raises(OrbitProximityError, match="floor"):
            Gw_truncated(2.0, Z, M211.act(Z), SMALL)

    def test_strict_truncation(self):
        with pytest.raises(ConvergenceError, match="exceeds"):
            calGw(1.1, Z, TAU, LatticeTruncation(radius=8, tol=1e-12))

    def test_cusp_growth_in_tau(self):
        tau = HalfPlanePoint(0.1, 4.0)
        kernel = calGw(2.0, 0.2 + 1.1j, tau, LatticeTruncation(radius=120), strict=False)
        main = cusp_term_tau(2.0, tau.v, 0.2 + 1.1j)
        assert rel(kernel.value, main.value) < 5e-2

    def test_cusp_growth_in_z(self):
        z = HalfPlanePoint(0.2, 4.0)
        kernel = calGw(2.0, z, TAU, LatticeTruncation(radius=120), strict=False)
        main = cusp_term_z(2.0, z.v, TAU)
        assert rel(kernel.value, main.value) < 5e-2

    def test_cusp_term_z_decays_like_y_to_one_minus_w(self):
        low = cusp_term_z(2.0, 4.0, TAU).value
        high = cusp_term_z(2.0, 8.0, TAU).value
        assert high == pytest.approx(low / 2.0, rel=1e-12)

    def test_gw_is_laplace_eigenfunction_in_z(self):
        tr = LatticeTruncation(radius=120)

        def f(t: complex) -> complex:
            return Gw_truncated(2.0, t, TAU, tr, strict=False).value

        lap = hyperbolic_laplacian(0, f, Z, 1e-2 * Z.imag, richardson=False)
        assert rel(lap, -2.0 * f(Z)) < 1e-2

    def test_gw_settles_as_radius_doubles(self):
        coarse = Gw_truncated(2.0, Z, TAU, LatticeTruncation(radius=60), strict=False)
        fine = Gw_truncated(2.0, Z, TAU, LatticeTruncation(radius=120), strict=False)
        assert rel(coarse.value, fine.value) < 1e-2
        assert fine.err_est < coarse.err_est


# =============================================================================
# w -> 1
# =============================================================================


@pytest.mark.slow
class TestBridge:
    """The raised kernel at w = 1."""

    def test_limit_is_hzstar(self):
        report = verify_prop_dGs(Z, TAU)
        assert report.deviation < 5e-2
        assert len(report.values) == 3

    def test_limit_high_in_z_is_e2hat(self):
        report = verify_prop_dGs(0.2 + 4.0j, TAU)
        target = 2j * math.pi * eval_E2hat(TAU)
        assert rel(report.extrapolated.value, target) < 5e-2

    def test_residue(self):
        res = estimate_calG1_residue(0.27 + 1.31j)
        assert res.value == pytest.approx(-1.0, rel=5e-2)

    def test_residue_needs_two_offsets(self):
        with pytest.raises(FitError, match="two offsets"):
            estimate_calG1_residue(0.27 + 1.31j, offsets=(1e-2,))


def test_cosh_cutoff_follows_radius():
    assert orbit_points(Z, TAU, 10.0).cosh_cutoff == pytest.approx(50.0)
