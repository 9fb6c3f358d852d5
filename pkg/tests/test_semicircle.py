import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from spikedmse import semicircle as sc
from spikedmse.errors import DomainError
from spikedmse.model import InferenceModel, SignalModel


def quad_stieltjes(z):
    val, _ = integrate.quad(lambda x: sc.sc_density(x) / (z - x), -2, 2, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def quad_log_potential(v):
    # x = 2 cos t maps the semicircle to (2/pi) sin^2 t dt on [0, pi].
    f = lambda t: math.log(abs(v - 2 * math.cos(t))) * 2 / math.pi * math.sin(t) ** 2
    val, _ = integrate.quad(f, 0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


class TestDensity:
    @pytest.mark.parametrize("x,expected", [(0.0, 1 / math.pi), (2.0, 0.0), (3.0, 0.0), (-2.5, 0.0)])
    def test_values(self, x, expected):
        assert sc.sc_density(x) == pytest.approx(expected, abs=1e-15)

    def test_normalised(self):
        total, _ = integrate.quad(sc.sc_density, -2, 2, epsabs=1e-13)
        assert abs(total - 1) < 1e-10

    def test_vectorised(self):
        out = sc.sc_density(np.array([-3.0, 0.0, 1.0]))
        assert out.shape == (3,) and out[0] == 0.0

    def test_cdf_matches_quadrature(self):
        for x in np.linspace(-2, 2, 17):
            val, _ = integrate.quad(sc.sc_density, -2, x, epsabs=1e-13)
            assert sc.sc_cdf(x) == pytest.approx(val, abs=1e-10)
        assert sc.sc_cdf(-5) == 0.0 and sc.sc_cdf(5) == 1.0


class TestStieltjes:
    @pytest.mark.parametrize("z,expected", [(2.0, 1.0), (2.5, 0.5), (4.0, 2 - math.sqrt(3))])
    def test_values(self, z, expected):
        assert sc.sc_stieltjes(z) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("z", [2.5, 4.0])
    def test_examples_against_quadrature(self, z):
        assert sc.sc_stieltjes(z) == pytest.approx(quad_stieltjes(z), abs=1e-10)

    def test_matches_quadrature_on_grid(self):
        for z in np.linspace(2.01, 10, 40):
            assert abs(sc.sc_stieltjes(z) - quad_stieltjes(z)) < 1e-8

    def test_decreasing(self):
        z = np.linspace(2, 50, 500)
        assert np.all(np.diff(sc.sc_stieltjes(z)) < 0)

    def test_inverse_of_theta_param(self):
        for theta in (1.0, 1.5, 3.0, 100.0):
            assert sc.sc_stieltjes(theta + 1 / theta) == pytest.approx(1 / theta, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            sc.sc_stieltjes(1.9)


class TestStieltjesInverse:
    @pytest.mark.parametrize("eta,expected", [(1.0, 2.0), (0.5, 2.5), (0.25, 4.25)])
    def test_values(self, eta, expected):
        assert sc.sc_stieltjes_inv(eta) == pytest.approx(expected, rel=1e-15)

    @given(st.floats(1e-6, 0.999))
    def test_round_trip(self, eta):
        assert abs(sc.sc_stieltjes(sc.sc_stieltjes_inv(eta)) - eta) <= 1e-12

    @given(st.floats(0.999, 1.0))
    def test_round_trip_near_edge(self, eta):
        # H has infinite slope at z = 2; rounding of eta + 1/eta is amplified
        # by roughly 1 / (1 - eta).
        err = abs(sc.sc_stieltjes(sc.sc_stieltjes_inv(eta)) - eta)
        assert err <= 1e-12 + 1e-15 / max(1.0 - eta, 1e-300)

    def test_round_trip_at_edge(self):
        assert sc.sc_stieltjes(sc.sc_stieltjes_inv(1.0)) == 1.0

    @pytest.mark.parametrize("eta", [0.0, -0.1, 1.01])
    def test_domain(self, eta):
        with pytest.raises(DomainError):
            sc.sc_stieltjes_inv(eta)


class TestLogPotential:
    @pytest.mark.parametrize(
        "v,expected", [(2.0, 0.5), (2.5, math.log(2) + 1 / 8), (10.1, math.log(10) + 0.005)]
    )
    def test_values(self, v, expected):
        assert sc.sc_log_potential(v) == pytest.approx(expected, rel=1e-13)
        assert sc.sc_log_potential(v) == pytest.approx(quad_log_potential(v), abs=1e-9)

    def test_derivative_is_stieltjes(self):
        h = 1e-5
        for v in np.linspace(2.1, 10, 30):
            fd = (sc.sc_log_potential(v + h) - sc.sc_log_potential(v - h)) / (2 * h)
            assert fd == pytest.approx(sc.sc_stieltjes(v), rel=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            sc.sc_log_potential(1.0)


class TestOutliers:
    @pytest.mark.parametrize("theta,expected", [(2.0, 2.5), (1.0, 2.0), (0.5, 2.0)])
    def test_location(self, theta, expected):
        assert sc.outlier_location(theta) == expected

    @pytest.mark.parametrize("theta,expected", [(2.0, 0.75), (1.0, 0.0), (0.3, 0.0)])
    def test_overlap(self, theta, expected):
        assert sc.outlier_overlap_sq(theta) == pytest.approx(expected)

    def test_overlap_asymptote(self):
        assert sc.outlier_overlap_sq(1e8) == pytest.approx(1.0)

    @pytest.mark.parametrize("func", [sc.outlier_location, sc.outlier_overlap_sq])
    def test_domain(self, func):
        with pytest.raises(DomainError):
            func(0.0)


class TestJ:
    def test_subcritical_example(self):
        assert sc.j_sc(0.5, 2.0) == pytest.approx(0.125, abs=1e-14)
        # Same value from K evaluated at v = eta + 1/eta directly.
        assert sc.k_function(0.5, 2.0, 2.5) == pytest.approx(0.125, abs=1e-14)

    def test_supercritical_example(self):
        assert sc.j_sc(2.0, 2.5) == pytest.approx(5 - 2 * math.log(2) - 1 / 8 - 1, abs=1e-14)

    def test_boundary_example(self):
        assert sc.j_sc(1.0, 2.0) == pytest.approx(0.5, abs=1e-15)

    @given(st.floats(1.0, 20.0), st.floats(0.0, 1.0))
    def test_subcritical_identity(self, theta, frac):
        gamma = theta + 1 / theta
        eta = max(frac, 1e-6) / theta
        assert abs(sc.j_sc(eta, gamma) - eta**2 / 2) <= 1e-10

    @given(st.floats(1.0, 20.0), st.floats(1.0, 30.0))
    def test_supercritical_closed_form(self, theta, mult):
        gamma = theta + 1 / theta
        eta = mult / theta
        closed = eta * gamma - math.log(eta * theta) - 1 / (2 * theta**2) - 1
        assert abs(sc.j_sc(eta, gamma) - closed) <= 1e-12 * max(1.0, abs(closed))

    @given(st.floats(1.0, 20.0))
    def test_branch_continuity(self, theta):
        gamma = theta + 1 / theta
        h = sc.sc_stieltjes(gamma)
        left = sc.j_sc(h * (1 - 1e-12), gamma)
        right = sc.j_sc(h * (1 + 1e-12), gamma)
        assert abs(left - right) < 1e-8

    def test_supercritical_k_uses_quadrature_consistently(self):
        # K with an independently integrated log potential.
        eta, theta = 1.7, 2.3
        gamma = theta + 1 / theta
        k = eta * gamma - math.log(eta) - quad_log_potential(gamma) - 1
        assert sc.j_sc(eta, gamma) == pytest.approx(k, abs=1e-9)

    def test_vectorised(self):
        out = sc.j_sc(np.array([0.5, 2.0]), np.array([2.0, 2.5]))
        assert out.shape == (2,)

    @pytest.mark.parametrize("eta,gamma", [(0.0, 2.5), (-1.0, 2.5), (1.0, 1.5)])
    def test_domain(self, eta, gamma):
        with pytest.raises(DomainError):
            sc.j_sc(eta, gamma)


class TestSphericalIntegralRate:
    def test_sum_of_rank_one_rates(self):
        rate = sc.spherical_integral_rate([1.0, 0.25, 0.0], [2.5, 2.5, 2.0])
        assert rate == pytest.approx(0.5 * (sc.j_sc(2.0, 2.5) + sc.j_sc(0.5, 2.5)))

    def test_zero_weights(self):
        assert sc.spherical_integral_rate([0.0], [2.0]) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            sc.spherical_integral_rate([1.0], [2.0, 2.0])


class TestAdditivity:
    @pytest.mark.parametrize(
        "alphas,ls,betas,lam,expected",
        [([1], 1, [1], 1, True), ([2], 4, [2], 4, False), ([1], 9, [0.5], 1, True)],
    )
    def test_examples(self, alphas, ls, betas, lam, expected):
        assert sc.additivity_regime(SignalModel(alphas, ls), InferenceModel(betas, lam)) is expected

    def test_empty_models(self):
        assert sc.additivity_regime(SignalModel([], 1), InferenceModel([], 1))
        assert sc.additivity_regime(SignalModel([], 1), InferenceModel([2.0], 1))
        assert not sc.additivity_regime(SignalModel([], 1), InferenceModel([2.1], 1))
