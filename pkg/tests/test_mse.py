import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from spikedmse import mse as m
from spikedmse.errors import DomainError, RegimeError
from spikedmse.model import InferenceModel, Regime, SignalModel, threshold_distance


def pair(alphas, ls, betas, lam):
    return SignalModel(alphas, ls), InferenceModel(betas, lam)


class TestGSph:
    def test_matched(self):
        assert m.g_sph(1, 1, 4, 4) == pytest.approx(-0.5625, abs=1e-15)
        assert m.g_sph(1, 1, 4, 4) == pytest.approx(-((1 - 1 / 4) ** 2), abs=1e-15)

    def test_double_power(self):
        assert m.g_sph(1, 2, 4, 4) == pytest.approx(2 / 4 - 1 / 16, abs=1e-15)

    @given(st.floats(0.3, 3), st.floats(0.3, 3), st.floats(0.2, 20))
    def test_matched_snr_reduction(self, a, b, lam):
        assume(math.sqrt(lam) * a > 1 and lam * a * b > 1)
        expected = b * (b - 2 * a) + 2 / lam - 1 / (lam**2 * a**2)
        assert m.g_sph(a, b, lam, lam) == pytest.approx(expected, abs=1e-12)

    def test_regime(self):
        with pytest.raises(RegimeError):
            m.g_sph(1, 1, 0.5, 4)
        with pytest.raises(DomainError):
            m.g_sph(0, 1, 4, 4)


class TestGGau:
    def test_matched(self):
        assert m.g_gau(1, 1, 4, 4) == pytest.approx(-0.5625, abs=1e-15)

    def test_high_snr_limit(self):
        assert m.g_gau(1, 1, 1e12, 1e12) == pytest.approx(-1.0, abs=1e-5)

    def test_alpha_two(self):
        assert m.g_gau(2, 1, 4, 4) == pytest.approx(4 * (-2 + 1) + 2 / 4 + 1 / 16 - 2 / 32, abs=1e-15)
        assert m.g_gau(2, 1, 4, 4) == pytest.approx(-3.5, abs=1e-15)

    @given(st.floats(0.2, 20), st.floats(0.0, 3))
    def test_matched_prior_coincidence(self, lam, extra):
        a = (1 + 1e-9) / math.sqrt(lam) + extra
        assert abs(m.g_gau(a, a, lam, lam) - m.g_sph(a, a, lam, lam)) <= 1e-12 * max(1.0, a * a)


class TestMseSph:
    def test_low_snr_total_power(self):
        # Any betas with sqrt(0.5) * beta <= 1; larger ones overfit noise.
        for betas in ([], [1], [1, 1, 1, 1, 1], [1.4, 0.1]):
            res = m.mse_sph(*pair([1, 1, 1], 0.5, betas, 0.5))
            assert res.total == 3.0
            assert (res.inference_term, res.overfitting_term) == (0.0, 0.0)
        assert m.mse_sph(*pair([1, 1, 1], 0.5, [5], 0.5)).overfitting_term > 0

    def test_high_snr_under_parameterised(self):
        res = m.mse_sph(*pair([1, 1, 1], 1e4, [1], 1e4))
        assert abs(res.total - 2) < 1e-3
        assert res.profile.regime is Regime.UNDER

    def test_high_snr_over_parameterised_value(self):
        # 3 g + (1 - 1/100)^2 + 3 with g = -(1 - 1e-4)^2.
        res = m.mse_sph(*pair([1, 1, 1], 1e4, [1, 1, 1, 1], 1e4))
        expected = -3 * (1 - 1e-4) ** 2 + 0.99**2 + 3
        assert res.total == pytest.approx(expected, abs=1e-12)
        assert (res.profile.c, res.profile.e) == (3, 4)

    @pytest.mark.parametrize("k,limit", [(3, 0), (1, 2), (2, 1), (4, 1), (5, 2)])
    def test_high_snr_limits(self, k, limit):
        # The overfitting term approaches its limit like 2/sqrt(lam).
        res = m.mse_sph(*pair([1, 1, 1], 1e8, [1] * k, 1e8))
        assert abs(res.total - limit) < 1e-3

    def test_decomposition(self):
        res = m.mse_sph(*pair([1, 1, 1], 4, [1, 1, 1], 4))
        assert res.total == res.inference_term + res.overfitting_term + res.constant_term
        assert res.total == pytest.approx(3 * (-0.5625) + 3, abs=1e-14)

    def test_bayes_optimal_decreases_to_zero(self):
        alphas = [1.5, 1.0, 0.7]
        lams = np.geomspace(2.1, 1e6, 200)
        totals = [m.mse_sph(*pair(alphas, lam, alphas, lam)).total for lam in lams]
        expected = [sum(2 / lam - 1 / (lam**2 * a**2) for a in alphas) for lam in lams]
        np.testing.assert_allclose(totals, expected, atol=1e-12)
        assert np.all(np.diff(totals) < 0)
        assert totals[-1] < 1e-5

    def test_overconfident_powers_non_monotone(self):
        def total(lam):
            return m.mse_sph(*pair([2, 2], lam, [3, 3], lam)).total

        assert total(0.2) > total(0.12)
        assert total(5) < total(0.2)

    def test_matched_display(self):
        for lam in (0.3, 0.8, 2.0, 7.0):
            args = ([2, 1.2, 0.5], [2.5, 1.0, 0.9, 0.6])
            assert m.mse_sph_matched(*args, lam) == pytest.approx(
                m.mse_sph(*pair(args[0], lam, args[1], lam)).total, abs=1e-12
            )


class TestMseGau:
    def test_overfitting_branch(self):
        res = m.mse_gau(*pair([1], 0.5, [1], 4))
        assert res.total == pytest.approx((0.5 - 0.25) ** 2 + 1, abs=1e-15)

    def test_constant_only(self):
        assert m.mse_gau(*pair([1], 0.5, [1], 0.5)).total == 1.0

    def test_rank_two(self):
        assert m.mse_gau(*pair([1, 1], 4, [1, 1], 4)).total == pytest.approx(0.875, abs=1e-14)

    def test_dispatch(self):
        p = pair([1], 4, [1], 4)
        assert m.mse(*p, prior="gaussian") == m.mse_gau(*p)
        assert m.mse(*p) == m.mse_sph(*p)


class TestRankOne:
    @pytest.mark.parametrize(
        "args,expected", [((1, 1, 0.5, 4), 1.0625), ((1, 1, 0.5, 0.5), 1.0), ((1, 1, 4, 4), 0.4375)]
    )
    def test_branches(self, args, expected):
        assert m.mse_rank_one_gau(*args) == pytest.approx(expected, abs=1e-14)

    @given(st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0.05, 10), st.floats(0.05, 10))
    def test_matches_general(self, a, b, ls, lam):
        general = m.mse_gau(*pair([a], ls, [b], lam)).total
        assert abs(m.mse_rank_one_gau(a, b, ls, lam) - general) <= 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            m.mse_rank_one_gau(1, 1, 0, 1)


@st.composite
def model_pairs(draw):
    r = draw(st.integers(0, 4))
    k = draw(st.integers(0, 4))
    alphas = sorted(draw(st.lists(st.floats(0.3, 3), min_size=r, max_size=r)), reverse=True)
    betas = sorted(draw(st.lists(st.floats(0.3, 3), min_size=k, max_size=k)), reverse=True)
    s, i = pair(alphas, draw(st.floats(0.2, 9)), betas, draw(st.floats(0.2, 9)))
    assume(threshold_distance(s, i) > 1e-4)
    return s, i


@given(model_pairs())
def test_breakdown_invariants(p):
    for res in (m.mse_sph(*p), m.mse_gau(*p)):
        assert res.total == res.inference_term + res.overfitting_term + res.constant_term
        assert res.overfitting_term >= 0
        assert res.constant_term == pytest.approx(sum(a * a for a in p[0].alphas))
        assert res.total >= -1e-12


@given(model_pairs())
def test_immse_closed_form(p):
    assert m.immse_residual(*p) <= 1e-6


@given(model_pairs())
def test_immse_finite_differences(p):
    assert m.immse_residual(*p, finite_differences=True, fd_step=1e-5) <= 1e-6


class TestImmse:
    def test_rank_one_matched(self):
        assert m.immse_residual(*pair([1], 4, [1], 4)) <= 1e-8

    def test_trivial(self):
        assert m.immse_residual(*pair([1], 0.5, [1], 0.5)) == 0.0

    def test_mixed(self):
        p = pair([2, 1], 2, [1.5, 1, 0.5], 3)
        assert m.immse_residual(*p) <= 1e-6
        assert m.immse_residual(*p, finite_differences=True) <= 1e-6

    def test_wrong_g_breaks_identity(self, monkeypatch):
        monkeypatch.setattr(m, "g_sph", lambda *a: -m._g_sph(*a))
        assert m.immse_residual(*pair([1], 4, [1], 4)) > 0.1

    def test_gaussian_prior_rejected(self):
        with pytest.raises(ValueError):
            m.immse_residual(*pair([1], 4, [1], 4), prior="gaussian")

    def test_fd_step_bounds(self):
        with pytest.raises(DomainError):
            m.immse_residual(*pair([1], 4, [1], 4), finite_differences=True, fd_step=0.1)
