import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from padeloc.errors import DomainError
from padeloc.radial import (
    GAUSSIAN_FAMILY,
    POLE_FAMILY,
    POLE_SCORE,
    VDW_SCORE,
    are,
    are_pole_vs_vdw,
    cross_constant,
    first_moment,
    get_score,
    pole_density,
    pole_modulus_cdf,
    pole_modulus_quantile,
    score_abs_moment,
    score_abs_moment_closed_form,
    score_eval,
    shifted_pole_density,
    sqrt_radial_fisher,
)

# int_0^1 4 sqrt(u(1-u)) sqrt(-2 log(1-u)) du, frozen from an independent
# mpmath evaluation at 30 digits
C_VDW_POLE = 1.923721267046614


class TestScores:
    def test_pole_values(self):
        assert score_eval("pole_score", 0.5) == pytest.approx(2.0)
        assert score_eval(POLE_SCORE, 0.2) == pytest.approx(1.6)

    def test_vdw_values(self):
        assert score_eval("vdw", 1 - math.exp(-2)) == pytest.approx(2.0)

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, u):
        with pytest.raises(DomainError):
            score_eval("vdw", u)

    def test_unknown(self):
        with pytest.raises(DomainError):
            get_score("wilcoxon")

    @given(st.floats(min_value=1e-6, max_value=1 - 1e-6))
    def test_score_is_radial_score_at_quantile(self, u):
        # J(u) = phi(G^{-1}(u)) for both families
        assert POLE_SCORE.J(u) == pytest.approx(float(POLE_FAMILY.radial_score(POLE_FAMILY.quantile(u))), rel=1e-9)
        assert VDW_SCORE.J(u) == pytest.approx(float(GAUSSIAN_FAMILY.radial_score(GAUSSIAN_FAMILY.quantile(u))), rel=1e-9)

    @given(st.floats(min_value=1e-3, max_value=12.0))
    def test_log_form_agrees(self, v):
        u = -math.expm1(-v)
        assert POLE_SCORE.J_log(v) == pytest.approx(float(POLE_SCORE.J(u)), rel=1e-8, abs=1e-12)
        assert VDW_SCORE.J_log(v) == pytest.approx(float(VDW_SCORE.J(u)), rel=1e-9)


class TestCrossConstants:
    def test_self_constants(self):
        assert cross_constant("pole_score", "pole_score") == pytest.approx(8 / 3, abs=1e-10)
        assert cross_constant("vdw", "vdw") == pytest.approx(2.0, abs=1e-10)

    def test_mixed(self):
        assert cross_constant(VDW_SCORE, POLE_SCORE) == pytest.approx(C_VDW_POLE, abs=1e-10)
        assert cross_constant(POLE_SCORE, VDW_SCORE) == pytest.approx(C_VDW_POLE, abs=1e-10)

    def test_are(self):
        assert are_pole_vs_vdw() == pytest.approx(16 / (3 * C_VDW_POLE**2), abs=1e-9)
        assert are_pole_vs_vdw() == pytest.approx(1.44, abs=0.01)

    def test_are_reciprocal(self):
        assert are("vdw", "pole_score", "pole_score") == pytest.approx(1 / are_pole_vs_vdw())

    def test_vdw_optimal_under_gaussian(self):
        assert are("vdw", "pole_score", "vdw") > 1.0


class TestRadialFamily:
    def test_first_moment(self):
        assert first_moment(POLE_FAMILY) == pytest.approx(0.5, abs=1e-10)
        assert first_moment(GAUSSIAN_FAMILY) == pytest.approx(1.0, abs=1e-10)

    def test_fisher(self):
        assert sqrt_radial_fisher(POLE_FAMILY) == pytest.approx(1 / 3, abs=1e-10)
        assert sqrt_radial_fisher(GAUSSIAN_FAMILY) == pytest.approx(0.5, abs=1e-10)

    @pytest.mark.parametrize("family", [POLE_FAMILY, GAUSSIAN_FAMILY])
    def test_density_normalized(self, family):
        val, _ = integrate.quad(lambda r: float(family.density(r)), 0, np.inf)
        assert val == pytest.approx(1.0, abs=1e-10)

    @given(st.floats(min_value=0.0, max_value=0.999))
    def test_cdf_quantile_inverse(self, u):
        assert pole_modulus_cdf(pole_modulus_quantile(u)) == pytest.approx(u, abs=1e-12)

    def test_quantile_domain(self):
        with pytest.raises(DomainError):
            pole_modulus_quantile(1.0)
        with pytest.raises(DomainError):
            pole_modulus_cdf(-1.0)

    def test_pole_density_integrates(self):
        val, _ = integrate.quad(lambda r: 2 * np.pi * r * pole_density(r), 0, np.inf)
        assert val == pytest.approx(1.0, abs=1e-10)


class TestMoments:
    @pytest.mark.parametrize("delta", [0.0, 0.5, 1.0, 2.0])
    def test_closed_form(self, delta):
        assert score_abs_moment(delta) == pytest.approx(score_abs_moment_closed_form(delta), abs=1e-8)

    def test_delta_zero_is_second_moment(self):
        assert score_abs_moment_closed_form(0.0) == pytest.approx(8 / 3)


class TestShiftedDensity:
    def test_null(self):
        z = np.array([0.1 + 0.2j, -1.0, 3j])
        approx, first = shifted_pole_density(z, 0.0, 1.5, 1j)
        np.testing.assert_allclose(approx, pole_density(z))
        np.testing.assert_allclose(first, pole_density(z))

    def test_first_order_agrees_for_small_rho(self):
        z = np.linspace(-2, 2, 9) + 0.3j
        xi = np.exp(1j * np.pi / 4)
        rho = 1e-4
        approx, first = shifted_pole_density(z, rho, 2.0, xi)
        np.testing.assert_allclose(first, approx, atol=5 * rho**2)

    def test_integrates_to_one(self):
        xi = np.exp(1j * 0.3)

        def f(r, t):
            return r * shifted_pole_density(r * np.exp(1j * t), 0.05, 1.0, xi)[1]

        val, _ = integrate.dblquad(f, 0, 2 * np.pi, 0, np.inf)
        assert val == pytest.approx(1.0, abs=1e-7)

    def test_domain(self):
        with pytest.raises(DomainError):
            shifted_pole_density(0j, -0.1, 1.0, 1j)
        with pytest.raises(DomainError):
            shifted_pole_density(0j, 0.1, 0.0, 1j)
