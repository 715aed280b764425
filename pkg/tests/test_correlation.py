import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cslbounds import correlation as corr
from cslbounds.quadrature import QuadratureSpec, integrate_1d
from cslbounds.units import q

RC = q(1e-5, "cm")
KINDS = [corr.gaussian, corr.exponential]


def _norm(kind):
    val, _ = integrate_1d(
        lambda t: 4 * math.pi * t * t * kind.p(t), 0.0, kind.support, corr.CONVOLUTION_SPEC, kind.knots() or None
    )
    return val


class TestKernels:
    @pytest.mark.parametrize("make", KINDS)
    def test_normalised(self, make):
        assert _norm(make(RC)) == pytest.approx(1.0, abs=1e-6)

    def test_gaussian_peak(self):
        # (1 / (2 pi r_C^2))^(3/2)
        assert corr.eval_g(corr.gaussian(RC), 0 * RC).to("cm^-3") == pytest.approx(6.35e13, rel=1e-3, abs=0)

    def test_exponential_peak(self):
        assert corr.eval_g(corr.exponential(RC), 0 * RC).to("cm^-3") == pytest.approx(3.98e13, rel=1e-3, abs=0)

    def test_negative_scale(self):
        with pytest.raises(ValueError):
            corr.gaussian(q(-1e-5, "cm"))


class TestSelfConvolution:
    @pytest.mark.parametrize("make", KINDS)
    @pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, 5.0])
    def test_quadrature_matches_closed_form(self, make, s):
        k = make(RC)
        num, err = corr.self_convolve_numeric(k, s * RC)
        closed = corr.self_convolve(k, s * RC)
        assert num.value == pytest.approx(closed.value, rel=1e-6, abs=0)
        assert err.value <= 1e-9 * closed.value + 1e-300

    def test_exponential_at_one(self):
        k = corr.exponential(RC)
        expect = (7 / 3) * math.exp(-1) / (64 * math.pi * RC.value**3)
        assert corr.self_convolve(k, RC).value == pytest.approx(expect, rel=1e-12, abs=0)

    def test_gaussian_origin_is_lambda_over_gamma(self):
        from cslbounds.cslcore import CslParams

        p = CslParams.standard()
        G0 = corr.self_convolve(corr.gaussian(RC), 0 * RC)
        assert G0.value == pytest.approx((p.lam / p.gamma).value, rel=1e-12, abs=0)

    @pytest.mark.parametrize("make", KINDS)
    def test_monotone_and_bounded(self, make):
        k = make(RC)
        vals = [corr.self_convolve(k, s * RC).value for s in np.linspace(0, 6, 25)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("make", KINDS)
    @pytest.mark.parametrize("kappa", [0.1, 10.0])
    def test_scale_covariance(self, make, kappa):
        y = 0.7 * RC
        lhs = corr.self_convolve(make(kappa * RC), y)
        rhs = kappa**-3 * corr.self_convolve(make(RC), y / kappa)
        assert lhs.value == pytest.approx(rhs.value, rel=1e-12, abs=0)


class TestOddTerms:
    @pytest.mark.parametrize("make", KINDS)
    def test_no_linear_or_cubic_term(self, make):
        c = corr.small_s_coefficients(make(RC))
        assert abs(c[1]) < 1e-4
        assert abs(c[3]) < 1e-4

    def test_exponential_series(self):
        c = corr.small_s_coefficients(corr.exponential(RC))
        assert c[2] == pytest.approx(-1 / 6, rel=1e-4, abs=0)
        assert c[4] == pytest.approx(1 / 24, rel=0.02, abs=0)
        assert c[5] == pytest.approx(-1 / 45, rel=0.05, abs=0)


class TestCurvature:
    def test_gaussian_value(self):
        # (3 / 2 r_C^2) (1 / 4 pi r_C^2)^(3/2) = 1.5e10 * 2.245e13
        assert corr.curvature_at_origin(corr.gaussian(RC)).to("cm^-5") == pytest.approx(3.37e23, rel=1e-3, abs=0)

    @pytest.mark.parametrize("make", KINDS)
    def test_fd_matches_analytic(self, make):
        k = make(RC)
        fd, err = corr.laplacian_at_origin_fd(k)
        assert fd.value == pytest.approx(corr.curvature_at_origin(k).value, rel=1e-5, abs=0)
        assert err.value < 1e-4 * fd.value

    @pytest.mark.parametrize("make", KINDS)
    def test_gradient_identity(self, make):
        k = make(RC)
        assert corr.squared_gradient_integral(k).value == pytest.approx(corr.curvature_at_origin(k).value, rel=1e-8, abs=0)

    def test_exponential_to_gaussian_ratio(self):
        # same lambda and r_C: the exponential kernel heats less than the Gaussian
        g = corr.curvature_at_origin(corr.gaussian(RC)) / corr.self_convolve(corr.gaussian(RC), 0 * RC)
        e = corr.curvature_at_origin(corr.exponential(RC)) / corr.self_convolve(corr.exponential(RC), 0 * RC)
        assert float(e / g) == pytest.approx(2 / 3, rel=1e-12, abs=0)


class TestCustomProfile:
    def _gauss_table(self, s_max=14.0, n=2801):
        s = np.linspace(0, s_max, n)
        return s, np.exp(-0.5 * s * s)

    def test_truncation_recorded(self):
        s, v = self._gauss_table()
        k = corr.custom(RC, s, v)
        assert k.profile.s_max == corr.TRUNCATION_RADIUS
        assert 0 <= k.profile.truncated_mass < 1e-20

    def test_tabulated_gaussian_close_to_closed_form(self):
        s, v = self._gauss_table()
        k = corr.custom(RC, s, v)
        for x in (0.0, 1.0, 2.0):
            num = corr.self_convolve(k, x * RC).value
            ref = corr.self_convolve(corr.gaussian(RC), x * RC).value
            assert num == pytest.approx(ref, rel=2e-4, abs=0)

    def test_load_profile(self, tmp_path):
        s, v = self._gauss_table(n=401)
        path = tmp_path / "profile.txt"
        np.savetxt(path, np.column_stack([s, v]))
        k = corr.load_profile(path, RC)
        assert k.variant == "custom"
        assert _norm(k) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize(
        "s, v", [([0.0], [1.0]), ([0.5, 1.0], [1.0, 0.0]), ([0.0, 1.0], [1.0, -1.0]), ([0.0, 0.0], [1.0, 1.0])]
    )
    def test_rejects_bad_tables(self, s, v):
        with pytest.raises(ValueError):
            corr.custom(RC, s, v)


class TestQuadrature:
    def test_reports_failure(self):
        from cslbounds.quadrature import QuadratureError

        with pytest.raises(QuadratureError):
            integrate_1d(lambda x: math.sin(1 / x) / x, 1e-8, 1.0, QuadratureSpec(1e-15, 1e-15, 3))

    def test_infinite_range_with_break_points(self):
        val, _ = integrate_1d(lambda x: math.exp(-x), 0.0, math.inf, QuadratureSpec(1e-12, 1e-12, 100), [1.0, 2.0])
        assert val == pytest.approx(1.0, rel=1e-10, abs=0)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.05, max_value=4.0))
    def test_kernel_values_below_origin(self, s):
        for make in KINDS:
            k = make(RC)
            assert corr.self_convolve(k, s * RC) < corr.self_convolve(k, 0 * RC)
