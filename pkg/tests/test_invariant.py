import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fd, fd2, rel_err
from silkswap.analysis import solve_curve_z
from silkswap.fixed_decimal import SignedDecimal
from silkswap.invariant import (
    OffCurveError,
    OraclePrices,
    PoolParams,
    chi,
    cpmm_y,
    csmm_y,
    curve_v2_chi,
    curve_v2_dscaled_dx,
    curve_v2_dscaled_dz,
    curve_v2_scaled_f,
    d2f_dD2,
    d2scaled_dx2,
    d2scaled_dz2,
    df_dD,
    dscaled_dx,
    dscaled_dz,
    invariant_f,
    partial_f_x,
    partial_f_y,
    scaled_chi,
    scaled_f,
    select_gamma,
    slope_dy_dx,
    spot_price_x,
    spot_price_y,
)

P = PoolParams(10.0, 8, 2)


class TestParams:
    @pytest.mark.parametrize("bad", [dict(a=0, gamma1=1, gamma2=1), dict(a=1, gamma1=-1, gamma2=1),
                                     dict(a=1, gamma1=1.5, gamma2=1), dict(a=1, gamma1=True, gamma2=1)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            PoolParams(**bad)

    def test_swapped(self):
        assert PoolParams(3, 1, 7).swapped() == PoolParams(3, 7, 1)

    def test_prices(self):
        assert OraclePrices(2.0, 3.0).p == 1.5
        with pytest.raises(ValueError):
            OraclePrices(0, 1)


class TestSelectGamma:
    def test_below_line(self):
        assert select_gamma(900, 1100, P) == 8

    def test_above_line(self):
        assert select_gamma(1100, 900, P) == 2

    def test_on_line_takes_gamma1(self):
        assert select_gamma(1000, 1000, P) == 8


class TestExamples:
    def test_chi_equilibrium(self):
        assert chi(1000, 1000, 2000, 1, P) == 1

    def test_chi_off_equilibrium(self):
        # 4*1500*500/2000**2 = 0.75, gamma2 = 2
        assert chi(1500, 500, 2000, 1, P) == pytest.approx(0.5625)

    def test_f_on_csmm_line(self):
        # x + p*y = D kills the leverage term: 1500*500 - 2000**2/4
        assert invariant_f(1500, 500, 2000, 1, P) == -250000

    def test_f_equilibrium(self):
        assert invariant_f(1000, 1000, 2000, 1, P) == 0

    def test_partials_at_equilibrium(self):
        a, d = 10.0, 2000.0
        assert partial_f_x(1000, 1000, d, 1, P) == pytest.approx((a + 0.5) * d)
        p = 2.0
        assert partial_f_y(1000, 500, d, p, P) == pytest.approx(p * (a + 0.5) * d)

    def test_slope_at_equilibrium(self):
        assert slope_dy_dx(1000, 1000, 2000, 1, P) == pytest.approx(-1)
        assert slope_dy_dx(1000, 500, 2000, 2, P) == pytest.approx(-0.5)

    def test_prices_at_equilibrium(self):
        assert spot_price_x(1000, 500, 2000, 2, P) == pytest.approx(0.5)
        assert spot_price_y(1000, 500, 2000, 2, P) == pytest.approx(2.0)

    def test_df_dd_at_equilibrium(self):
        assert df_dD(1000, 1000, 2000, 1, P) == pytest.approx(-2000 * 10.5)

    def test_scaled_examples(self):
        assert scaled_f(0.5, 0.5, P) == 0
        assert scaled_f(0.5, 0.0, P) == pytest.approx(-0.25 + 0)  # chi vanishes
        assert scaled_f(0.75, 0.25, P) == pytest.approx(0.75 * 0.25 - 0.25)
        assert dscaled_dx(0.5, 0.5, P) == pytest.approx(10.5)
        assert dscaled_dz(0.5, 0.5, P) == pytest.approx(10.5)

    def test_reference_curves(self):
        assert cpmm_y(1000, 2000, 1) == 1000
        assert csmm_y(1250, 2000, 1) == 750
        with pytest.raises(ValueError):
            csmm_y(2000, 2000, 1)
        with pytest.raises(ValueError):
            cpmm_y(0, 2000, 1)

    def test_curve_v2_chi(self):
        # u = 0.75, (0.05 / 0.3)**2 * 0.75
        assert curve_v2_chi(0.75, 0.25, 0.05) == pytest.approx(0.75 / 36)
        assert curve_v2_chi(0.5, 0.5, 0.05) == pytest.approx(1)
        with pytest.raises(ValueError):
            curve_v2_chi(0.5, 0.5, 0)

    def test_curve_v2_large_gamma_limit(self):
        # the leverage tends to u = 4*xs*zs, not to 1, as gamma_c grows
        u = 4 * 0.7 * 0.2
        assert curve_v2_chi(0.7, 0.2, 1e9) == pytest.approx(u, rel=1e-8)


class TestOnCurveGuard:
    def test_off_curve_point_rejected(self):
        with pytest.raises(OffCurveError):
            slope_dy_dx(1500, 500, 2000, 1, P)

    def test_fixed_backend(self):
        one = SignedDecimal.coerce
        s = slope_dy_dx(one(1000), one(1000), one(2000), one(1), P)
        assert isinstance(s, SignedDecimal)
        assert float(s) == pytest.approx(-1)


class TestHomogeneity:
    @given(
        st.floats(0.05, 0.95),
        st.floats(0.05, 0.95),
        st.floats(1e-3, 1e9),
        st.floats(0.5, 2),
        st.integers(0, 12),
        st.integers(0, 12),
    )
    def test_scaled_form(self, xs, zs, d, p, g1, g2):
        params = PoolParams(50.0, g1, g2)
        x, y = xs * d, zs * d / p
        full = invariant_f(x, y, d, p, params) / (d * d)
        assert full == pytest.approx(scaled_f(xs, zs, params), rel=1e-9, abs=1e-12)

    def test_chi_matches_scaled(self):
        assert chi(1200, 400, 2000, 2, P) == pytest.approx(scaled_chi(0.6, 0.4, P))


class TestDerivatives:
    """Closed forms against 50-digit central differences of the same formulas."""

    def _point(self, rng, region):
        while True:
            d = 10 ** rng.uniform(0, 6)
            p = rng.uniform(0.5, 2)
            xs = rng.uniform(0.05, 0.95)
            zs = rng.uniform(0.05, 0.95)
            if abs(xs - zs) > 0.02 and (xs < zs) == (region == "low"):
                return xs * d, zs * d / p, d, p

    @pytest.mark.parametrize("region", ["low", "high"])
    def test_unscaled(self, region):
        rng = random.Random(11 if region == "low" else 12)
        params = PoolParams(37.0, 5, 3)
        mp = mpmath.mpf
        for _ in range(25):
            x, y, d, p = self._point(rng, region)
            X, Y, Dm, Pm = mp(x), mp(y), mp(d), mp(p)
            checks = [
                (partial_f_x(x, y, d, p, params), fd(lambda v: invariant_f(v, Y, Dm, Pm, params), X)),
                (partial_f_y(x, y, d, p, params), fd(lambda v: invariant_f(X, v, Dm, Pm, params), Y)),
                (df_dD(x, y, d, p, params), fd(lambda v: invariant_f(X, Y, v, Pm, params), Dm)),
            ]
            for got, ref in checks:
                assert rel_err(got, ref) < 1e-9
            ref2 = fd2(lambda v: invariant_f(X, Y, v, Pm, params), Dm)
            assert rel_err(d2f_dD2(x, y, d, p, params), ref2) < 1e-7

    @pytest.mark.parametrize("region", ["low", "high"])
    def test_scaled(self, region):
        rng = random.Random(21 if region == "low" else 22)
        params = PoolParams(250.0, 4, 9)
        mp = mpmath.mpf
        for _ in range(25):
            x, y, d, p = self._point(rng, region)
            xs, zs = x / d, p * y / d
            X, Z = mp(xs), mp(zs)
            assert rel_err(dscaled_dx(xs, zs, params), fd(lambda v: scaled_f(v, Z, params), X)) < 1e-9
            assert rel_err(dscaled_dz(xs, zs, params), fd(lambda v: scaled_f(X, v, params), Z)) < 1e-9
            assert rel_err(d2scaled_dx2(xs, zs, params), fd2(lambda v: scaled_f(v, Z, params), X)) < 1e-7
            assert rel_err(d2scaled_dz2(xs, zs, params), fd2(lambda v: scaled_f(X, v, params), Z)) < 1e-7

    def test_curve_v2_partials(self):
        mp = mpmath.mpf
        for xs, zs in [(0.3, 0.6), (0.7, 0.2), (0.5, 0.45)]:
            X, Z = mp(xs), mp(zs)
            ref_x = fd(lambda v: curve_v2_scaled_f(v, Z, 400, 0.05), X)
            ref_z = fd(lambda v: curve_v2_scaled_f(X, v, 400, 0.05), Z)
            assert rel_err(curve_v2_dscaled_dx(xs, zs, 400, 0.05), ref_x) < 1e-9
            assert rel_err(curve_v2_dscaled_dz(xs, zs, 400, 0.05), ref_z) < 1e-9

    def test_zero_gamma_second_derivative(self):
        assert d2scaled_dx2(0.3, 0.6, PoolParams(5, 0, 0)) == 0


class TestCurveShape:
    @given(st.floats(0.02, 0.98), st.integers(1, 12), st.integers(1, 12), st.floats(0.1, 1000))
    def test_between_bounds_and_leverage(self, xs, g1, g2, a):
        params = PoolParams(a, g1, g2)
        zs = solve_curve_z(xs, params).root
        lo, hi = max(1 - xs, 0.0), 0.25 / xs
        slack = 1e-12
        assert lo - slack <= zs <= hi + slack
        c = scaled_chi(xs, zs, params)
        assert 0 < c <= 1 + 1e-12
        assert dscaled_dx(xs, zs, params) > 0 and dscaled_dz(xs, zs, params) > 0

    def test_slope_is_monotone_along_curve(self):
        params = PoolParams(100.0, 3, 8)
        prices = []
        for xs in [0.1 * k for k in range(1, 10)]:
            zs = solve_curve_z(xs, params).root
            prices.append(dscaled_dx(xs, zs, params) / dscaled_dz(xs, zs, params))
        # price of X falls as X becomes abundant
        assert all(a > b for a, b in zip(prices, prices[1:]))
        assert math.isclose(prices[4], 1.0, rel_tol=1e-9)


def test_sum_line_limit_at_high_gamma():
    # with gamma = 8 the approach to the sum line needs a larger amplification
    def worst(a):
        params = PoolParams(a, 8, 8)
        return max(abs(solve_curve_z(xs, params).root - (1 - xs)) / (1 - xs) for xs in (0.1, 0.3, 0.7, 0.9))

    devs = [worst(a) for a in (1e6, 1e8, 1e10)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-4
