"""Geometry of the three curve families.

Golden values are frozen from independent derivations: constant-product
algebra by hand, the stableswap point (A=100, D=2, c=1, q=1) by solving the
quadratic root and the implicit-derivative chain symbolically (x''=150.75
and y''=-50.25 are exact rationals there), and finite differences as a
cross-check oracle throughout.
"""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from ammvol import (
    ConcentratedCpmm,
    Cpmm,
    DegenerateCurve,
    DomainError,
    InvalidParams,
    RangeError,
    StableSwap,
    curvature,
    curve_from_dict,
    curve_to_dict,
    dollar_pool_value,
    equivalent_cpmm_liquidity,
    eval_holdings,
    holdings_derivative,
    pool_value,
    solve_trade,
)

CPMM = Cpmm(1.0)
CONC = ConcentratedCpmm(1.0, 0.25, 4.0)
STABLE = StableSwap(100.0, 2.0, 1.0)

ALL_CURVES = [CPMM, CONC, STABLE]


def grid_for(curve, n=100):
    if isinstance(curve, StableSwap):
        return np.geomspace(0.3, 3.0, n)
    if isinstance(curve, ConcentratedCpmm):
        # straddles the active range on purpose
        return np.geomspace(0.1, 10.0, n)
    return np.geomspace(0.05, 20.0, n)


def fd_first(curve, q, h=None):
    h = 1e-6 * q if h is None else h
    x1, y1 = curve.holdings(q + h)
    x0, y0 = curve.holdings(q - h)
    return (x1 - x0) / (2 * h), (y1 - y0) / (2 * h)


# ----- constant product goldens ------------------------------------------------


def test_cpmm_holdings_golden():
    x, y = eval_holdings(CPMM, 4.0)
    assert x == pytest.approx(0.5, abs=0)
    assert y == pytest.approx(2.0, abs=0)
    assert pool_value(CPMM, 4.0) == pytest.approx(4.0, rel=1e-15)


def test_cpmm_derivative_goldens():
    assert holdings_derivative(CPMM, 1.0) == pytest.approx((-0.5, 0.5), rel=1e-15)
    assert CPMM.second_derivs(1.0) == pytest.approx((0.75, -0.25), rel=1e-15)
    xp, yp = holdings_derivative(CPMM, 4.0)
    assert xp == pytest.approx(-1.0 / 16.0, rel=1e-15)
    assert yp == pytest.approx(0.25, rel=1e-15)


def test_cpmm_curvature_golden():
    # 1/(2**1.5 * 0.5) at q=1
    assert curvature(CPMM, 1.0) == pytest.approx(2.0**-0.5, rel=1e-12)
    # scales as 1/L
    assert curvature(Cpmm(5.0), 1.0) == pytest.approx(2.0**-0.5 / 5.0, rel=1e-12)


def test_cpmm_equivalent_liquidity_is_identically_L():
    for L in (1.0, 7.0):
        curve = Cpmm(L)
        for q in grid_for(curve):
            assert equivalent_cpmm_liquidity(curve, q) == pytest.approx(L, rel=1e-12)


def test_cpmm_solve_trade_golden():
    dx, dy = solve_trade(CPMM, 1.0, 4.0)
    assert dx == pytest.approx(-0.5, rel=1e-15)
    assert dy == pytest.approx(1.0, rel=1e-15)


def test_cpmm_product_invariant_along_grid():
    qs = grid_for(CPMM)
    x, y = CPMM.holdings_grid(qs)
    assert np.all(np.abs(x * y - 1.0) <= 1e-9)


def test_dollar_pool_value_numeraire():
    # py * value(px/py): at px=2, py=3 the dollar value is 3*2*sqrt(2/3)
    want = 3.0 * 2.0 * math.sqrt(2.0 / 3.0)
    assert dollar_pool_value(CPMM, 2.0, 3.0) == pytest.approx(want, rel=1e-14)


# ----- concentrated position ----------------------------------------------------


def test_concentrated_holdings_inside_and_clamped():
    x, y = CONC.holdings(1.0)
    assert x == pytest.approx(0.5, rel=1e-15)
    assert y == pytest.approx(0.5, rel=1e-15)
    # below the range: all x, none of y
    assert CONC.holdings(0.1) == pytest.approx((1.5, 0.0), abs=1e-15)
    assert CONC.holdings(0.25) == pytest.approx((1.5, 0.0), abs=1e-15)
    # above: all y
    assert CONC.holdings(9.0) == pytest.approx((0.0, 1.5), abs=1e-15)


def test_concentrated_derivs_vanish_out_of_range():
    assert CONC.first_derivs(0.1) == (0.0, 0.0)
    assert CONC.first_derivs(9.0) == (0.0, 0.0)
    assert CONC.second_derivs(0.2) == (0.0, 0.0)
    # inside the range it is plain constant-product
    assert CONC.first_derivs(1.0) == pytest.approx(CPMM.first_derivs(1.0), rel=1e-15)


def test_concentrated_equivalent_liquidity_indicator():
    assert equivalent_cpmm_liquidity(CONC, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert equivalent_cpmm_liquidity(CONC, 0.2) == 0.0
    assert equivalent_cpmm_liquidity(CONC, 5.0) == 0.0


def test_concentrated_value_plateaus():
    lo = CONC.pool_value(0.2)
    lo2 = CONC.pool_value(0.1)
    assert lo == pytest.approx(0.2 * 1.5, rel=1e-15)
    assert lo2 == pytest.approx(0.1 * 1.5, rel=1e-15)
    hi = CONC.pool_value(9.0)
    assert hi == pytest.approx(1.5, rel=1e-15)
    assert CONC.pool_value(100.0) == pytest.approx(hi, rel=1e-15)


def test_concentrated_validation():
    with pytest.raises(RangeError):
        ConcentratedCpmm(1.0, 2.0, 0.5)
    with pytest.raises(RangeError):
        ConcentratedCpmm(1.0, 0.0, 2.0)
    with pytest.raises(InvalidParams):
        ConcentratedCpmm(-1.0, 0.5, 2.0)


# ----- stableswap ----------------------------------------------------------------


def stable_v_oracle(curve, u):
    """Independent positive root of the invariant, direct bracketed solve."""
    A, D = curve.amplification, curve.invariant_scale

    def residual(v):
        return 4 * A * (u + v) + D - 4 * A * D - D**3 / (4 * u * v)

    return brentq(residual, 1e-18, 1e6 * D, xtol=1e-15, rtol=8.9e-16, maxiter=300)


def test_stableswap_center_golden():
    x, y = STABLE.holdings(1.0)
    assert x == pytest.approx(1.0, rel=1e-10)
    assert y == pytest.approx(1.0, rel=1e-10)
    assert STABLE.pool_value(1.0) == pytest.approx(2.0, rel=1e-10)
    xp, yp = STABLE.first_derivs(1.0)
    assert xp == pytest.approx(-100.5, rel=1e-9)
    assert yp == pytest.approx(100.5, rel=1e-9)


def test_stableswap_second_derivs_golden():
    # exact rationals at the symmetric point: 9648/64 and -201/4
    xpp, ypp = STABLE.second_derivs(1.0)
    assert xpp == pytest.approx(150.75, rel=1e-8)
    assert ypp == pytest.approx(-50.25, rel=1e-8)


def test_stableswap_holdings_match_invariant_oracle():
    rng = np.random.Generator(np.random.Philox(5))
    for q in np.exp(rng.uniform(math.log(0.5), math.log(2.0), 25)):
        x, y = STABLE.holdings(q)
        v = stable_v_oracle(STABLE, x * STABLE.price_center)
        assert y == pytest.approx(v, rel=1e-9)


def test_stableswap_price_matches_fd_of_oracle():
    # q(u) = -c * v'(u): differentiate the independent oracle numerically
    for q in (0.7, 1.0, 1.4):
        x, _ = STABLE.holdings(q)
        u = x * STABLE.price_center
        h = 1e-6 * u
        slope = (stable_v_oracle(STABLE, u + h) - stable_v_oracle(STABLE, u - h)) / (2 * h)
        assert -STABLE.price_center * slope == pytest.approx(q, rel=1e-7)


def test_stableswap_first_derivs_match_fd():
    for q in (0.6, 0.9, 1.0, 1.3, 2.2):
        xp, yp = STABLE.first_derivs(q)
        fxp, fyp = fd_first(STABLE, q)
        assert fxp == pytest.approx(xp, rel=3e-6)
        assert fyp == pytest.approx(yp, rel=3e-6)


def test_stableswap_second_derivs_match_fd():
    # third derivative is O(A^2) here, so Richardson-extrapolate the
    # central difference to kill the h^2 truncation term
    def fd2(component, q, h):
        hi = STABLE.first_derivs(q + h)[component]
        lo = STABLE.first_derivs(q - h)[component]
        return (hi - lo) / (2 * h)

    for q in (0.8, 1.0, 1.6):
        xpp, ypp = STABLE.second_derivs(q)
        h = 1e-4 * q
        fxpp = (4 * fd2(0, q, h / 2) - fd2(0, q, h)) / 3
        fypp = (4 * fd2(1, q, h / 2) - fd2(1, q, h)) / 3
        assert fxpp == pytest.approx(xpp, rel=1e-5)
        assert fypp == pytest.approx(ypp, rel=1e-5)


def test_stableswap_curvature_much_flatter_than_cpmm():
    # same pool value at the center, two orders of magnitude flatter
    cpmm_same_value = Cpmm(1.0)
    assert pool_value(cpmm_same_value, 1.0) == pytest.approx(pool_value(STABLE, 1.0))
    k_stable = curvature(STABLE, 1.0)
    assert k_stable == pytest.approx(1.0 / (2.0**1.5 * 100.5), rel=1e-9)
    assert k_stable < curvature(cpmm_same_value, 1.0) / 100.0


def test_stableswap_equivalent_liquidity_center_golden():
    assert equivalent_cpmm_liquidity(STABLE, 1.0) == pytest.approx(201.0, rel=1e-9)


def test_stableswap_center_scales_prices():
    shifted = StableSwap(100.0, 2.0, price_center=5.0)
    x, y = shifted.holdings(5.0)
    assert x == pytest.approx(0.2, rel=1e-9)  # u = c*x stays D/2
    assert y == pytest.approx(1.0, rel=1e-9)
    assert equivalent_cpmm_liquidity(shifted, 5.0) > 0.0


def test_stableswap_scale_homogeneity():
    big = StableSwap(100.0, 20.0, 1.0)
    for q in (0.8, 1.0, 1.25):
        x, y = STABLE.holdings(q)
        X, Y = big.holdings(q)
        assert X == pytest.approx(10 * x, rel=1e-9)
        assert Y == pytest.approx(10 * y, rel=1e-9)


def test_stableswap_domain_errors():
    lo, hi = STABLE.q_bounds
    with pytest.raises(DomainError):
        STABLE.holdings(hi * 2.0)
    with pytest.raises(DomainError):
        STABLE.first_derivs(lo / 2.0)


def test_stableswap_holdings_near_matches_cold_solve():
    rng = np.random.default_rng(11)
    q = 1.0
    x_prev, _ = STABLE.holdings(q)
    for _ in range(300):
        q *= math.exp(rng.normal(0.0, 3e-4))  # tick-sized hops
        cold = STABLE.holdings(q)
        warm = STABLE.holdings_near(q, x_prev)
        assert warm.x_qty == pytest.approx(cold.x_qty, rel=1e-11)
        assert warm.y_qty == pytest.approx(cold.y_qty, rel=1e-11)
        x_prev = warm.x_qty
    # far-off, zero and missing hints all still land on the cold answer
    for hint in (1e6, 0.0, None):
        far = STABLE.holdings_near(2.4, hint)
        cold = STABLE.holdings(2.4)
        assert far.x_qty == pytest.approx(cold.x_qty, rel=1e-11)
        assert far.y_qty == pytest.approx(cold.y_qty, rel=1e-11)
    with pytest.raises(DomainError):
        STABLE.holdings_near(STABLE.q_bounds[1] * 2.0, x_prev)


# ----- shared invariants, 100-point grids ---------------------------------------


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_tangency_identity(curve):
    lo, hi = curve.trade_bounds
    for q in grid_for(curve):
        if not (lo < q < hi):
            continue
        h = 1e-6 * q
        if not (lo < q - h and q + h < hi):
            continue
        xp, yp = fd_first(curve, q, h)
        assert abs(q * xp + yp) <= 1e-8 * (abs(q * xp) + abs(yp) + 1e-300)


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_holdings_monotonicity(curve):
    qs = grid_for(curve)
    x, y = curve.holdings_grid(qs)
    assert np.all(np.diff(x) <= 1e-12)
    assert np.all(np.diff(y) >= -1e-12)


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_pool_value_nondecreasing_concave(curve):
    qs = grid_for(curve)
    vals = curve.pool_value_grid(qs)
    assert np.all(np.diff(vals) >= -1e-12)
    slopes = np.diff(vals) / np.diff(qs)
    dd = np.diff(slopes) / (qs[2:] - qs[:-2])
    assert np.all(dd <= 1e-10)


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_divergence_loss_nonnegative(curve):
    # the frozen old portfolio valued at any new price dominates the pool
    qs = grid_for(curve)
    x, y = curve.holdings_grid(qs)
    vals = curve.pool_value_grid(qs)
    held = np.outer(qs, x) + y[None, :]  # held[i, j] = q_i * x(q_j) + y(q_j)
    assert np.all(held - vals[:, None] >= -1e-9)


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_curvature_matches_parametric_quotient(curve):
    lo, hi = curve.trade_bounds
    for q in grid_for(curve):
        if not (lo < q < hi):
            continue
        xp, yp = curve.first_derivs(q)
        xpp, ypp = curve.second_derivs(q)
        quotient = (xp * ypp - yp * xpp) / (xp * xp + yp * yp) ** 1.5
        assert abs(quotient) == pytest.approx(curvature(curve, q), rel=1e-8)


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_grid_methods_agree_with_scalar(curve):
    qs = grid_for(curve)
    x, y = curve.holdings_grid(qs)
    vals = curve.pool_value_grid(qs)
    xp, _ = curve.xprime_grid(qs)
    for i, q in enumerate(qs):
        q = float(q)
        xs, ys = curve.holdings(q)
        assert x[i] == pytest.approx(xs, rel=1e-9, abs=1e-12)
        assert y[i] == pytest.approx(ys, rel=1e-9, abs=1e-12)
        assert vals[i] == pytest.approx(q * xs + ys, rel=1e-9)
        if curve.is_interior(q):
            assert xp[i] == pytest.approx(curve.first_derivs(q)[0], rel=1e-8)
        else:
            assert xp[i] == 0.0


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_scaled_to_value(curve):
    target = 123.0
    q = 1.0
    scaled = curve.scaled_to_value(target, q)
    assert scaled.pool_value(q) == pytest.approx(target, rel=1e-9)
    assert type(scaled) is type(curve)


def test_scaled_to_value_degenerate_concentrated():
    # all-x boundary portfolio still has positive value, so scaling works
    scaled = CONC.scaled_to_value(50.0, 0.25)
    assert scaled.pool_value(0.25) == pytest.approx(50.0, rel=1e-12)


# ----- json round trip ------------------------------------------------------------


@pytest.mark.parametrize("curve", ALL_CURVES, ids=lambda c: c.kind)
def test_curve_dict_round_trip(curve):
    rebuilt = curve_from_dict(curve_to_dict(curve))
    assert curve_to_dict(rebuilt) == curve_to_dict(curve)


def test_curve_from_dict_ignores_unused_keys():
    curve = curve_from_dict({"kind": "cpmm", "L": 2.0, "pL": 1.0, "note": "x"})
    assert isinstance(curve, Cpmm)
    assert curve.liquidity_tokens == 2.0


def test_curve_from_dict_errors():
    with pytest.raises(InvalidParams):
        curve_from_dict({"kind": "nope"})
    with pytest.raises(InvalidParams):
        curve_from_dict({"kind": "cpmm"})
    with pytest.raises(InvalidParams):
        curve_from_dict({"kind": "concentrated", "L": 1.0, "pL": 0.5})
    with pytest.raises(RangeError):
        curve_from_dict({"kind": "concentrated", "L": 1.0, "pL": 2.0, "pU": 0.5})
    with pytest.raises(InvalidParams):
        curve_from_dict(["cpmm"])


def test_curvature_errors():
    with pytest.raises(DomainError):
        curvature(CONC, 0.1)
    with pytest.raises(DomainError):
        curvature(CPMM, -1.0)


def test_degenerate_curvature_via_zero_derivative():
    # out-of-range concentrated point reached through trade_bounds is a
    # DomainError; the DegenerateCurve path needs x'==0 strictly inside,
    # which no shipped family produces, so probe the guard directly.
    class Flat(ConcentratedCpmm):
        def first_derivs(self, q):
            return (0.0, 0.0)

    flat = Flat(1.0, 0.5, 2.0)
    with pytest.raises(DegenerateCurve):
        curvature(flat, 1.0)
