"""Implied volatility and implied correlation from a fee-swap fixed leg.

A fixed-for-floating fee swap pays the pool's fee/LVR stream over [0, T]
against an upfront fixed payment pi_bar.  Valued in money-market units the
floating leg of one unit of liquidity reduces to

    value(sigma) = C(q0) - E[ C(q0 * exp(-sigma**2*T/2 + sigma*sqrt(T)*Z)) ]

with C the pool value function and Z standard normal: the expected pool
value against a driftless lognormal kernel.  value(sigma) is continuous,
zero at sigma=0 and strictly increasing toward C(q0), so a quoted fixed
leg in [0, C(q0)) identifies a unique implied volatility.  For a
two-risky-asset pair the same machinery prices the effective pair
volatility sigma_bar, and the implied correlation follows from

    sigma_bar**2 = sigma_x**2 - 2*rho*sigma_x*sigma_y + sigma_y**2.

Monte Carlo evaluations use common random numbers: every evaluation inside
one solve reuses the same normal draws, making the objective a fixed
monotone function that plain bisection inverts reliably.  The draws come
from a counter-based generator, so the value for a given path index does
not depend on how paths might be partitioned across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .curves import AmmCurve, Cpmm
from .errors import ArbitrageViolation, InvalidParams, NoConvergence, OutOfBounds
from .fees import YEAR_SECONDS
from .simulation import SimLedger, WindowStat

_SIGMA_BRACKET_START = 4.0
_SIGMA_BRACKET_CAP = 64.0
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class SwapSpec:
    """Terms of one fee swap: the pool, the horizon and the start prices.

    liquidity_tokens scales the notional on top of the curve's own size.
    The rate r is carried for reporting; pricing works in money-market
    units, so only the driftless kernel is ever simulated.
    """

    curve: AmmCurve
    maturity: float
    p0x: float
    p0y: float = 1.0
    r: float = 0.0
    liquidity_tokens: float = 1.0

    def __post_init__(self):
        if not isinstance(self.curve, AmmCurve):
            raise InvalidParams(f"curve must be an AmmCurve, got {type(self.curve).__name__}")
        if not (math.isfinite(self.maturity) and self.maturity > 0.0):
            raise InvalidParams(f"maturity must be a positive number of years, got {self.maturity!r}")
        if not (math.isfinite(self.p0x) and self.p0x > 0.0 and math.isfinite(self.p0y) and self.p0y > 0.0):
            raise InvalidParams("start prices must be positive")
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise InvalidParams(f"rate must be nonnegative, got {self.r!r}")
        if not (math.isfinite(self.liquidity_tokens) and self.liquidity_tokens >= 0.0):
            raise InvalidParams(f"liquidity_tokens must be nonnegative, got {self.liquidity_tokens!r}")

    @property
    def q0(self) -> float:
        return self.p0x / self.p0y

    @property
    def notional_scale(self) -> float:
        return self.liquidity_tokens * self.p0y

    def pool_value_now(self) -> float:
        """Dollar pool value of the swap notional at the start prices."""
        return self.notional_scale * float(self.curve.pool_value_grid(np.array([self.q0]))[0])


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings; antithetic pairing halves the draw count."""

    n_paths: int = 100_000
    seed: int = 0
    antithetic: bool = True

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 2:
            raise InvalidParams(f"n_paths must be an integer >= 2, got {self.n_paths!r}")


@dataclass(frozen=True)
class IvSolution:
    sigma: float
    stderr: float
    iterations: int


@dataclass(frozen=True)
class CorrSolution:
    rho: float
    sigma_bar: float
    stderr: float
    iterations: int


def _draw_normals(mc: McConfig) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(mc.seed))
    if mc.antithetic:
        z = rng.standard_normal(mc.n_paths // 2)
        return np.concatenate([z, -z])
    return rng.standard_normal(mc.n_paths)


def _mean_stderr(vals: np.ndarray, antithetic: bool) -> tuple[float, float]:
    if antithetic:
        half = vals.size // 2
        pair = 0.5 * (vals[:half] + vals[half:])
        mean = float(pair.mean())
        stderr = float(pair.std(ddof=1) / math.sqrt(half)) if half > 1 else 0.0
    else:
        mean = float(vals.mean())
        stderr = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return mean, stderr


def mc_expected_pool_value(
    curve: AmmCurve, p0: float, sigma: float, maturity: float, mc: McConfig | None = None
) -> tuple[float, float]:
    """Raw Monte Carlo estimate of E[C(p0 * kernel(sigma))] and its stderr.

    No closed-form shortcuts: this is the estimator the exact formulas are
    validated against.
    """
    mc = mc or McConfig()
    if not p0 > 0.0:
        raise InvalidParams(f"p0 must be positive, got {p0!r}")
    if sigma < 0.0:
        raise InvalidParams(f"sigma must be nonnegative, got {sigma!r}")
    if not maturity > 0.0:
        raise InvalidParams(f"maturity must be positive, got {maturity!r}")
    z = _draw_normals(mc)
    q = p0 * np.exp(-0.5 * sigma * sigma * maturity + sigma * math.sqrt(maturity) * z)
    vals = curve.pool_value_grid(q)
    return _mean_stderr(vals, mc.antithetic)


def lognormal_kernel_expectation(
    curve: AmmCurve, p0: float, sigma: float, maturity: float, mc: McConfig | None = None
) -> float:
    """E[C(p0 * kernel(sigma))]; exact for sigma=0 and for Cpmm.

    The constant-product value is 2L*sqrt(q) and E[sqrt(kernel)] is the
    lognormal half-moment exp(-sigma**2*T/8), so no sampling is needed.
    """
    if sigma == 0.0:
        if not p0 > 0.0:
            raise InvalidParams(f"p0 must be positive, got {p0!r}")
        return float(curve.pool_value_grid(np.array([p0]))[0])
    if isinstance(curve, Cpmm):
        if not (p0 > 0.0 and sigma > 0.0 and maturity > 0.0):
            raise InvalidParams("p0, sigma and maturity must be positive")
        return 2.0 * curve.liquidity_tokens * math.sqrt(p0) * math.exp(-sigma * sigma * maturity / 8.0)
    mean, _ = mc_expected_pool_value(curve, p0, sigma, maturity, mc)
    return mean


def mc_floating_leg(spec: SwapSpec, sigma: float, mc: McConfig | None = None) -> tuple[float, float]:
    """(floating leg value, MC stderr) in dollars for the swap notional."""
    if sigma < 0.0:
        raise InvalidParams(f"sigma must be nonnegative, got {sigma!r}")
    scale = spec.notional_scale
    if sigma == 0.0 or scale == 0.0:
        return 0.0, 0.0
    c0 = spec.pool_value_now() / scale
    if isinstance(spec.curve, Cpmm):
        kernel = lognormal_kernel_expectation(spec.curve, spec.q0, sigma, spec.maturity)
        return scale * (c0 - kernel), 0.0
    mean, stderr = mc_expected_pool_value(spec.curve, spec.q0, sigma, spec.maturity, mc)
    return scale * (c0 - mean), scale * stderr


def floating_leg_value(spec: SwapSpec, sigma: float, mc: McConfig | None = None) -> float:
    """Present value of the accrued fee/LVR stream over the swap horizon."""
    value, _ = mc_floating_leg(spec, sigma, mc)
    return value


class _CrnObjective:
    """floating-leg value as a deterministic function of sigma.

    Normal draws are made once and sorted; prices are monotone in the draw
    for every sigma, so consecutive evaluations land on nearby grids and
    the curve's warm-started inversion (StableSwap) stays cheap.  Antithetic
    mates sit mirrored at positions k and n-1-k after sorting.
    """

    def __init__(self, spec: SwapSpec, mc: McConfig):
        self.curve = spec.curve
        self.q0 = spec.q0
        self.scale = spec.notional_scale
        self.maturity = spec.maturity
        self.c0 = spec.pool_value_now() / self.scale if self.scale else 0.0
        self.cap = self.scale * self.c0
        self.exact = isinstance(spec.curve, Cpmm)
        self.antithetic = mc.antithetic
        if not self.exact:
            self.z = np.sort(_draw_normals(mc))
            self.warm = None

    def __call__(self, sigma: float) -> tuple[float, float]:
        if sigma == 0.0 or self.scale == 0.0:
            return 0.0, 0.0
        if self.exact:
            kernel = self.c0 * math.exp(-sigma * sigma * self.maturity / 8.0)
            return self.scale * (self.c0 - kernel), 0.0
        q = self.q0 * np.exp(
            -0.5 * sigma * sigma * self.maturity + sigma * math.sqrt(self.maturity) * self.z
        )
        vals, self.warm = self.curve.pool_value_grid_warm(q, self.warm)
        if self.antithetic:
            half = vals.size // 2
            pair = 0.5 * (vals[:half] + vals[::-1][:half])
            mean = float(pair.mean())
            stderr = float(pair.std(ddof=1) / math.sqrt(half)) if half > 1 else 0.0
        else:
            mean = float(vals.mean())
            stderr = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
        return self.scale * (self.c0 - mean), self.scale * stderr


def implied_vol(
    spec: SwapSpec, pi_bar: float, mc: McConfig | None = None, tol: float = 1e-6
) -> IvSolution:
    """Invert the floating leg: the volatility at which it is worth pi_bar.

    Bisection against the common-random-number objective; the reported
    stderr maps the price-space MC noise at the solution through the
    numeric slope d(value)/d(sigma).
    """
    mc = mc or McConfig()
    pi_bar = float(pi_bar)
    if not math.isfinite(pi_bar) or pi_bar < 0.0:
        raise InvalidParams(f"fixed leg must be a nonnegative number, got {pi_bar!r}")
    if not tol > 0.0:
        raise InvalidParams(f"tol must be positive, got {tol!r}")
    objective = _CrnObjective(spec, mc)
    if pi_bar >= objective.cap:
        raise ArbitrageViolation(
            f"fixed leg {pi_bar:.6g} >= pool value {objective.cap:.6g}: "
            "paying it admits a risk-free profit"
        )
    if pi_bar == 0.0:
        return IvSolution(0.0, 0.0, 0)

    iterations = 0
    hi = _SIGMA_BRACKET_START
    while objective(hi)[0] < pi_bar:
        hi *= 2.0
        iterations += 1
        if hi > _SIGMA_BRACKET_CAP:
            raise ArbitrageViolation(
                f"fixed leg {pi_bar:.6g} is within Monte Carlo noise of the pool-value "
                f"bound {objective.cap:.6g}; no volatility below {_SIGMA_BRACKET_CAP} reproduces it"
            )
    lo = 0.0
    sigma = 0.5 * hi
    converged = False
    for _ in range(_MAX_BISECTIONS):
        iterations += 1
        sigma = 0.5 * (lo + hi)
        if objective(sigma)[0] < pi_bar:
            lo = sigma
        else:
            hi = sigma
        if hi - lo <= tol * max(1.0, sigma):
            converged = True
            break
    if not converged:
        raise NoConvergence(
            f"bisection did not reach tolerance {tol:g} within {_MAX_BISECTIONS} iterations"
        )
    sigma = 0.5 * (lo + hi)
    _, price_se = objective(sigma)
    if price_se > 0.0:
        delta = max(1e-3, 0.01 * sigma)
        s_lo = max(sigma - delta, 0.0)
        slope = (objective(sigma + delta)[0] - objective(s_lo)[0]) / (sigma + delta - s_lo)
        stderr = price_se / slope if slope > 0.0 else math.inf
    else:
        stderr = 0.0
    return IvSolution(sigma=sigma, stderr=stderr, iterations=iterations)


def implied_vol_cpmm_closed_form(
    p0x: float, pi_bar: float, maturity: float, liquidity_tokens: float = 1.0
) -> float:
    """Constant-product implied volatility in closed form.

    Inverts pi_bar = 2L*sqrt(p0x)*(1 - exp(-sigma**2*T/8)).
    """
    p0x = float(p0x)
    pi_bar = float(pi_bar)
    maturity = float(maturity)
    liquidity_tokens = float(liquidity_tokens)
    if not (p0x > 0.0 and maturity > 0.0 and liquidity_tokens > 0.0):
        raise InvalidParams("p0x, maturity and liquidity_tokens must be positive")
    if not math.isfinite(pi_bar) or pi_bar < 0.0:
        raise InvalidParams(f"fixed leg must be a nonnegative number, got {pi_bar!r}")
    cap = 2.0 * liquidity_tokens * math.sqrt(p0x)
    if pi_bar >= cap:
        raise ArbitrageViolation(
            f"fixed leg {pi_bar:.6g} >= pool value {cap:.6g}: paying it admits a risk-free profit"
        )
    if pi_bar == 0.0:
        return 0.0
    return math.sqrt(8.0 / maturity * math.log(cap / (cap - pi_bar)))


def implied_corr_bounds(
    spec: SwapSpec, sigma_x: float, sigma_y: float, mc: McConfig | None = None
) -> tuple[float, float]:
    """Fixed-leg interval consistent with correlations in [-1, +1].

    The effective pair volatility ranges over [|sx-sy|, sx+sy], so the
    endpoints are the floating-leg values at those volatilities.
    """
    if not (sigma_x > 0.0 and sigma_y > 0.0):
        raise InvalidParams("component volatilities must be positive")
    lo = floating_leg_value(spec, abs(sigma_x - sigma_y), mc)
    hi = floating_leg_value(spec, sigma_x + sigma_y, mc)
    return lo, hi


def implied_corr(
    spec: SwapSpec,
    sigma_x: float,
    sigma_y: float,
    pi_bar: float,
    mc: McConfig | None = None,
    tol: float = 1e-6,
) -> CorrSolution:
    """Correlation implied by the fixed leg given both single-asset vols.

    Solves for the effective pair volatility in numeraire-changed units
    (the y asset is the unit), then maps it through
    rho = (sx**2 + sy**2 - sigma_bar**2) / (2*sx*sy).  Quotes at (or within
    a small slack of) the interval endpoints pin rho to exactly +1 or -1;
    anything further outside is rejected.
    """
    mc = mc or McConfig()
    sigma_x = float(sigma_x)
    sigma_y = float(sigma_y)
    if not (sigma_x > 0.0 and sigma_y > 0.0):
        raise InvalidParams("component volatilities must be positive")
    pi_bar = float(pi_bar)
    if not math.isfinite(pi_bar):
        raise InvalidParams(f"fixed leg must be a finite number, got {pi_bar!r}")
    pi_lo, pi_hi = implied_corr_bounds(spec, sigma_x, sigma_y, mc)
    slack = 1e-3 * spec.pool_value_now()
    if pi_bar < pi_lo - slack or pi_bar > pi_hi + slack:
        raise OutOfBounds(
            f"fixed leg {pi_bar:.6g} lies outside the correlation-implied interval "
            f"[{pi_lo:.6g}, {pi_hi:.6g}]"
        )
    if pi_bar <= pi_lo:
        sigma_bar, sig_stderr, iterations = abs(sigma_x - sigma_y), 0.0, 0
    elif pi_bar >= pi_hi:
        sigma_bar, sig_stderr, iterations = sigma_x + sigma_y, 0.0, 0
    else:
        sol = implied_vol(spec, pi_bar, mc, tol)
        sigma_bar, sig_stderr, iterations = sol.sigma, sol.stderr, sol.iterations
    rho = (sigma_x * sigma_x + sigma_y * sigma_y - sigma_bar * sigma_bar) / (2.0 * sigma_x * sigma_y)
    rho = min(max(rho, -1.0), 1.0)
    stderr = sig_stderr * sigma_bar / (sigma_x * sigma_y)
    return CorrSolution(rho=rho, sigma_bar=sigma_bar, stderr=stderr, iterations=iterations)


def fee_vol_from_realized(
    window_fees: float, spec: SwapSpec, mc: McConfig | None = None, tol: float = 1e-6
) -> float:
    """Volatility implied by treating realized window fees as the fixed leg.

    spec.p0x should be the pool spot at the window start and spec.maturity
    the window length in years, so windows of equal length are comparable.
    Constant-product pools invert in closed form; other curves go through
    the Monte Carlo solver.
    """
    fees = float(window_fees)
    if not math.isfinite(fees) or fees < 0.0:
        raise InvalidParams(f"window fees must be nonnegative, got {fees!r}")
    if fees == 0.0:
        return 0.0
    if isinstance(spec.curve, Cpmm) and spec.notional_scale > 0.0:
        return implied_vol_cpmm_closed_form(
            spec.q0, fees / spec.notional_scale, spec.maturity, spec.curve.liquidity_tokens
        )
    return implied_vol(spec, fees, mc, tol).sigma


def attach_fee_vols(
    ledger: SimLedger, stats: list[WindowStat], mc: McConfig | None = None
) -> list[WindowStat]:
    """Fill in each window's fee_vol from its realized fees.

    Each window is priced as its own swap: spot at the window start, window
    length as maturity, the ledger's (already scaled) pool as the curve.
    """
    mc = mc or McConfig(n_paths=1 << 14, seed=0, antithetic=True)
    out = []
    for stat in stats:
        spec = SwapSpec(
            curve=ledger.curve,
            maturity=(stat.window_end - stat.window_start) / YEAR_SECONDS,
            p0x=ledger.spot_at(stat.window_start),
            p0y=1.0,
        )
        out.append(replace(stat, fee_vol=fee_vol_from_realized(stat.fees, spec, mc)))
    return out
