"""AMM pool geometry.

An automated market maker holding two assets is summarized by its
portfolio-update functions ``q -> (x(q), y(q))``: the holdings the pool is
left with once arbitrageurs have aligned its marginal price with an
external price ``q`` (units of y per unit of x).  Along the efficient
boundary of the reachable set the tangency identity

    q * x'(q) + y'(q) = 0

holds, ``x`` never increases and ``y`` never decreases with the price, and
the pool value in y units

    value(q) = q * x(q) + y(q)

is nondecreasing and concave.  Three curve families are provided:

``Cpmm``
    Constant product ``x * y = L**2``, so ``x = L/sqrt(q)`` and
    ``y = L*sqrt(q)``.
``ConcentratedCpmm``
    A constant-product position active only on a price range
    ``[p_lo, p_hi]``; outside it the pool holds the boundary portfolio and
    both derivatives vanish.
``StableSwap``
    Curve-v1 style pool with amplification ``A``, scale ``D`` and price
    center ``c``.  In centered units ``u = c*x``, ``v = y`` the level set is

        4*A*(u + v) + D = 4*A*D + D**3 / (4*u*v)

    Holdings at a price are found by inverting the strictly decreasing
    marginal price map ``q(u)``; derivatives come from implicit
    differentiation of the invariant, since finite differences lose all
    precision in the flat region near the center.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateCurve, DomainError, InvalidParams, RangeError

# Holdings smaller than this fraction of the pool scale count as exhausted;
# they bound the StableSwap price domain.
HOLDINGS_FLOOR = 1e-12


class Holdings(NamedTuple):
    """Pool holdings (x_qty, y_qty), both nonnegative."""

    x_qty: float
    y_qty: float


def _check_price(q: float) -> float:
    q = float(q)
    if not math.isfinite(q) or q <= 0.0:
        raise DomainError(f"price must be a positive finite number, got {q!r}")
    return q


def _check_positive(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParams(f"{name} must be a positive finite number, got {value!r}")
    return value


class AmmCurve(ABC):
    """A two-asset AMM described by portfolio-update functions x(q), y(q).

    Scalar methods validate their price argument and raise
    :class:`~ammvol.errors.DomainError` outside the curve's price domain.
    The ``*_grid`` methods are vectorized over numpy arrays and extend
    beyond the tradeable range by valuing the boundary portfolio the pool
    actually holds there; they exist for the Monte Carlo and simulation
    engines where per-element validation would dominate the cost.
    """

    kind: ClassVar[str]

    @property
    @abstractmethod
    def q_bounds(self) -> tuple[float, float]:
        """Price interval on which holdings are defined."""

    @property
    def trade_bounds(self) -> tuple[float, float]:
        """Price interval within which trades can move the pool spot."""
        return self.q_bounds

    def is_interior(self, q: float) -> bool:
        lo, hi = self.trade_bounds
        return lo < q < hi

    @abstractmethod
    def holdings(self, q: float) -> Holdings:
        ...

    def holdings_near(self, q: float, x_hint: float | None = None) -> Holdings:
        """holdings(q), optionally warm-started from a nearby x quantity.

        Curves whose inversion is iterative override this; the hint must
        come from a state on the same curve or it is silently ignored.
        """
        return self.holdings(q)

    @abstractmethod
    def first_derivs(self, q: float) -> tuple[float, float]:
        """(x'(q), y'(q)); zero once either holding is exhausted."""

    @abstractmethod
    def second_derivs(self, q: float) -> tuple[float, float]:
        ...

    def pool_value(self, q: float) -> float:
        """Pool value q*x(q) + y(q) in units of y."""
        x, y = self.holdings(q)
        return q * x + y

    @abstractmethod
    def holdings_grid(self, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ...

    def pool_value_grid(self, qs: np.ndarray) -> np.ndarray:
        qs = np.asarray(qs, dtype=float)
        x, y = self.holdings_grid(qs)
        return qs * x + y

    def pool_value_grid_warm(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        """pool_value_grid plus reusable solver state, see xprime_grid."""
        return self.pool_value_grid(qs), None

    @abstractmethod
    def xprime_grid(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        """Vectorized x'(q), zero outside the tradeable range.

        ``warm`` carries solver state between calls on nearby grids (the
        path engines call this once per time step); pass the second element
        of the previous result to reuse it.
        """

    @abstractmethod
    def scaled_to_value(self, target_value: float, q: float) -> "AmmCurve":
        """A copy of this curve rescaled so that pool_value(q) == target_value."""

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        fields = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items() if k != "kind")
        return f"{type(self).__name__}({fields})"


@dataclass(frozen=True, repr=False)
class Cpmm(AmmCurve):
    """Constant product pool x*y = L**2 with L liquidity tokens."""

    liquidity_tokens: float

    kind: ClassVar[str] = "cpmm"

    def __post_init__(self):
        object.__setattr__(
            self, "liquidity_tokens", _check_positive(self.liquidity_tokens, "liquidity_tokens")
        )

    @property
    def q_bounds(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def holdings(self, q: float) -> Holdings:
        q = _check_price(q)
        rq = math.sqrt(q)
        L = self.liquidity_tokens
        return Holdings(L / rq, L * rq)

    def first_derivs(self, q: float) -> tuple[float, float]:
        q = _check_price(q)
        L = self.liquidity_tokens
        return (-0.5 * L * q**-1.5, 0.5 * L * q**-0.5)

    def second_derivs(self, q: float) -> tuple[float, float]:
        q = _check_price(q)
        L = self.liquidity_tokens
        return (0.75 * L * q**-2.5, -0.25 * L * q**-1.5)

    def pool_value(self, q: float) -> float:
        q = _check_price(q)
        return 2.0 * self.liquidity_tokens * math.sqrt(q)

    def holdings_grid(self, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        qs = np.asarray(qs, dtype=float)
        rq = np.sqrt(np.maximum(qs, 0.0))
        L = self.liquidity_tokens
        with np.errstate(divide="ignore"):
            x = np.where(rq > 0.0, L / rq, np.inf)
        return x, L * rq

    def pool_value_grid(self, qs: np.ndarray) -> np.ndarray:
        qs = np.asarray(qs, dtype=float)
        return 2.0 * self.liquidity_tokens * np.sqrt(np.maximum(qs, 0.0))

    def xprime_grid(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        qs = np.asarray(qs, dtype=float)
        with np.errstate(divide="ignore"):
            xp = np.where(qs > 0.0, -0.5 * self.liquidity_tokens * qs**-1.5, 0.0)
        return xp, None

    def scaled_to_value(self, target_value: float, q: float) -> "Cpmm":
        q = _check_price(q)
        target_value = _check_positive(target_value, "target_value")
        return Cpmm(target_value / (2.0 * math.sqrt(q)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "L": self.liquidity_tokens}


@dataclass(frozen=True, repr=False)
class ConcentratedCpmm(AmmCurve):
    """Constant-product position active only on the price range [p_lo, p_hi].

    Inside the range the holdings are the range-shifted constant-product
    portfolio x = L*(1/sqrt(q) - 1/sqrt(p_hi)), y = L*(sqrt(q) - sqrt(p_lo)).
    Below p_lo the position is all x, above p_hi all y, and the holdings
    stay clamped at those boundary portfolios.
    """

    liquidity_tokens: float
    p_lo: float
    p_hi: float

    kind: ClassVar[str] = "concentrated"

    def __post_init__(self):
        object.__setattr__(
            self, "liquidity_tokens", _check_positive(self.liquidity_tokens, "liquidity_tokens")
        )
        p_lo = float(self.p_lo)
        p_hi = float(self.p_hi)
        if not (math.isfinite(p_lo) and math.isfinite(p_hi) and 0.0 < p_lo < p_hi):
            raise RangeError(f"need 0 < p_lo < p_hi, got [{p_lo!r}, {p_hi!r}]")
        object.__setattr__(self, "p_lo", p_lo)
        object.__setattr__(self, "p_hi", p_hi)

    @property
    def q_bounds(self) -> tuple[float, float]:
        return (0.0, math.inf)

    @property
    def trade_bounds(self) -> tuple[float, float]:
        return (self.p_lo, self.p_hi)

    def holdings(self, q: float) -> Holdings:
        q = _check_price(q)
        qc = min(max(q, self.p_lo), self.p_hi)
        L = self.liquidity_tokens
        x = L * (qc**-0.5 - self.p_hi**-0.5)
        y = L * (qc**0.5 - self.p_lo**0.5)
        return Holdings(max(x, 0.0), max(y, 0.0))

    def first_derivs(self, q: float) -> tuple[float, float]:
        q = _check_price(q)
        if not self.is_interior(q):
            return (0.0, 0.0)
        L = self.liquidity_tokens
        return (-0.5 * L * q**-1.5, 0.5 * L * q**-0.5)

    def second_derivs(self, q: float) -> tuple[float, float]:
        q = _check_price(q)
        if not self.is_interior(q):
            return (0.0, 0.0)
        L = self.liquidity_tokens
        return (0.75 * L * q**-2.5, -0.25 * L * q**-1.5)

    def holdings_grid(self, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        qs = np.asarray(qs, dtype=float)
        qc = np.clip(qs, self.p_lo, self.p_hi)
        L = self.liquidity_tokens
        x = np.maximum(L * (qc**-0.5 - self.p_hi**-0.5), 0.0)
        y = np.maximum(L * (qc**0.5 - self.p_lo**0.5), 0.0)
        return x, y

    def xprime_grid(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        qs = np.asarray(qs, dtype=float)
        inside = (qs > self.p_lo) & (qs < self.p_hi)
        qsafe = np.where(inside, qs, 1.0)
        xp = np.where(inside, -0.5 * self.liquidity_tokens * qsafe**-1.5, 0.0)
        return xp, None

    def scaled_to_value(self, target_value: float, q: float) -> "ConcentratedCpmm":
        q = _check_price(q)
        target_value = _check_positive(target_value, "target_value")
        current = self.pool_value(q)
        if current <= 0.0:
            raise DegenerateCurve("position has zero value at this price, cannot rescale")
        return ConcentratedCpmm(self.liquidity_tokens * target_value / current, self.p_lo, self.p_hi)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "L": self.liquidity_tokens, "pL": self.p_lo, "pU": self.p_hi}


@dataclass(frozen=True, repr=False)
class StableSwap(AmmCurve):
    """Two-asset Curve-v1 pool: amplification A, scale D, price center c.

    At the symmetric point u = v = D/2 the marginal price equals c and the
    pool value equals D.  The price domain is the interval on which both
    holdings stay above HOLDINGS_FLOOR * D; it widens rapidly with D and
    narrows as A grows.
    """

    amplification: float
    invariant_scale: float
    price_center: float = 1.0

    kind: ClassVar[str] = "stableswap"

    def __post_init__(self):
        object.__setattr__(self, "amplification", _check_positive(self.amplification, "amplification"))
        object.__setattr__(
            self, "invariant_scale", _check_positive(self.invariant_scale, "invariant_scale")
        )
        object.__setattr__(self, "price_center", _check_positive(self.price_center, "price_center"))

    # ----- invariant machinery in centered units u = c*x, v = y ---------

    def _v_from_u(self, u: float) -> float:
        # Positive root of 16*A*u*v**2 + 4*u*(4*A*(u - D) + D)*v - D**3 = 0,
        # written to avoid cancellation for either sign of b.
        A = self.amplification
        D = self.invariant_scale
        a = 16.0 * A * u
        b = 4.0 * u * (4.0 * A * (u - D) + D)
        s = math.sqrt(b * b + 4.0 * a * D**3)
        if b >= 0.0:
            return 2.0 * D**3 / (b + s)
        return (s - b) / (2.0 * a)

    def _state(self, u: float):
        """Invariant point and implicit derivatives at u.

        Returns (v, vp, vpp, q, qp, qpp) where primes are d/du, q(u) is the
        marginal price and q = -c * vp.  Obtained by differentiating
        N1(u,v)/N2(u,v) = -v'(u) with N1 = 4A + k/(u**2 v), N2 = 4A + k/(u v**2)
        and k = D**3/4 three times.
        """
        A = self.amplification
        c = self.price_center
        k = self.invariant_scale**3 / 4.0
        v = self._v_from_u(u)
        n1 = 4.0 * A + k / (u * u * v)
        n2 = 4.0 * A + k / (u * v * v)
        vp = -n1 / n2
        n1p = k * (-2.0 / (u**3 * v) - vp / (u**2 * v**2))
        n2p = k * (-1.0 / (u**2 * v**2) - 2.0 * vp / (u * v**3))
        vpp = (n1 * n2p - n1p * n2) / (n2 * n2)
        n1pp = k * (
            6.0 / (u**4 * v)
            + 4.0 * vp / (u**3 * v**2)
            + 2.0 * vp * vp / (u**2 * v**3)
            - vpp / (u**2 * v**2)
        )
        n2pp = k * (
            2.0 / (u**3 * v**2)
            + 4.0 * vp / (u**2 * v**3)
            + 6.0 * vp * vp / (u * v**4)
            - 2.0 * vpp / (u * v**3)
        )
        vppp = ((n1 * n2pp - n1pp * n2) * n2 - 2.0 * n2p * (n1 * n2p - n1p * n2)) / n2**3
        q = c * n1 / n2
        qp = -c * vpp
        qpp = -c * vppp
        return v, vp, vpp, q, qp, qpp

    def _q_of_u(self, u: float) -> float:
        A = self.amplification
        k = self.invariant_scale**3 / 4.0
        v = self._v_from_u(u)
        n1 = 4.0 * A + k / (u * u * v)
        n2 = 4.0 * A + k / (u * v * v)
        return self.price_center * n1 / n2

    @cached_property
    def _u_bounds(self) -> tuple[float, float]:
        floor = HOLDINGS_FLOOR * self.invariant_scale
        u_min = floor * self.price_center  # x floor
        u_max = self._v_from_u(floor)  # y floor, by u <-> v symmetry
        return u_min, u_max

    @cached_property
    def q_bounds(self) -> tuple[float, float]:
        u_min, u_max = self._u_bounds
        # q(u) is strictly decreasing
        return self._q_of_u(u_max), self._q_of_u(u_min)

    def _u_from_q(self, q: float) -> float:
        u_min, u_max = self._u_bounds
        lq = math.log(q)
        w = brentq(
            lambda w: math.log(self._q_of_u(math.exp(w))) - lq,
            math.log(u_min),
            math.log(u_max),
            xtol=1e-13,
            rtol=1e-15,
            maxiter=256,
        )
        return math.exp(w)

    def _require_in_domain(self, q: float) -> float:
        q = _check_price(q)
        q_lo, q_hi = self.q_bounds
        if not (q_lo <= q <= q_hi):
            raise DomainError(f"price {q!r} outside stableswap domain [{q_lo:.6g}, {q_hi:.6g}]")
        return q

    # ----- vectorized invariant machinery --------------------------------

    def _grid_v(self, u: np.ndarray) -> np.ndarray:
        A = self.amplification
        D = self.invariant_scale
        a = 16.0 * A * u
        b = 4.0 * u * (4.0 * A * (u - D) + D)
        s = np.sqrt(b * b + 4.0 * a * D**3)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(b >= 0.0, 2.0 * D**3 / (b + s), (s - b) / (2.0 * a))

    def _grid_state(self, u: np.ndarray):
        """Vectorized (v, q, qp) with qp = dq/du < 0."""
        A = self.amplification
        c = self.price_center
        k = self.invariant_scale**3 / 4.0
        v = self._grid_v(u)
        n1 = 4.0 * A + k / (u * u * v)
        n2 = 4.0 * A + k / (u * v * v)
        vp = -n1 / n2
        n1p = k * (-2.0 / (u**3 * v) - vp / (u**2 * v**2))
        n2p = k * (-1.0 / (u**2 * v**2) - 2.0 * vp / (u * v**3))
        vpp = (n1 * n2p - n1p * n2) / (n2 * n2)
        q = c * n1 / n2
        qp = -c * vpp
        return v, q, qp

    def _grid_u_from_q(self, qs: np.ndarray, warm: np.ndarray | None = None) -> np.ndarray:
        """Invert q(u) elementwise; qs must already be clipped to q_bounds.

        With ``warm`` (u values from a nearby grid) a few Newton steps on
        log q vs log u suffice; otherwise plain bisection in log u.
        """
        u_min, u_max = self._u_bounds
        w_lo = math.log(u_min)
        w_hi = math.log(u_max)
        target = np.log(qs)
        if warm is not None:
            w = np.log(np.clip(warm, u_min, u_max))
            f = None
            for _ in range(4):
                u = np.exp(w)
                v, q, qp = self._grid_state(u)
                f = np.log(q) - target
                # d log q / d log u = qp * u / q
                w = np.clip(w - f / (qp * u / q), w_lo, w_hi)
            u = np.exp(w)
            _, q, _ = self._grid_state(u)
            f = np.log(q) - target
            bad = np.abs(f) > 1e-9
            if np.any(bad):
                u[bad] = self._grid_u_from_q(qs[bad], None)
            return u
        lo = np.full(qs.shape, w_lo)
        hi = np.full(qs.shape, w_hi)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            _, q, _ = self._grid_state(np.exp(mid))
            # q(u) decreasing: too-high price means u must grow
            take = q > qs
            lo = np.where(take, mid, lo)
            hi = np.where(take, hi, mid)
        return np.exp(0.5 * (lo + hi))

    # ----- public surface -------------------------------------------------

    @property
    def trade_bounds(self) -> tuple[float, float]:
        return self.q_bounds

    def holdings(self, q: float) -> Holdings:
        q = self._require_in_domain(q)
        u = self._u_from_q(q)
        return Holdings(u / self.price_center, self._v_from_u(u))

    def holdings_near(self, q: float, x_hint: float | None = None) -> Holdings:
        q = self._require_in_domain(q)
        u_min, u_max = self._u_bounds
        u0 = (x_hint or 0.0) * self.price_center
        if not (u_min <= u0 <= u_max):
            u = self._u_from_q(q)
            return Holdings(u / self.price_center, self._v_from_u(u))
        w_lo, w_hi = math.log(u_min), math.log(u_max)
        lq = math.log(q)
        w = math.log(u0)
        for _ in range(8):
            u = math.exp(w)
            _, _, _, qw, qp, _ = self._state(u)
            f = math.log(qw) - lq
            if abs(f) <= 1e-13:
                break
            # d log q / d log u = qp * u / q, strictly negative
            w = min(max(w - f / (qp * u / qw), w_lo), w_hi)
        else:  # hint too far off for Newton; cold solve
            u = self._u_from_q(q)
        return Holdings(u / self.price_center, self._v_from_u(u))

    def first_derivs(self, q: float) -> tuple[float, float]:
        q = self._require_in_domain(q)
        u = self._u_from_q(q)
        _, vp, _, _, qp, _ = self._state(u)
        c = self.price_center
        # x = u/c, so dx/dq = (1/c) / (dq/du); dy/dq = v' / q'
        return ((1.0 / c) / qp, vp / qp)

    def second_derivs(self, q: float) -> tuple[float, float]:
        q = self._require_in_domain(q)
        u = self._u_from_q(q)
        _, vp, vpp, _, qp, qpp = self._state(u)
        c = self.price_center
        xpp = -qpp / (c * qp**3)
        ypp = vpp / qp**2 - vp * qpp / qp**3
        return (xpp, ypp)

    def holdings_grid(self, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        qs = np.asarray(qs, dtype=float)
        q_lo, q_hi = self.q_bounds
        u = self._grid_u_from_q(np.clip(qs, q_lo, q_hi))
        return u / self.price_center, self._grid_v(u)

    def pool_value_grid_warm(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        qs = np.asarray(qs, dtype=float)
        q_lo, q_hi = self.q_bounds
        if warm is not None and np.shape(warm) != qs.shape:
            warm = None
        u = self._grid_u_from_q(np.clip(qs, q_lo, q_hi), warm)
        # beyond the domain the pool holds the boundary portfolio
        return qs * (u / self.price_center) + self._grid_v(u), u

    def xprime_grid(self, qs: np.ndarray, warm=None) -> tuple[np.ndarray, object]:
        qs = np.asarray(qs, dtype=float)
        q_lo, q_hi = self.q_bounds
        u = self._grid_u_from_q(np.clip(qs, q_lo, q_hi), warm)
        _, _, qp = self._grid_state(u)
        inside = (qs > q_lo) & (qs < q_hi)
        xp = np.where(inside, (1.0 / self.price_center) / qp, 0.0)
        return xp, u

    def scaled_to_value(self, target_value: float, q: float) -> "StableSwap":
        # The invariant is 1-homogeneous in (u, v, D): scaling D scales the
        # holdings and value at fixed price.
        q = self._require_in_domain(q)
        target_value = _check_positive(target_value, "target_value")
        current = self.pool_value(q)
        return StableSwap(self.amplification, self.invariant_scale * target_value / current, self.price_center)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "A": self.amplification,
            "D": self.invariant_scale,
            "center": self.price_center,
        }


# ----- module-level operations ---------------------------------------------


def eval_holdings(curve: AmmCurve, q: float) -> Holdings:
    """Holdings (x(q), y(q)) of the pool at external price q."""
    return curve.holdings(q)


def pool_value(curve: AmmCurve, q: float) -> float:
    """Pool value q*x(q) + y(q) in units of asset y."""
    return curve.pool_value(q)


def dollar_pool_value(curve: AmmCurve, px: float, py: float) -> float:
    """Dollar pool value px*x(px/py) + py*y(px/py) = py * value(px/py)."""
    px = _check_price(px)
    py = _check_price(py)
    return py * curve.pool_value(px / py)


def holdings_derivative(curve: AmmCurve, q: float) -> tuple[float, float]:
    """(x'(q), y'(q)); zero once either holding is exhausted."""
    return curve.first_derivs(q)


def curvature(curve: AmmCurve, q: float) -> float:
    """Curve curvature at q, equal to -1 / ((1 + q**2)**1.5 * x'(q)).

    The magnitude matches the parametric curvature quotient
    (x'y'' - y'x'') / (x'**2 + y'**2)**1.5 of the holdings path; this form
    fixes the orientation so flatter (more amplified) curves give smaller
    positive values.
    """
    q = _check_price(q)
    if not curve.is_interior(q):
        raise DomainError(f"price {q!r} is not interior to the curve domain")
    xp, _ = curve.first_derivs(q)
    if xp == 0.0:
        raise DegenerateCurve(f"x'(q) vanishes at q={q!r}; curvature undefined")
    return -1.0 / ((1.0 + q * q) ** 1.5 * xp)


def equivalent_cpmm_liquidity(curve: AmmCurve, q: float) -> float:
    """Local constant-product liquidity -2 * q**1.5 * x'(q).

    Equals L identically for a Cpmm(L); zero wherever the position is out
    of range and the holdings are frozen.
    """
    q = _check_price(q)
    xp, _ = curve.first_derivs(q)
    return -2.0 * q**1.5 * xp


def solve_trade(curve: AmmCurve, q_from: float, q_to: float) -> tuple[float, float]:
    """Pool holdings change (delta_x, delta_y) moving the spot q_from -> q_to."""
    x0, y0 = curve.holdings(q_from)
    x1, y1 = curve.holdings(q_to)
    return (x1 - x0, y1 - y0)


_CURVE_KINDS = {"cpmm": Cpmm, "concentrated": ConcentratedCpmm, "stableswap": StableSwap}


def curve_from_dict(record: dict) -> AmmCurve:
    """Build a curve from its JSON record; unused keys are ignored per kind.

    Record shape: {"kind": "cpmm"|"concentrated"|"stableswap", "L":, "pL":,
    "pU":, "A":, "D":, "center":}.
    """
    if not isinstance(record, dict):
        raise InvalidParams(f"curve record must be an object, got {type(record).__name__}")
    kind = record.get("kind")
    if kind not in _CURVE_KINDS:
        raise InvalidParams(f"unknown curve kind {kind!r}; expected one of {sorted(_CURVE_KINDS)}")
    try:
        if kind == "cpmm":
            return Cpmm(record["L"])
        if kind == "concentrated":
            return ConcentratedCpmm(record["L"], record["pL"], record["pU"])
        return StableSwap(record["A"], record["D"], record.get("center", 1.0))
    except KeyError as exc:
        raise InvalidParams(f"curve record for kind {kind!r} is missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidParams, RangeError)):
            raise
        raise InvalidParams(f"bad curve record for kind {kind!r}: {exc}") from None


def curve_to_dict(curve: AmmCurve) -> dict:
    return curve.to_dict()
