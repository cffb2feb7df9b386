"""Two-token Silkswap pool: D management, swaps with input-side fees, liquidity.

Pools are immutable values; every operation returns a new :class:`PoolState`.
Balances and D are stored in the numeric type of the pool's backend
(``float`` or :class:`~silkswap.fixed_decimal.SignedDecimal`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from . import solvers
from .fixed_decimal import SignedDecimal
from .invariant import (
    OraclePrices,
    PoolParams,
    d2f_dD2,
    d2scaled_dx2,
    d2scaled_dz2,
    df_dD,
    dscaled_dx,
    dscaled_dz,
    invariant_f,
    scaled_f,
)
from .numeric import Backend, get_backend, like
from .solvers import RootConfig, RootResult

Y_IN_X_OUT = "y_in_x_out"
X_IN_Y_OUT = "x_in_y_out"
DIRECTIONS = (Y_IN_X_OUT, X_IN_Y_OUT)

SNAPSHOT_KEYS = ("x", "y", "d", "p_x", "p_y", "a", "gamma1", "gamma2", "fee_rate")


class PoolError(ValueError):
    pass


class InsufficientBalance(PoolError):
    pass


class OutputExhausted(PoolError):
    """The trade would drain the output token."""


class SolverFailure(RuntimeError):
    def __init__(self, message: str, result: Optional[RootResult] = None):
        super().__init__(message)
        self.result = result


def _sqrt(v):
    if isinstance(v, SignedDecimal):
        return v.sqrt()
    if isinstance(v, float):
        return math.sqrt(v)
    return v ** 0.5


def _method_name(method: str) -> str:
    return {"bisect": solvers.BISECTION, "fallback": solvers.NEWTON}.get(method, method)


def d_bounds(x, y, p):
    """Bracket ``(2*GM, 2*AM)`` of x and p*y, which always contains D."""
    z = p * y
    return _sqrt(x * z) * 2, x + z


def compute_d(x, y, p, params: PoolParams, method: str = "newton", cfg: RootConfig = RootConfig(), start: str = "2am") -> RootResult:
    """Solve the invariant for D with the balances fixed.

    The tolerance is absolute, in the units of ``x``.  Newton and Halley start
    from 2AM (or 2GM with ``start="2gm"``); bisection searches [2GM, 2AM].
    An equilibrium pool (``x == p*y``) returns ``x + p*y`` without iterating.
    """
    if not (x > 0 and y > 0):
        raise PoolError("balances must be positive")
    z = p * y
    if x == z:
        return RootResult(x + z, 0, solvers.CONVERGED, _method_name(method), x * 0)
    gm2, am2 = d_bounds(x, y, p)
    if start not in ("2am", "2gm"):
        raise ValueError(f"start must be '2am' or '2gm', got {start!r}")
    d0 = am2 if start == "2am" else gm2

    def f(d):
        return invariant_f(x, y, d, p, params)

    def df(d):
        return df_dD(x, y, d, p, params)

    def d2f(d):
        return d2f_dD2(x, y, d, p, params)

    return solvers.run(method, f, df, d0, (gm2, am2), cfg, d2f=d2f)


def _scaled_equation(fixed_value, solve_for_x: bool, params: PoolParams):
    """f, f', f'' of the scaled invariant along one coordinate.

    Overflow of the power term can only happen where 4*xs*zs > 1, and there
    the scaled invariant is strictly positive, so the value is replaced by 1
    (only its sign matters to bisection).  Newton sees the overflow from the
    derivative and reports divergence.
    """
    if solve_for_x:
        def pt(v):
            return v, fixed_value
        d1, d2 = dscaled_dx, d2scaled_dx2
    else:
        def pt(v):
            return fixed_value, v
        d1, d2 = dscaled_dz, d2scaled_dz2

    def f(v):
        try:
            return scaled_f(*pt(v), params)
        except OverflowError:
            return like(v, 1)

    def df(v):
        return d1(*pt(v), params)

    def d2f(v):
        return d2(*pt(v), params)

    return f, df, d2f


@dataclass(frozen=True)
class SwapQuote:
    direction: str
    amount_in: object
    fee_amount: object
    amount_out: object
    spot_price_before: object
    spot_price_after: object
    price_impact: object
    iterations: int
    method_used: str
    scaled_before: object = None
    scaled_after: object = None


@dataclass(frozen=True)
class PoolState:
    x: object
    y: object
    d: object
    params: PoolParams
    prices: OraclePrices
    fee_rate: float = 0.0
    backend: str = "float"

    def __post_init__(self):
        if not (self.x > 0 and self.y > 0 and self.d > 0):
            raise PoolError("balances and D must be positive")
        if not (0 <= self.fee_rate < 1):
            raise PoolError(f"fee_rate must be in [0, 1), got {self.fee_rate}")

    @classmethod
    def create(
        cls,
        x,
        y,
        params: PoolParams,
        prices: OraclePrices = OraclePrices(1.0, 1.0),
        fee_rate: float = 0.0,
        backend: str | Backend = "float",
        cfg: RootConfig = RootConfig(),
    ) -> PoolState:
        """Build a pool from balances, solving for D."""
        b = get_backend(backend)
        xb, yb = b(x), b(y)
        if not (xb > 0 and yb > 0):
            raise PoolError("balances must be positive")
        p = b(prices.p_y) / b(prices.p_x)
        d = solve_d(xb, yb, p, params, cfg)
        return cls(xb, yb, d, params, prices, fee_rate, b.name)

    @property
    def num(self) -> Backend:
        return get_backend(self.backend)

    @property
    def p(self):
        b = self.num
        return b(self.prices.p_y) / b(self.prices.p_x)

    @property
    def z(self):
        return self.p * self.y

    @property
    def scaled(self):
        return self.x / self.d, self.z / self.d

    def residual(self):
        """Invariant value divided by D**2 (zero on the curve)."""
        return invariant_f(self.x, self.y, self.d, self.p, self.params) / (self.d * self.d)

    def with_backend(self, backend: str | Backend, cfg: RootConfig = RootConfig()) -> PoolState:
        b = get_backend(backend)
        return PoolState.create(b(self.x), b(self.y), self.params, self.prices, self.fee_rate, b, cfg)


def solve_d(x, y, p, params: PoolParams, cfg: RootConfig = RootConfig()):
    res = compute_d(x, y, p, params, "fallback", cfg)
    if not res.converged:
        raise SolverFailure("could not solve for D", res)
    return res.root


def _input_price(direction: str, xs, zs, p, params: PoolParams):
    """Spot price of the input token in units of the output token."""
    gx, gz = dscaled_dx(xs, zs, params), dscaled_dz(xs, zs, params)
    if direction == Y_IN_X_OUT:
        return p * gz / gx
    return gx / gz / p


def quote_swap(
    pool: PoolState,
    direction: str,
    amount_in,
    cfg: RootConfig = RootConfig(),
    method: str = "fallback",
    x0=None,
) -> SwapQuote:
    """Read-only quote for depositing ``amount_in`` of the input token.

    The fee is taken from the input; the net amount moves the input-side
    scaled balance and the output side is solved on the curve with D fixed.
    ``method`` picks the solver (``fallback`` = Newton with bisection backup).
    ``x0`` overrides the scaled starting guess of the open methods, which
    defaults to the pre-trade scaled balance of the output token.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    b = pool.num
    amt = b(amount_in)
    if amt < 0:
        raise PoolError("amount_in must be non-negative")
    p, d, params = pool.p, pool.d, pool.params
    fee = amt * b(pool.fee_rate)
    net = amt - fee
    xs0, zs0 = pool.scaled
    before = _input_price(direction, xs0, zs0, p, params)
    zero = amt * 0
    if amt == 0:
        return SwapQuote(direction, amt, zero, zero, before, before, zero, 0, _method_name(method), (xs0, zs0), (xs0, zs0))

    if direction == Y_IN_X_OUT:
        fixed_side = p * (pool.y + net) / d
        start = xs0
    else:
        fixed_side = (pool.x + net) / d
        start = zs0
    f, df, d2f = _scaled_equation(fixed_side, direction == Y_IN_X_OUT, params)
    if f(zero) >= 0:
        raise OutputExhausted("trade would drain the output token")

    if f(start) <= 0:
        # net input below the resolution of the pool's own curve residual
        res = RootResult(start, 0, solvers.CONVERGED, _method_name(method), f(start))
    else:
        guess = start if x0 is None else b(x0)
        res = solvers.run(method, f, df, guess, (zero, start), cfg, d2f=d2f)
    if not res.converged:
        raise SolverFailure(f"swap solve ended with status {res.status}", res)
    root = res.root
    # f(0) < 0 < f(start) was established above, so the wanted root is in
    # (0, start); anything else is the other zero of an odd-gamma curve
    if not root > 0:
        raise SolverFailure("swap solve converged to a non-positive root", res)
    if root > start:
        if method == "fallback" or root - start > like(root, cfg.tolerance) * 4:
            raise SolverFailure("swap root outside its bracket", res)
        root = start  # open methods may stop a hair above an exact root

    if direction == Y_IN_X_OUT:
        out = d * (start - root)
        after_pt = (root, fixed_side)
        balance = pool.x
    else:
        out = d * (start - root) / p
        after_pt = (fixed_side, root)
        balance = pool.y
    if out >= balance:
        raise OutputExhausted("trade would drain the output token")
    after = _input_price(direction, *after_pt, p, params)
    impact = abs(after - before) / before
    return SwapQuote(direction, amt, fee, out, before, after, impact, res.iterations, res.method_used, (xs0, zs0), after_pt)


def execute_swap(
    pool: PoolState,
    direction: str,
    amount_in,
    cfg: RootConfig = RootConfig(),
    method: str = "fallback",
) -> tuple[PoolState, SwapQuote]:
    """Commit a swap.  The whole input, fee included, stays in the pool.

    With a non-zero fee the retained fee lifts the balances off the curve, so
    D is re-solved for the post-trade balances.
    """
    q = quote_swap(pool, direction, amount_in, cfg, method)
    if direction == Y_IN_X_OUT:
        x, y = pool.x - q.amount_out, pool.y + q.amount_in
    else:
        x, y = pool.x + q.amount_in, pool.y - q.amount_out
    d = pool.d
    if q.fee_amount > 0:
        d = solve_d(x, y, pool.p, pool.params, cfg)
    return replace(pool, x=x, y=y, d=d), q


def deposit(pool: PoolState, dx, dy, cfg: RootConfig = RootConfig()) -> PoolState:
    b = pool.num
    dx, dy = b(dx), b(dy)
    if dx < 0 or dy < 0:
        raise PoolError("deposit amounts must be non-negative")
    x, y = pool.x + dx, pool.y + dy
    return replace(pool, x=x, y=y, d=solve_d(x, y, pool.p, pool.params, cfg))


def withdraw(pool: PoolState, dx, dy, cfg: RootConfig = RootConfig()) -> PoolState:
    b = pool.num
    dx, dy = b(dx), b(dy)
    if dx < 0 or dy < 0:
        raise PoolError("withdraw amounts must be non-negative")
    x, y = pool.x - dx, pool.y - dy
    if not (x > 0 and y > 0):
        raise InsufficientBalance("withdrawal would empty the pool")
    return replace(pool, x=x, y=y, d=solve_d(x, y, pool.p, pool.params, cfg))


def set_oracle_prices(pool: PoolState, p_x, p_y, cfg: RootConfig = RootConfig()) -> PoolState:
    """Update the oracle prices and re-solve D so the pool stays on its curve."""
    prices = OraclePrices(p_x, p_y)
    if prices == pool.prices:
        return pool
    b = pool.num
    p = b(prices.p_y) / b(prices.p_x)
    return replace(pool, prices=prices, d=solve_d(pool.x, pool.y, p, pool.params, cfg))


def fraction_x(pool: PoolState):
    return pool.x / (pool.x + pool.z)


def fraction_y(pool: PoolState):
    return 1 - fraction_x(pool)


# snapshots


def _fmt(v) -> str:
    # floats go through their shortest repr, so 1.05 is written as 1.05
    return str(v if isinstance(v, SignedDecimal) else SignedDecimal.coerce(v))


def to_snapshot(pool: PoolState) -> str:
    """Flat ``key=value`` text; amounts as 18-decimal strings."""
    values = {
        "x": _fmt(pool.x),
        "y": _fmt(pool.y),
        "d": _fmt(pool.d),
        "p_x": _fmt(pool.prices.p_x),
        "p_y": _fmt(pool.prices.p_y),
        "a": _fmt(pool.params.a),
        "gamma1": str(pool.params.gamma1),
        "gamma2": str(pool.params.gamma2),
        "fee_rate": _fmt(pool.fee_rate),
    }
    return "".join(f"{k}={values[k]}\n" for k in SNAPSHOT_KEYS)


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {n}: expected key=value")
        out[key.strip()] = value.strip()
    return out


def from_snapshot(text: str, backend: str = "float", cfg: RootConfig = RootConfig()) -> PoolState:
    """Load a pool; D is solved when the ``d`` key is missing."""
    kv = parse_key_values(text)
    missing = [k for k in ("x", "y", "a", "gamma1", "gamma2") if k not in kv]
    if missing:
        raise ValueError(f"snapshot missing keys: {', '.join(missing)}")
    b = get_backend(backend)
    params = PoolParams(float(kv["a"]), int(kv["gamma1"]), int(kv["gamma2"]))
    prices = OraclePrices(float(kv.get("p_x", 1)), float(kv.get("p_y", 1)))
    fee = float(kv.get("fee_rate", 0))
    if "d" not in kv:
        return PoolState.create(kv["x"], kv["y"], params, prices, fee, b, cfg)
    return PoolState(b(kv["x"]), b(kv["y"]), b(kv["d"]), params, prices, fee, b.name)
