"""Silkswap asymmetric hybrid-function AMM: invariant math, solvers, pool engine."""

from .engine import (
    X_IN_Y_OUT,
    Y_IN_X_OUT,
    InsufficientBalance,
    OutputExhausted,
    PoolError,
    PoolState,
    SolverFailure,
    SwapQuote,
    compute_d,
    deposit,
    execute_swap,
    fraction_x,
    fraction_y,
    from_snapshot,
    quote_swap,
    set_oracle_prices,
    to_snapshot,
    withdraw,
)
from .fixed_decimal import FixedPointOverflow, SignedDecimal
from .invariant import OffCurveError, OraclePrices, PoolParams
from .solvers import RootConfig, RootResult

__all__ = [
    "X_IN_Y_OUT",
    "Y_IN_X_OUT",
    "FixedPointOverflow",
    "InsufficientBalance",
    "OffCurveError",
    "OraclePrices",
    "OutputExhausted",
    "PoolError",
    "PoolParams",
    "PoolState",
    "RootConfig",
    "RootResult",
    "SignedDecimal",
    "SolverFailure",
    "SwapQuote",
    "compute_d",
    "deposit",
    "execute_swap",
    "fraction_x",
    "fraction_y",
    "from_snapshot",
    "quote_swap",
    "set_oracle_prices",
    "to_snapshot",
    "withdraw",
]

__version__ = "0.1.0"
