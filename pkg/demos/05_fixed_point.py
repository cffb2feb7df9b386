"""The 18-decimal fixed-point path next to the float path."""

from silkswap import PoolParams, PoolState, SignedDecimal, quote_swap
from silkswap.engine import Y_IN_X_OUT
from silkswap.fixed_decimal import FixedPointOverflow, pow_uint, sqrt

D = SignedDecimal.parse
print(D("1") / D("3"), D("-1") / D("3"))   # truncation toward zero
print(sqrt(D("2")))                           # floor square root
print(pow_uint(D("0.5"), 8))
try:
    SignedDecimal(2**255) + SignedDecimal(2**255)
except FixedPointOverflow as exc:
    print("overflow:", exc)

# the same pool math runs on either number type
params = PoolParams(100.0, 75, 3)
for value in (1.0, 1e6, 1e11):
    f = PoolState.create(0.3 * value, 0.7 * value, params, backend="float")
    x = PoolState.create(0.3 * value, 0.7 * value, params, backend="fixed")
    qf = quote_swap(f, Y_IN_X_OUT, 0.01 * value)
    qx = quote_swap(x, Y_IN_X_OUT, 0.01 * value)
    gap = abs(float(qx.amount_out) - qf.amount_out) / qf.amount_out
    print(f"value {value:g}: D {x.d}  out {qx.amount_out}  rel gap {gap:.1e}")
