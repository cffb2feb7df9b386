"""A two-token pool from creation to swaps, fees, liquidity and oracle moves."""

from silkswap import (
    PoolParams,
    PoolState,
    deposit,
    execute_swap,
    fraction_x,
    quote_swap,
    set_oracle_prices,
    to_snapshot,
)
from silkswap.engine import X_IN_Y_OUT, Y_IN_X_OUT
from silkswap.invariant import spot_price_x

params = PoolParams(a=100.0, gamma1=8, gamma2=8)

# balanced pool: D is just the total value, no solve needed
pool = PoolState.create(1000.0, 1000.0, params)
print("D at equilibrium:", pool.d)

# an unbalanced pool needs a root solve for D
pool = PoolState.create(2000.0, 1000.0, params)
print("D for 2000/1000:", pool.d, " fraction of X:", round(fraction_x(pool), 4))
print("price of X in Y:", spot_price_x(pool.x, pool.y, pool.d, pool.p, params))

# read-only quote, then commit it
q = quote_swap(pool, Y_IN_X_OUT, 10.0)
print(f"sell 10 Y -> {q.amount_out:.6f} X, impact {q.price_impact:.2e}, {q.iterations} Newton steps")
pool, _ = execute_swap(pool, Y_IN_X_OUT, 10.0)
print("after:", pool.x, pool.y, " residual", pool.residual())

# fees come off the input and stay in the pool
fee_pool = PoolState.create(1000.0, 1000.0, params, fee_rate=0.003)
p1, q1 = execute_swap(fee_pool, Y_IN_X_OUT, 100.0)
p2, q2 = execute_swap(p1, X_IN_Y_OUT, q1.amount_out)
print(f"round trip 100 Y -> {q1.amount_out:.4f} X -> {q2.amount_out:.4f} Y")
print("D grew from fees:", fee_pool.d, "->", p2.d)

# liquidity: doubling both balances doubles D
bigger = deposit(pool, pool.x, pool.y)
print("D ratio after doubling:", bigger.d / pool.d)

# oracle moves Y to 1.05 USD; D is re-solved under the new conversion factor
moved = set_oracle_prices(pool, 1.0, 1.05)
print("p =", moved.p, " D:", pool.d, "->", moved.d)

# pools persist as flat key=value text
print(to_snapshot(moved))
