"""Iteration counts of Newton, Halley and bisection for D and for swaps."""

from silkswap import PoolParams
from silkswap.analysis import BENCH_D_HEADER, BENCH_SWAP_HEADER, cmd_bench_d, cmd_bench_swap, write_csv

params = PoolParams(100.0, 8, 8)

# D from two starting points (twice the arithmetic / geometric mean) on two
# pool sizes; bisection brackets [2GM, 2AM] so its count grows with the pool
rows = cmd_bench_d([(2000, 1000), (200000, 100000)], params)
print(write_csv([h for h in BENCH_D_HEADER if h != "wall_time_s"], rows))

# swaps at equilibrium; the bracket is [0, x0/D] = [0, 0.5] whatever the pool,
# so bisection always takes 52 halvings at 1e-16
rows = cmd_bench_swap([1e3, 1e6], params=params)
print(write_csv([h for h in BENCH_SWAP_HEADER if h != "wall_time_s"], rows))

# the float path stops on stagnation instead and can differ by a step
rows = cmd_bench_swap([1e3], [1, 100, 1e4], params=params, methods=("newton",), backend="float")
for r in rows:
    print("float", r["swap_size"], r["iterations"])
