"""Where the curve sits between constant product and constant sum, and why gamma matters."""

import numpy as np

from silkswap import PoolParams
from silkswap.analysis import Grid, SweepSpec, sweep, price_y_at_fraction, solve_curve_z

D = 2000.0

# asymmetric exponents: flat near equilibrium, steep on one side
spec = SweepSpec("price_curve", Grid(200, 1800, 9), PoolParams(10.0, 2, 8), d=D)
_, rows = sweep(spec)
print(f"{'x':>7} {'y':>9} {'y_csmm':>9} {'y_cpmm':>9} {'price_y':>8}")
for r in rows:
    print(f"{r['x']:7.0f} {r['y']:9.2f} {r['y_csmm']:9.2f} {r['y_cpmm']:9.2f} {r['price_y']:8.4f}")

# amplification moves the curve from one bound to the other
for a in (1e-6, 1.0, 100.0, 1e6):
    zs = solve_curve_z(0.3, PoolParams(a, 2, 2)).root
    print(f"A={a:g}: y at x=0.3D is {zs * D:.3f}  (sum line {0.7 * D:.0f}, product {0.25 / 0.3 * D:.1f})")

# price of Y as the pool fills with X; larger gamma2 makes it climb sooner
for g2 in (2, 8, 20):
    prices = [price_y_at_fraction(f, PoolParams(400.0, 1, g2)) for f in (0.6, 0.75, 0.9)]
    print(f"gamma2={g2:2d}:", np.round(prices, 4))

# odd gamma1 gives the swap equation a second zero at negative x
_, rows = sweep(SweepSpec("f_of_x", Grid(-1.0, 1.2, 12), PoolParams(5.0, 3, 2), y=600.0, d=D))
print("scaled F along x:", np.round([r["f"] for r in rows], 3))
