"""Choosing gamma for a price-impact target, and a side-by-side with Curve v2."""

from silkswap import PoolParams
from silkswap.analysis import cmd_calibrate, cmd_compare_curve, max_relative_gap, Grid

# a 5% premium on Y should appear once X makes up about 80% of the pool
result = cmd_calibrate(a=400.0, target_impact=0.05, target_fraction=0.8)
print(f"gamma2 = {result.gamma}, crossing at fraction {result.crossing_fraction:.4f}")
for g, c in sorted(result.crossings.items())[:8]:
    print(f"  gamma2={g:2d} crosses at {c:.4f}")

# the same target on the Y-heavy side picks gamma1, mirrored
print("y side:", cmd_calibrate(400.0, 0.05, 0.8, side="y_side").gamma)

# Curve v2 leverage against ours with the figure defaults
rows = cmd_compare_curve(PoolParams(400.0, 10, 10), gamma_c=0.05, d=2000.0, grid=Grid(100, 1900, 19))
for r in rows[::3]:
    print(f"x={r['x']:6.0f}  y={r['y_silkswap']:9.3f}  v2={r['y_curvev2']:9.3f}")
print("max relative gap:", round(max_relative_gap(rows), 4))
print("near equilibrium:", round(max_relative_gap(cmd_compare_curve(grid=Grid(800, 1200, 9))), 6))
