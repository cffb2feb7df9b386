"""Curve sweeps, solver benchmarks, parameter calibration and Curve v2 comparison.

Everything here produces plain rows (lists of dicts) that :func:`write_csv`
turns into byte-stable CSV; the CLI is a thin layer over these functions.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import solvers
from .engine import (
    PoolState,
    SolverFailure,
    PoolError,
    Y_IN_X_OUT,
    compute_d,
    quote_swap,
)
from .invariant import (
    OraclePrices,
    PoolParams,
    chi,
    cpmm_y,
    csmm_y,
    curve_v2_chi,
    curve_v2_dscaled_dx,
    curve_v2_dscaled_dz,
    curve_v2_scaled_f,
    dscaled_dx,
    dscaled_dz,
    invariant_f,
    scaled_f,
)
from .numeric import get_backend
from .solvers import RootConfig

QUANTITIES = ("invariant_curve", "price_curve", "chi_surface", "f_of_d", "f_of_x", "price_vs_fraction")
MODELS = ("silkswap", "curve_v2")
X_SIDE = "x_side"
Y_SIDE = "y_side"


class NoCrossing(ValueError):
    """No gamma in the searched range reaches the target price impact."""


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("grid count must be at least 2")
        if not self.start < self.stop:
            raise ValueError("grid start must be below stop")

    @classmethod
    def parse(cls, text: str) -> Grid:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:count, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    grid: Grid
    params: PoolParams
    prices: OraclePrices = OraclePrices(1.0, 1.0)
    model: str = "silkswap"
    d: Optional[float] = None
    x: Optional[float] = None
    y: Optional[float] = None
    gamma_c: float = 0.05

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.model == "curve_v2" and self.quantity in ("f_of_d", "price_vs_fraction"):
            raise ValueError(f"{self.quantity} is only available for the silkswap model")

    def resolved_d(self) -> float:
        if self.d is not None:
            return self.d
        if self.x is not None and self.y is not None:
            res = compute_d(float(self.x), float(self.y), self.prices.p, self.params, "fallback")
            return res.root
        raise ValueError(f"{self.quantity} needs D or pool balances x and y")


# scaled curve helpers (float path)


def _model_fns(model: str, params: PoolParams, gamma_c: float):
    if model == "silkswap":
        return (
            lambda xs, zs: scaled_f(xs, zs, params),
            lambda xs, zs: dscaled_dx(xs, zs, params),
            lambda xs, zs: dscaled_dz(xs, zs, params),
        )
    return (
        lambda xs, zs: curve_v2_scaled_f(xs, zs, params.a, gamma_c),
        lambda xs, zs: curve_v2_dscaled_dx(xs, zs, params.a, gamma_c),
        lambda xs, zs: curve_v2_dscaled_dz(xs, zs, params.a, gamma_c),
    )


def solve_curve_z(xs: float, params: PoolParams, cfg: RootConfig = RootConfig(1e-15), model: str = "silkswap", gamma_c: float = 0.05):
    """On-curve scaled ``z`` for scaled ``x``, bracketed by the CSMM and CPMM curves."""
    f2, dfx, dfz = _model_fns(model, params, gamma_c)
    lo, hi = max(1.0 - xs, 0.0), 0.25 / xs

    def f(zs):
        try:
            return f2(xs, zs)
        except OverflowError:
            return 1.0

    if model == "silkswap":
        return solvers.solve_with_fallback(f, lambda zs: dfz(xs, zs), hi, (lo, hi), cfg)
    return solvers.bisection(f, lo, hi, cfg)


def scaled_price_y(xs, zs, p, params: PoolParams, model: str = "silkswap", gamma_c: float = 0.05):
    """``|dx/dy|`` at a scaled curve point."""
    _, dfx, dfz = _model_fns(model, params, gamma_c)
    return p * dfz(xs, zs) / dfx(xs, zs)


def fraction_point(fraction_x: float, params: PoolParams, cfg: RootConfig = RootConfig(1e-15)):
    """Scaled curve point whose X fraction ``x/(x + p*y)`` is ``fraction_x``."""
    if not 0 < fraction_x < 1:
        raise ValueError("fraction must be in (0, 1)")
    res = compute_d(fraction_x, 1.0 - fraction_x, 1.0, params, "fallback", cfg)
    if not res.converged:
        raise SolverFailure("could not place the fraction on the curve", res)
    return fraction_x / res.root, (1.0 - fraction_x) / res.root


def price_y_at_fraction(fraction_x: float, params: PoolParams, p: float = 1.0) -> float:
    xs, zs = fraction_point(fraction_x, params)
    return scaled_price_y(xs, zs, p, params)


# sweeps


def sweep(spec: SweepSpec) -> tuple[list[str], list[dict]]:
    """Rows for one figure-style sweep; solver failures become per-row status."""
    fn = _SWEEPS[spec.quantity]
    return fn(spec)


def _curve_rows(spec: SweepSpec, with_price: bool):
    d = spec.resolved_d()
    p = spec.prices.p
    header = ["x", "y", "y_cpmm", "y_csmm"] + (["price_y", "price_x"] if with_price else []) + ["status"]
    rows = []
    for x in spec.grid.values():
        x = float(x)
        row = {"x": x, "y_cpmm": cpmm_y(x, d, p) if x > 0 else None}
        row["y_csmm"] = csmm_y(x, d, p) if 0 < x < d else None
        try:
            res = solve_curve_z(x / d, spec.params, model=spec.model, gamma_c=spec.gamma_c)
            if not res.converged:
                raise SolverFailure(res.status, res)
            zs = res.root
            row["y"] = zs * d / p
            if with_price:
                py_ = scaled_price_y(x / d, zs, p, spec.params, spec.model, spec.gamma_c)
                row["price_y"], row["price_x"] = py_, 1.0 / py_
            row["status"] = "ok"
        except (SolverFailure, solvers.InvalidBracket, ValueError, ZeroDivisionError) as exc:
            row["status"] = f"error: {exc}"
        rows.append(row)
    return header, rows


def _sweep_invariant_curve(spec):
    return _curve_rows(spec, False)


def _sweep_price_curve(spec):
    return _curve_rows(spec, True)


def _sweep_chi_surface(spec):
    d = spec.resolved_d()
    p = spec.prices.p
    rows = []
    for x in spec.grid.values():
        for y in spec.grid.values():
            x, y = float(x), float(y)
            if spec.model == "silkswap":
                value = chi(x, y, d, p, spec.params)
            else:
                value = curve_v2_chi(x / d, p * y / d, spec.gamma_c)
            rows.append({"x": x, "y": y, "chi": value})
    return ["x", "y", "chi"], rows


def _sweep_f_of_d(spec):
    if spec.x is None or spec.y is None:
        raise ValueError("f_of_d needs pool balances x and y")
    p = spec.prices.p
    rows = [{"d": float(d), "f": invariant_f(spec.x, spec.y, float(d), p, spec.params)} for d in spec.grid.values()]
    return ["d", "f"], rows


def _sweep_f_of_x(spec):
    if spec.y is None or spec.d is None:
        raise ValueError("f_of_x needs y and D")
    zs = spec.prices.p * spec.y / spec.d
    f2, _, _ = _model_fns(spec.model, spec.params, spec.gamma_c)
    rows = []
    for xs in spec.grid.values():
        try:
            value = f2(float(xs), zs)
        except OverflowError:
            value = float("inf")
        rows.append({"xs": float(xs), "zs": zs, "f": value})
    return ["xs", "zs", "f"], rows


def _sweep_price_vs_fraction(spec):
    p = spec.prices.p
    rows = []
    for fr in spec.grid.values():
        row = {"fraction_x": float(fr)}
        try:
            xs, zs = fraction_point(float(fr), spec.params)
            row.update(xs=xs, zs=zs, price_y=scaled_price_y(xs, zs, p, spec.params), status="ok")
        except (SolverFailure, ValueError) as exc:
            row["status"] = f"error: {exc}"
        rows.append(row)
    return ["fraction_x", "xs", "zs", "price_y", "status"], rows


_SWEEPS = {
    "invariant_curve": _sweep_invariant_curve,
    "price_curve": _sweep_price_curve,
    "chi_surface": _sweep_chi_surface,
    "f_of_d": _sweep_f_of_d,
    "f_of_x": _sweep_f_of_x,
    "price_vs_fraction": _sweep_price_vs_fraction,
}


# benchmarks


BENCH_D_HEADER = ["pool_x", "pool_y", "starting_point", "method", "iterations", "status", "wall_time_s"]
BENCH_SWAP_HEADER = ["pool_size", "swap_size", "method", "iterations", "status", "wall_time_s"]


def cmd_bench_d(
    pool_sizes: Iterable[tuple[float, float]] = ((2000, 1000), (200000, 100000)),
    params: PoolParams = PoolParams(100, 8, 8),
    methods: Sequence[str] = ("newton", "halley", "bisection"),
    cfg: RootConfig = RootConfig(),
    p: float = 1.0,
    backend: str = "fixed",
    starts: Sequence[str] = ("2am", "2gm"),
) -> list[dict]:
    """D-solve iteration counts per pool, starting point and method.

    The default backend is the 18-decimal fixed-point path: an absolute
    tolerance of 1e-16 on D is below float resolution for realistic pools.
    """
    b = get_backend(backend)
    rows = []
    for x, y in pool_sizes:
        xb, yb, pb = b(x), b(y), b(p)
        for method in methods:
            for start in (starts if method in ("newton", "halley") else ("/",)):
                t0 = time.perf_counter()
                res = compute_d(xb, yb, pb, params, method, cfg, start if start != "/" else "2am")
                dt = time.perf_counter() - t0
                rows.append(
                    {
                        "pool_x": x,
                        "pool_y": y,
                        "starting_point": start.upper() if start != "/" else "/",
                        "method": res.method_used,
                        "iterations": res.iterations,
                        "status": res.status,
                        "wall_time_s": dt,
                        "root": res.root,
                    }
                )
    return rows


def cmd_bench_swap(
    pool_sizes: Iterable[float] = (1e3, 1e6),
    swap_sizes: Iterable[float] = (0, 0.1, 1, 10, 1e2, 1e3, 1e4, 1e5, 1e6),
    params: PoolParams = PoolParams(100, 8, 8),
    methods: Sequence[str] = ("bisection", "halley", "newton"),
    cfg: RootConfig = RootConfig(),
    backend: str = "fixed",
) -> list[dict]:
    """Swap-solve iteration counts for equilibrium pools selling Y for X."""
    rows = []
    swap_sizes = list(swap_sizes)
    for size in pool_sizes:
        pool = PoolState.create(size, size, params, backend=backend, cfg=cfg)
        for method in methods:
            for amount in swap_sizes:
                t0 = time.perf_counter()
                try:
                    q = quote_swap(pool, Y_IN_X_OUT, amount, cfg, method)
                    iterations, status = q.iterations, solvers.CONVERGED
                except SolverFailure as exc:
                    iterations = exc.result.iterations if exc.result else None
                    status = exc.result.status if exc.result else "failed"
                except PoolError as exc:
                    iterations, status = None, f"error: {exc}"
                dt = time.perf_counter() - t0
                rows.append(
                    {
                        "pool_size": size,
                        "swap_size": amount,
                        "method": "bisection" if method == "bisect" else method,
                        "iterations": iterations,
                        "status": status,
                        "wall_time_s": dt,
                    }
                )
    return rows


# calibration


@dataclass(frozen=True)
class Calibration:
    gamma: int
    crossing_fraction: float
    target_fraction: float
    side: str
    crossings: dict = field(default_factory=dict)


def impact_at_fraction(fraction: float, params: PoolParams, side: str = X_SIDE) -> float:
    """Relative premium of the scarce token's price over its peg at ``fraction``.

    ``x_side``: fraction is ``x/(x + p*y)`` and the premium is on Y's price.
    ``y_side``: fraction is ``p*y/(x + p*y)`` and the premium is on X's price.
    The value does not depend on ``p``.
    """
    if side == X_SIDE:
        xs, zs = fraction_point(fraction, params)
        return dscaled_dz(xs, zs, params) / dscaled_dx(xs, zs, params) - 1.0
    if side == Y_SIDE:
        xs, zs = fraction_point(1.0 - fraction, params)
        return dscaled_dx(xs, zs, params) / dscaled_dz(xs, zs, params) - 1.0
    raise ValueError(f"side must be {X_SIDE!r} or {Y_SIDE!r}")


def crossing_fraction(params: PoolParams, target_impact: float, side: str = X_SIDE, upper: float = 0.999999, tol: float = 1e-12) -> Optional[float]:
    """Fraction (above 0.5) where the price premium reaches ``target_impact``, or None."""

    def g(fr):
        return impact_at_fraction(fr, params, side) - target_impact

    if g(upper) < 0:
        return None
    res = solvers.bisection(g, 0.5, upper, RootConfig(tol, 200))
    return float(res.root)


def cmd_calibrate(
    a: float,
    target_impact: float,
    target_fraction: float,
    side: str = X_SIDE,
    gammas: Iterable[int] = range(1, 21),
    other_gamma: int = 1,
) -> Calibration:
    """Pick the integer gamma whose premium crossing lies nearest ``target_fraction``.

    ``x_side`` calibrates gamma2 (pool heavy in X), ``y_side`` gamma1.  The
    other exponent does not influence that side of the curve; ``other_gamma``
    only fills the parameter slot.
    """
    if not target_impact > 0:
        raise ValueError("target_impact must be positive")
    if not 0.5 < target_fraction < 1:
        raise ValueError("target_fraction must be in (0.5, 1)")
    if side not in (X_SIDE, Y_SIDE):
        raise ValueError(f"side must be {X_SIDE!r} or {Y_SIDE!r}")
    crossings = {}
    for g in gammas:
        params = PoolParams(a, other_gamma, g) if side == X_SIDE else PoolParams(a, g, other_gamma)
        c = crossing_fraction(params, target_impact, side)
        if c is not None:
            crossings[g] = c
    if not crossings:
        raise NoCrossing("no gamma in range reaches the target price impact")
    best = min(crossings, key=lambda g: (abs(crossings[g] - target_fraction), g))
    return Calibration(best, crossings[best], target_fraction, side, crossings)


# Curve v2 comparison


COMPARE_HEADER = ["x", "y_silkswap", "y_curvev2", "price_silkswap", "price_curvev2", "status"]


def cmd_compare_curve(
    params: PoolParams = PoolParams(400, 10, 10),
    gamma_c: float = 0.05,
    d: float = 2000.0,
    p: float = 1.0,
    grid: Grid = Grid(100.0, 1900.0, 37),
) -> list[dict]:
    """Paired Silkswap and Curve v2 curve points and Y prices over an x grid."""
    rows = []
    for x in grid.values():
        x = float(x)
        xs = x / d
        row = {"x": x}
        try:
            for model, key in (("silkswap", "silkswap"), ("curve_v2", "curvev2")):
                res = solve_curve_z(xs, params, model=model, gamma_c=gamma_c)
                if not res.converged:
                    raise SolverFailure(res.status, res)
                row[f"y_{key}"] = res.root * d / p
                row[f"price_{key}"] = scaled_price_y(xs, res.root, p, params, model, gamma_c)
            row["status"] = "ok"
        except (SolverFailure, solvers.InvalidBracket, ValueError) as exc:
            row["status"] = f"error: {exc}"
        rows.append(row)
    return rows


def max_relative_gap(rows: list[dict]) -> float:
    gaps = [abs(r["y_silkswap"] - r["y_curvev2"]) / r["y_silkswap"] for r in rows if r.get("status") == "ok"]
    return max(gaps) if gaps else float("nan")


# output


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.18g}"
    if hasattr(v, "magnitude"):  # SignedDecimal
        return str(v)
    return str(v)


def write_csv(header: Sequence[str], rows: Iterable[dict], out: Optional[io.TextIOBase] = None) -> str:
    """Write rows as CSV with fixed float formatting and ``\\n`` line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in header])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
