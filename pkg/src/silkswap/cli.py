"""``silkswap`` command line: figure data, benchmarks, calibration, pool tools.

Exit codes: 0 success, 1 validation error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import analysis
from .engine import (
    DIRECTIONS,
    PoolError,
    PoolState,
    SolverFailure,
    execute_swap,
    fraction_x,
    fraction_y,
    parse_key_values,
    quote_swap,
    to_snapshot,
)
from .invariant import OraclePrices, PoolParams, spot_price_x, spot_price_y
from .numeric import get_backend
from .solvers import InvalidBracket, RootConfig

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER = 0, 1, 2

METHODS = {"newton": "newton", "halley": "halley", "bisect": "bisection", "fallback": "fallback"}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--pool-file", help="flat key=value pool snapshot; flags override its values")
    c.add_argument("--x", type=float)
    c.add_argument("--y", type=float)
    c.add_argument("--px", type=float)
    c.add_argument("--py", type=float)
    c.add_argument("--a", type=float)
    c.add_argument("--gamma1", type=int)
    c.add_argument("--gamma2", type=int)
    c.add_argument("--fee", type=float)
    c.add_argument("--method", choices=sorted(METHODS))
    c.add_argument("--tol", type=float)
    c.add_argument("--grid", type=analysis.Grid.parse, help="start:stop:count")
    c.add_argument("--out", help="output file (default: standard output)")
    c.add_argument("--backend", choices=("float", "fixed"))
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="silkswap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("curve", parents=[common], help="figure data as CSV")
    p.add_argument("--quantity", choices=analysis.QUANTITIES, default="invariant_curve")
    p.add_argument("--model", choices=analysis.MODELS, default="silkswap")
    p.add_argument("--gamma-c", type=float, default=0.05)
    p.add_argument("--d", type=float)

    p = sub.add_parser("bench-d", parents=[common], help="D-solve iteration counts")
    p.add_argument("--pools", default="2000x1000,200000x100000", help="comma list of XxY balances")
    p.add_argument("--methods", default="newton,halley,bisect")

    p = sub.add_parser("bench-swap", parents=[common], help="swap-solve iteration counts")
    p.add_argument("--pool-sizes", default="1e3,1e6")
    p.add_argument("--swap-sizes", default="0,0.1,1,10,1e2,1e3,1e4,1e5,1e6")
    p.add_argument("--methods", default="bisect,halley,newton")

    p = sub.add_parser("calibrate", parents=[common], help="pick gamma for a price-impact target")
    p.add_argument("--target-impact", type=float, required=True)
    p.add_argument("--target-fraction", type=float, required=True)
    p.add_argument("--side", choices=(analysis.X_SIDE, analysis.Y_SIDE), default=analysis.X_SIDE)
    p.add_argument("--gamma-range", default="1:20", help="inclusive lo:hi")

    p = sub.add_parser("compare-curve", parents=[common], help="Silkswap vs Curve v2 curves")
    p.add_argument("--gamma-c", type=float, default=0.05)
    p.add_argument("--d", type=float, default=2000.0)

    p = sub.add_parser("swap", parents=[common], help="one-shot swap quote")
    p.add_argument("--direction", choices=DIRECTIONS, default=DIRECTIONS[0])
    p.add_argument("--amount", type=float, required=True)
    p.add_argument("--commit", action="store_true", help="write the post-swap pool back to --pool-file")

    p = sub.add_parser("pool", parents=[common], help="create or inspect a pool snapshot")
    p.add_argument("action", choices=("create", "inspect"))
    return parser


def _config(args) -> dict:
    """Pool-file values overridden by any flags given on the command line."""
    cfg = {}
    if args.pool_file:
        with open(args.pool_file) as fh:
            cfg.update(parse_key_values(fh.read()))
    flags = {
        "x": args.x, "y": args.y, "p_x": args.px, "p_y": args.py, "a": args.a,
        "gamma1": args.gamma1, "gamma2": args.gamma2, "fee_rate": args.fee,
    }
    for k, v in flags.items():
        if v is not None:
            cfg[k] = v
            if k in ("x", "y", "p_x", "p_y", "a", "gamma1", "gamma2"):
                cfg.pop("d", None)  # stale once balances or shape change
    return cfg


def _params(cfg: dict, a=100.0, g1=8, g2=8) -> PoolParams:
    return PoolParams(float(cfg.get("a", a)), int(cfg.get("gamma1", g1)), int(cfg.get("gamma2", g2)))


def _prices(cfg: dict) -> OraclePrices:
    return OraclePrices(float(cfg.get("p_x", 1.0)), float(cfg.get("p_y", 1.0)))


def _root_cfg(args, default: float = 1e-16) -> RootConfig:
    return RootConfig(args.tol if args.tol is not None else default)


def _pool(args, cfg: dict) -> PoolState:
    if "x" not in cfg or "y" not in cfg:
        raise UsageError("pool balances needed: --x and --y or --pool-file")
    backend = args.backend or "float"
    params, prices = _params(cfg), _prices(cfg)
    fee = float(cfg.get("fee_rate", 0.0))
    if "d" in cfg:
        b = get_backend(backend)
        return PoolState(b(cfg["x"]), b(cfg["y"]), b(cfg["d"]), params, prices, fee, backend)
    return PoolState.create(cfg["x"], cfg["y"], params, prices, fee, backend, _root_cfg(args))


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _methods(text: str) -> list[str]:
    out = []
    for m in text.split(","):
        m = m.strip()
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
        out.append(METHODS[m])
    return out


def cmd_curve(args) -> int:
    cfg = _config(args)
    if args.grid is None:
        raise UsageError("--grid start:stop:count is required")
    spec = analysis.SweepSpec(
        quantity=args.quantity,
        grid=args.grid,
        params=_params(cfg),
        prices=_prices(cfg),
        model=args.model,
        d=args.d if args.d is not None else (float(cfg["d"]) if "d" in cfg else None),
        x=float(cfg["x"]) if "x" in cfg else None,
        y=float(cfg["y"]) if "y" in cfg else None,
        gamma_c=args.gamma_c,
    )
    header, rows = analysis.sweep(spec)
    _emit(args, analysis.write_csv(header, rows))
    return EXIT_OK


def cmd_bench_d(args) -> int:
    cfg = _config(args)
    pools = []
    for item in args.pools.split(","):
        x, _, y = item.partition("x")
        pools.append((float(x), float(y)))
    rows = analysis.cmd_bench_d(
        pools, _params(cfg), _methods(args.methods), _root_cfg(args), _prices(cfg).p, args.backend or "fixed"
    )
    _emit(args, analysis.write_csv(analysis.BENCH_D_HEADER, rows))
    return EXIT_OK


def cmd_bench_swap(args) -> int:
    cfg = _config(args)
    rows = analysis.cmd_bench_swap(
        _floats(args.pool_sizes), _floats(args.swap_sizes), _params(cfg), _methods(args.methods),
        _root_cfg(args), args.backend or "fixed",
    )
    _emit(args, analysis.write_csv(analysis.BENCH_SWAP_HEADER, rows))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = _config(args)
    lo, _, hi = args.gamma_range.partition(":")
    result = analysis.cmd_calibrate(
        float(cfg.get("a", 100.0)), args.target_impact, args.target_fraction, args.side, range(int(lo), int(hi) + 1)
    )
    name = "gamma2" if args.side == analysis.X_SIDE else "gamma1"
    rows = [{"gamma": g, "crossing_fraction": c, "selected": g == result.gamma} for g, c in sorted(result.crossings.items())]
    text = f"# {name}={result.gamma} crossing_fraction={result.crossing_fraction:.18g}\n"
    _emit(args, text + analysis.write_csv(["gamma", "crossing_fraction", "selected"], rows))
    return EXIT_OK


def cmd_compare_curve(args) -> int:
    cfg = _config(args)
    grid = args.grid or analysis.Grid(0.05 * args.d, 0.95 * args.d, 37)
    rows = analysis.cmd_compare_curve(_params(cfg, 400.0, 10, 10), args.gamma_c, args.d, _prices(cfg).p, grid)
    _emit(args, analysis.write_csv(analysis.COMPARE_HEADER, rows))
    print(f"max relative gap: {analysis.max_relative_gap(rows):.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_swap(args) -> int:
    cfg = _config(args)
    pool = _pool(args, cfg)
    method = METHODS[args.method or "fallback"]
    rc = _root_cfg(args)
    if args.commit:
        if not args.pool_file:
            raise UsageError("--commit needs --pool-file")
        new_pool, q = execute_swap(pool, args.direction, args.amount, rc, method)
        with open(args.pool_file, "w") as fh:
            fh.write(to_snapshot(new_pool))
    else:
        q = quote_swap(pool, args.direction, args.amount, rc, method)
    fields = ("direction", "amount_in", "fee_amount", "amount_out", "spot_price_before",
              "spot_price_after", "price_impact", "iterations", "method_used")
    _emit(args, "".join(f"{k}={analysis._cell(getattr(q, k))}\n" for k in fields))
    return EXIT_OK


def cmd_pool(args) -> int:
    cfg = _config(args)
    pool = _pool(args, cfg)
    text = to_snapshot(pool)
    if args.action == "inspect":
        args_ = (pool.x, pool.y, pool.d, pool.p, pool.params)
        extra = {
            "fraction_x": fraction_x(pool),
            "fraction_y": fraction_y(pool),
            "price_x": spot_price_x(*args_),
            "price_y": spot_price_y(*args_),
            "residual": pool.residual(),
        }
        text += "".join(f"{k}={analysis._cell(v)}\n" for k, v in extra.items())
    _emit(args, text)
    return EXIT_OK


_COMMANDS = {
    "curve": cmd_curve,
    "bench-d": cmd_bench_d,
    "bench-swap": cmd_bench_swap,
    "calibrate": cmd_calibrate,
    "compare-curve": cmd_compare_curve,
    "swap": cmd_swap,
    "pool": cmd_pool,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except SolverFailure as exc:
        print(f"silkswap: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (UsageError, PoolError, InvalidBracket, ValueError, OSError) as exc:
        print(f"silkswap: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
