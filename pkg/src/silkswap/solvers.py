"""Scalar root finding: Newton, Halley, bisection and Newton-with-bisection fallback.

Iteration semantics (these are what the benchmark tables count):

* Newton/Halley compute the proposed correction at the current iterate and stop
  *without applying it* once ``|correction| <= tolerance``.  ``iterations`` is
  the number of corrections actually applied, so an exact starting point costs
  zero iterations.
* Bisection halves the bracket until the midpoint is within ``tolerance`` of
  every point in it (half-width <= tolerance).  ``iterations`` is the number
  of halvings, ``ceil(log2(width / (2 * tolerance)))`` for a bracket without
  an exact root hit.

Failures of the open methods are reported through ``RootResult.status`` rather
than raised, so callers can fall back to bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .numeric import is_finite, like, sign

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
DIVERGED = "diverged"
LEFT_DOMAIN = "left_domain"

NEWTON = "newton"
HALLEY = "halley"
BISECTION = "bisection"
NEWTON_THEN_BISECTION = "newton_then_bisection"

POSITIVE = (0, None)


class InvalidBracket(ValueError):
    """The bisection bracket does not enclose a sign change."""


@dataclass(frozen=True)
class RootConfig:
    tolerance: float = 1e-16
    max_iterations: int = 128

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class RootResult:
    root: object
    iterations: int
    status: str
    method_used: str
    residual: object = None

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def bisection_iterations(width: float, tolerance: float) -> int:
    """Halvings needed to bring the half-width of ``width`` down to ``tolerance``."""
    if width <= 2 * tolerance:
        return 0
    return math.ceil(math.log2(width / (2 * tolerance)))


def _outside(x, domain) -> bool:
    if domain is None:
        return False
    lo, hi = domain
    return (lo is not None and x <= like(x, lo)) or (hi is not None and x >= like(x, hi))


def _iterate(f, step_of, x0, cfg: RootConfig, domain, method: str) -> RootResult:
    tol = like(x0, cfg.tolerance)
    x, prev = x0, None
    k = 0
    while True:
        try:
            step = step_of(x)
        except (ZeroDivisionError, OverflowError):
            return RootResult(x, k, DIVERGED, method)
        if step is None or not is_finite(step):
            return RootResult(x, k, DIVERGED, method)
        if abs(step) <= tol:
            return RootResult(x, k, CONVERGED, method, _safe_eval(f, x))
        if k >= cfg.max_iterations:
            return RootResult(x, k, MAX_ITERATIONS, method, _safe_eval(f, x))
        x_new = x - step
        if _outside(x_new, domain):
            return RootResult(x_new, k + 1, LEFT_DOMAIN, method)
        if x_new == x or (prev is not None and x_new == prev):
            # correction below the resolution of the number type
            best = x
            if prev is not None and x_new == prev:
                f_prev, f_x = _safe_eval(f, prev), _safe_eval(f, x)
                if f_prev is not None and (f_x is None or abs(f_prev) < abs(f_x)):
                    best = prev
            return RootResult(best, k, CONVERGED, method, _safe_eval(f, best))
        prev, x = x, x_new
        k += 1


def _safe_eval(f, x):
    try:
        return f(x)
    except (ZeroDivisionError, OverflowError):
        return None


def newton(f: Callable, df: Callable, x0, cfg: RootConfig = RootConfig(), domain=POSITIVE) -> RootResult:
    """Newton iteration ``x - f/f'`` from ``x0``.

    ``domain`` is an open interval ``(lo, hi)`` (``None`` for an unbounded
    side); an iterate outside it ends the run with status ``left_domain``.
    """

    def step_of(x):
        d = df(x)
        if d == 0:
            return None
        return f(x) / d

    return _iterate(f, step_of, x0, cfg, domain, NEWTON)


def halley(f: Callable, df: Callable, d2f: Callable, x0, cfg: RootConfig = RootConfig(), domain=POSITIVE) -> RootResult:
    """Halley iteration ``x - 2 f f' / (2 f'^2 - f f'')`` from ``x0``."""

    def step_of(x):
        fx, d1, d2 = f(x), df(x), d2f(x)
        if d1 == 0:
            return None
        # same step as 2 f f' / (2 f'^2 - f f''), without the f'^2 product
        r = fx / d1
        den = 1 - r * (d2 / d1) / 2
        if den == 0:
            return None
        return r / den

    return _iterate(f, step_of, x0, cfg, domain, HALLEY)


def bisection(f: Callable, lo, hi, cfg: RootConfig = RootConfig()) -> RootResult:
    """Bisection on ``[lo, hi]``; raises :class:`InvalidBracket` without a sign change."""
    if hi < lo:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return RootResult(lo, 0, CONVERGED, BISECTION, f_lo)
    if f_hi == 0:
        return RootResult(hi, 0, CONVERGED, BISECTION, f_hi)
    s_lo = sign(f_lo)
    if s_lo == sign(f_hi):
        raise InvalidBracket(f"no sign change on [{lo}, {hi}]")
    tol = like(lo, cfg.tolerance)
    # track the width separately so the halving count never depends on the
    # resolution of the endpoints
    a, w = lo, hi - lo
    k = 0
    while w / 2 > tol:
        if k >= cfg.max_iterations:
            return RootResult(a + w / 2, k, MAX_ITERATIONS, BISECTION)
        w = w / 2
        m = a + w
        fm = f(m)
        k += 1
        if fm == 0:
            return RootResult(m, k, CONVERGED, BISECTION, fm)
        if sign(fm) == s_lo:
            a = m
    root = a + w / 2
    return RootResult(root, k, CONVERGED, BISECTION, f(root))


def solve_with_fallback(
    f: Callable,
    df: Callable,
    x0,
    bracket,
    cfg: RootConfig = RootConfig(),
    domain=POSITIVE,
) -> RootResult:
    """Newton first; bisection on ``bracket`` if Newton fails or lands outside it.

    The returned root always lies inside ``bracket``.  Iterations of a failed
    Newton run are included in the reported count.
    """
    lo, hi = bracket
    res = newton(f, df, x0, cfg, domain)
    if res.converged and lo <= res.root <= hi:
        return res
    fallback = bisection(f, lo, hi, cfg)
    return RootResult(
        fallback.root,
        res.iterations + fallback.iterations,
        fallback.status,
        NEWTON_THEN_BISECTION,
        fallback.residual,
    )


def run(method: str, f, df, x0, bracket, cfg: RootConfig = RootConfig(), d2f: Optional[Callable] = None, domain=POSITIVE) -> RootResult:
    """Dispatch by method name: newton, halley, bisection/bisect, fallback."""
    if method == NEWTON:
        return newton(f, df, x0, cfg, domain)
    if method == HALLEY:
        if d2f is None:
            raise ValueError("halley needs a second derivative")
        return halley(f, df, d2f, x0, cfg, domain)
    if method in (BISECTION, "bisect"):
        return bisection(f, bracket[0], bracket[1], cfg)
    if method == "fallback":
        return solve_with_fallback(f, df, x0, bracket, cfg, domain)
    raise ValueError(f"unknown method {method!r}")
