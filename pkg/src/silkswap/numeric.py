"""Numeric backends shared by the invariant formulas and the solvers.

The invariant math is written once with ``+ - * /`` and integer powers, so it
runs unchanged on Python floats, on :class:`SignedDecimal`, or on any other
type with the same operators (the tests use mpmath for high-precision
oracles). A backend only knows how to convert inputs and take square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .fixed_decimal import SignedDecimal
from .fixed_decimal import sqrt as _fixed_sqrt


@dataclass(frozen=True)
class Backend:
    name: str
    num: Callable[[object], object]
    sqrt: Callable[[object], object]

    def __call__(self, value):
        return self.num(value)


def _to_float(value) -> float:
    return float(value)


FLOAT = Backend("float", _to_float, math.sqrt)
FIXED = Backend("fixed", SignedDecimal.coerce, _fixed_sqrt)

_BACKENDS = {"float": FLOAT, "fixed": FIXED}


def get_backend(name: str | Backend) -> Backend:
    if isinstance(name, Backend):
        return name
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_BACKENDS)}") from None


def like(template, value):
    """Convert ``value`` to the numeric type of ``template``."""
    if isinstance(template, SignedDecimal):
        return SignedDecimal.coerce(value)
    if isinstance(template, float):
        return float(value)
    return type(template)(value)


def sign(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def is_finite(value) -> bool:
    if isinstance(value, SignedDecimal):
        return True
    return math.isfinite(float(value))
