"""Closed-form Silkswap invariant math.

Notation: ``x`` and ``y`` are pool balances, ``p`` converts Y into X units
(``z = p*y``), ``d`` is the invariant size parameter.  Scaled coordinates are
``xs = x/d`` and ``zs = p*y/d``.

All functions are generic over the numeric type of their arguments (float,
:class:`~silkswap.fixed_decimal.SignedDecimal`, mpmath ``mpf``), so the same
code serves as the float reference path and the fixed-point production path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .numeric import like

ON_CURVE_TOL = 1e-9


class OffCurveError(ValueError):
    """A price or slope was requested at a point that does not satisfy F = 0."""


@dataclass(frozen=True)
class PoolParams:
    """Shape parameters of the invariant.

    ``a`` is the amplification; ``gamma1`` applies where ``x <= p*y`` and
    ``gamma2`` where ``x > p*y``.
    """

    a: float
    gamma1: int
    gamma2: int

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"amplification must be positive, got {self.a}")
        for name in ("gamma1", "gamma2"):
            g = getattr(self, name)
            if isinstance(g, bool) or not isinstance(g, int) or g < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {g!r}")

    def swapped(self) -> PoolParams:
        return PoolParams(self.a, self.gamma2, self.gamma1)


@dataclass(frozen=True)
class OraclePrices:
    """USD prices of one unit of X and of Y."""

    p_x: float
    p_y: float

    def __post_init__(self):
        if not (self.p_x > 0 and self.p_y > 0):
            raise ValueError(f"oracle prices must be positive, got {self.p_x}, {self.p_y}")

    @property
    def p(self) -> float:
        """Units of X per unit of Y."""
        return self.p_y / self.p_x


class Point(NamedTuple):
    x: object
    y: object


class ScaledPoint(NamedTuple):
    xs: object
    zs: object


def _amp(params: PoolParams, template):
    return like(template, params.a)


def select_gamma(x, py, params: PoolParams) -> int:
    """Exponent for the region containing ``(x, p*y)``; the line x = p*y takes gamma1."""
    return params.gamma1 if x <= py else params.gamma2


# unscaled invariant


def chi(x, y, d, p, params: PoolParams):
    z = p * y
    g = select_gamma(x, z, params)
    return (x * z * 4 / (d * d)) ** g


def invariant_f(x, y, d, p, params: PoolParams):
    """``A*D*chi*(x + p*y - D) + x*p*y - D**2/4``; zero exactly on the curve."""
    z = p * y
    return _amp(params, x) * d * chi(x, y, d, p, params) * (x + z - d) + x * z - d * d / 4


def partial_f_x(x, y, d, p, params: PoolParams):
    z = p * y
    g = select_gamma(x, z, params)
    c = chi(x, y, d, p, params)
    return _amp(params, x) * d * c * (1 + g * (x + z - d) / x) + z


def partial_f_y(x, y, d, p, params: PoolParams):
    z = p * y
    g = select_gamma(x, z, params)
    c = chi(x, y, d, p, params)
    return _amp(params, x) * d * c * (p + g * (x + z - d) / y) + p * x


def df_dD(x, y, d, p, params: PoolParams):
    """Derivative of the invariant in ``d`` with the balances held fixed."""
    z = p * y
    g = select_gamma(x, z, params)
    c = chi(x, y, d, p, params)
    return _amp(params, x) * c * ((1 - 2 * g) * (x + z - d) - d) - d / 2


def d2f_dD2(x, y, d, p, params: PoolParams):
    z = p * y
    g = select_gamma(x, z, params)
    c = chi(x, y, d, p, params)
    return _amp(params, x) * c * (4 * g - 2 + 2 * g * (2 * g - 1) * (x / d + z / d - 1)) - like(x, 1) / 2


def check_on_curve(x, y, d, p, params: PoolParams, tol: float = ON_CURVE_TOL):
    """Raise :class:`OffCurveError` unless ``(x, y)`` lies on the curve within ``tol``.

    The test is scale free: the scaled residual divided by the scaled
    gradient, i.e. an estimate of the distance to the curve in units of ``d``.
    """
    dist = curve_distance(x / d, p * y / d, params)
    if dist > like(dist, tol):
        raise OffCurveError(f"point is {float(dist):.3e} (scaled) away from the invariant curve")


def slope_dy_dx(x, y, d, p, params: PoolParams, tol: float = ON_CURVE_TOL):
    """Slope of the curve at an on-curve point, ``-F_x / F_y``; always negative."""
    check_on_curve(x, y, d, p, params, tol)
    return -partial_f_x(x, y, d, p, params) / partial_f_y(x, y, d, p, params)


def spot_price_x(x, y, d, p, params: PoolParams, tol: float = ON_CURVE_TOL):
    """Price of one unit of X in units of Y, ``|dy/dx|``."""
    return abs(slope_dy_dx(x, y, d, p, params, tol))


def spot_price_y(x, y, d, p, params: PoolParams, tol: float = ON_CURVE_TOL):
    """Price of one unit of Y in units of X, ``|dx/dy|``."""
    return 1 / spot_price_x(x, y, d, p, params, tol)


# scaled invariant


def scaled_chi(xs, zs, params: PoolParams):
    return (xs * zs * 4) ** select_gamma(xs, zs, params)


def scaled_f(xs, zs, params: PoolParams):
    """``A*(4*xs*zs)**g*(xs + zs - 1) + xs*zs - 1/4``, equal to ``F / D**2``."""
    return _amp(params, xs) * scaled_chi(xs, zs, params) * (xs + zs - 1) + xs * zs - like(xs, 1) / 4


def dscaled_dx(xs, zs, params: PoolParams):
    g = select_gamma(xs, zs, params)
    return _amp(params, xs) * scaled_chi(xs, zs, params) * (g * (xs + zs - 1) / xs + 1) + zs


def dscaled_dz(xs, zs, params: PoolParams):
    g = select_gamma(xs, zs, params)
    return _amp(params, xs) * scaled_chi(xs, zs, params) * (g * (xs + zs - 1) / zs + 1) + xs


def d2scaled_dx2(xs, zs, params: PoolParams):
    g = select_gamma(xs, zs, params)
    if g == 0:
        return xs * 0
    return zs * 4 * g * _amp(params, xs) * (xs * zs * 4) ** (g - 1) * (2 + (g - 1) * (xs + zs - 1) / xs)


def d2scaled_dz2(xs, zs, params: PoolParams):
    g = select_gamma(xs, zs, params)
    if g == 0:
        return xs * 0
    return xs * 4 * g * _amp(params, xs) * (xs * zs * 4) ** (g - 1) * (2 + (g - 1) * (xs + zs - 1) / zs)


def scaled_slope(xs, zs, p, params: PoolParams):
    """``dy/dx`` from scaled partials: ``-(1/p) * dF~/dxs / dF~/dzs``."""
    return -dscaled_dx(xs, zs, params) / dscaled_dz(xs, zs, params) / p


def curve_distance(xs, zs, params: PoolParams):
    """First-order distance from ``(xs, zs)`` to the scaled curve."""
    gx = abs(dscaled_dx(xs, zs, params))
    gz = abs(dscaled_dz(xs, zs, params))
    return abs(scaled_f(xs, zs, params)) / max(gx, gz)


# reference curves


def cpmm_y(x, d, p):
    """Constant-product curve through the equilibrium point: ``D**2 / (4*p*x)``."""
    if not x > 0:
        raise ValueError("x must be positive")
    return d * d / (x * p * 4)


def csmm_y(x, d, p):
    """Constant-sum line ``(D - x) / p`` on ``0 < x < D``."""
    if not (0 < x < d):
        raise ValueError("constant-sum curve is defined for 0 < x < D")
    return (d - x) / p


# Curve v2 comparison


def curve_v2_chi(xs, zs, gamma_c):
    """Curve v2 leverage ``u*(g/(g + 1 - u))**2`` with ``u = 4*xs*zs``."""
    if not gamma_c > 0:
        raise ValueError("gamma_c must be positive")
    u = xs * zs * 4
    g = like(xs, gamma_c)
    r = g / (g + 1 - u)
    return u * r * r


def _curve_v2_dchi_du(u, g):
    r = g / (g + 1 - u)
    return r * r * (1 + 2 * u / (g + 1 - u))


def curve_v2_scaled_f(xs, zs, a, gamma_c):
    """Scaled hybrid invariant with the Curve v2 leverage in place of chi."""
    a = like(xs, a)
    return a * curve_v2_chi(xs, zs, gamma_c) * (xs + zs - 1) + xs * zs - like(xs, 1) / 4


def curve_v2_dscaled_dx(xs, zs, a, gamma_c):
    a = like(xs, a)
    u = xs * zs * 4
    dchi = _curve_v2_dchi_du(u, like(xs, gamma_c))
    return a * (dchi * zs * 4 * (xs + zs - 1) + curve_v2_chi(xs, zs, gamma_c)) + zs


def curve_v2_dscaled_dz(xs, zs, a, gamma_c):
    a = like(xs, a)
    u = xs * zs * 4
    dchi = _curve_v2_dchi_du(u, like(xs, gamma_c))
    return a * (dchi * xs * 4 * (xs + zs - 1) + curve_v2_chi(xs, zs, gamma_c)) + xs
