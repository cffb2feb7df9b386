"""18-decimal signed fixed-point numbers with 256-bit magnitudes.

Every value is an unsigned integer magnitude scaled by ``10**18`` paired with
a sign flag, the representation used by integer-only smart contracts.
Multiplication and division truncate toward zero; any result whose magnitude
does not fit in 256 bits raises :class:`FixedPointOverflow`.

>>> SignedDecimal.parse("1.5") + SignedDecimal.parse("2.5")
SignedDecimal('4.000000000000000000')
>>> SignedDecimal.parse("1") / 3
SignedDecimal('0.333333333333333333')
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from functools import total_ordering
import re

DECIMALS = 18
SCALE = 10**DECIMALS
MAX_MAGNITUDE = 2**256 - 1
MAX_EXPONENT = 75

_NUMBER_RE = re.compile(r"^([-−]?)(\d+)(?:\.(\d*))?$")


class FixedPointOverflow(OverflowError):
    """Raised when a result magnitude exceeds 256 bits."""


def _checked(magnitude: int) -> int:
    if magnitude > MAX_MAGNITUDE:
        raise FixedPointOverflow(f"magnitude needs {magnitude.bit_length()} bits")
    return magnitude


def babylonian_isqrt(n: int) -> int:
    """Floor square root of a non-negative integer by Babylonian iteration."""
    if n < 0:
        raise ValueError("square root of a negative number")
    if n < 2:
        return n
    # start above the root so the iterates decrease monotonically
    r = 1 << ((n.bit_length() + 1) // 2)
    while True:
        nxt = (r + n // r) // 2
        if nxt >= r:
            return r
        r = nxt


@total_ordering
class SignedDecimal:
    """Immutable fixed-point number: ``(-1)**negative * magnitude / 10**18``."""

    __slots__ = ("magnitude", "negative")

    def __init__(self, magnitude: int = 0, negative: bool = False):
        if magnitude < 0:
            raise ValueError("magnitude must be non-negative")
        object.__setattr__(self, "magnitude", _checked(int(magnitude)))
        object.__setattr__(self, "negative", bool(negative) and magnitude != 0)

    def __setattr__(self, name, value):
        raise AttributeError("SignedDecimal is immutable")

    # construction

    @classmethod
    def from_raw(cls, raw: int) -> SignedDecimal:
        """Build from a signed integer already scaled by 10**18."""
        return cls(abs(raw), raw < 0)

    @classmethod
    def parse(cls, text: str) -> SignedDecimal:
        m = _NUMBER_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a decimal number: {text!r}")
        sign, whole, frac = m.groups()
        frac = frac or ""
        if len(frac) > DECIMALS:
            raise ValueError(f"more than {DECIMALS} fractional digits: {text!r}")
        raw = int(whole) * SCALE + int(frac.ljust(DECIMALS, "0"))
        return cls(raw, bool(sign))

    @classmethod
    def coerce(cls, value) -> SignedDecimal:
        """Convert int, float, str, Decimal or SignedDecimal, truncating toward zero."""
        if isinstance(value, SignedDecimal):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a number")
        if isinstance(value, int):
            return cls(_checked(abs(value) * SCALE), value < 0)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, float):
            if value != value or value in (float("inf"), float("-inf")):
                raise ValueError(f"cannot represent {value}")
            value = Decimal(repr(value))
        if isinstance(value, Decimal):
            with localcontext() as ctx:
                ctx.prec = 200
                raw = int((value * SCALE).to_integral_value(rounding="ROUND_DOWN"))
            return cls.from_raw(raw)
        raise TypeError(f"cannot convert {type(value).__name__} to SignedDecimal")

    # views

    @property
    def raw(self) -> int:
        return -self.magnitude if self.negative else self.magnitude

    def __float__(self) -> float:
        return self.raw / SCALE

    def __int__(self) -> int:
        q = self.magnitude // SCALE
        return -q if self.negative else q

    def __bool__(self) -> bool:
        return self.magnitude != 0

    def __format__(self, spec: str) -> str:
        if not spec:
            return str(self)
        return format(float(self), spec)

    def __str__(self) -> str:
        whole, frac = divmod(self.magnitude, SCALE)
        return f"{'-' if self.negative else ''}{whole}.{frac:0{DECIMALS}d}"

    def __repr__(self) -> str:
        return f"SignedDecimal('{self}')"

    def __hash__(self) -> int:
        return hash(("SignedDecimal", self.raw))

    # arithmetic

    def _other(self, other):
        if isinstance(other, SignedDecimal):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return SignedDecimal.coerce(other)
        return NotImplemented

    def __neg__(self) -> SignedDecimal:
        return SignedDecimal(self.magnitude, not self.negative)

    def __pos__(self) -> SignedDecimal:
        return self

    def __abs__(self) -> SignedDecimal:
        return SignedDecimal(self.magnitude)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return SignedDecimal.from_raw_checked(self.raw + other.raw)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return SignedDecimal.from_raw_checked(self.raw - other.raw)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            # exact scaling by an integer, no rescale needed
            return SignedDecimal(_checked(self.magnitude * abs(other)), self.negative != (other < 0))
        other = self._other(other)
        if other is NotImplemented:
            return other
        mag = (self.magnitude * other.magnitude) // SCALE
        return SignedDecimal(_checked(mag), self.negative != other.negative)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("fixed-point division by zero")
            return SignedDecimal(self.magnitude // abs(other), self.negative != (other < 0))
        other = self._other(other)
        if other is NotImplemented:
            return other
        if other.magnitude == 0:
            raise ZeroDivisionError("fixed-point division by zero")
        mag = (self.magnitude * SCALE) // other.magnitude
        return SignedDecimal(_checked(mag), self.negative != other.negative)

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        return pow_uint(self, n)

    def sqrt(self) -> SignedDecimal:
        return sqrt(self)

    # ordering

    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.raw == other.raw

    def __lt__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.raw < other.raw

    @classmethod
    def from_raw_checked(cls, raw: int) -> SignedDecimal:
        return cls(_checked(abs(raw)), raw < 0)


ZERO = SignedDecimal(0)
ONE = SignedDecimal(SCALE)


def add(a: SignedDecimal, b: SignedDecimal) -> SignedDecimal:
    return a + b


def sub(a: SignedDecimal, b: SignedDecimal) -> SignedDecimal:
    return a - b


def mul(a: SignedDecimal, b: SignedDecimal) -> SignedDecimal:
    return SignedDecimal.coerce(a) * SignedDecimal.coerce(b)


def div(a: SignedDecimal, b: SignedDecimal) -> SignedDecimal:
    return SignedDecimal.coerce(a) / SignedDecimal.coerce(b)


def pow_uint(a: SignedDecimal, n: int) -> SignedDecimal:
    """``a**n`` by binary exponentiation over truncating :func:`mul`."""
    if n < 0 or n > MAX_EXPONENT:
        raise ValueError(f"exponent must be in [0, {MAX_EXPONENT}], got {n}")
    result = ONE
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def sqrt(a: SignedDecimal) -> SignedDecimal:
    """Floor square root at 10**18 scale: ``r*r <= a < (r + ulp)**2``."""
    if a.negative:
        raise ValueError("square root of a negative number")
    return SignedDecimal(babylonian_isqrt(a.magnitude * SCALE))


def parse(text: str) -> SignedDecimal:
    return SignedDecimal.parse(text)


def format_decimal(value: SignedDecimal) -> str:
    return str(value)
