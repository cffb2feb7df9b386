import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silkswap.fixed_decimal import (
    MAX_MAGNITUDE,
    SCALE,
    FixedPointOverflow,
    SignedDecimal,
    babylonian_isqrt,
    div,
    mul,
    pow_uint,
    sqrt,
)

D = SignedDecimal.parse

raw_values = st.integers(min_value=-(10**40), max_value=10**40).map(SignedDecimal.from_raw)


def as_fraction(v: SignedDecimal) -> Fraction:
    return Fraction(v.raw, SCALE)


def trunc_fraction(q: Fraction) -> int:
    """Raw value of ``q`` truncated toward zero at 18 decimals."""
    n = q * SCALE
    return math.floor(n) if n >= 0 else math.ceil(n)


class TestAdd:
    def test_exact(self):
        assert D("1.5") + D("2.5") == D("4.0")

    def test_canonical_zero(self):
        z = D("1.0") + D("-1.0")
        assert z == 0 and not z.negative
        assert str(z) == "0.000000000000000000"

    def test_overflow(self):
        big = SignedDecimal(2**255)
        with pytest.raises(FixedPointOverflow):
            big + big

    def test_negative_zero_is_canonical(self):
        assert not SignedDecimal(0, True).negative
        assert not (-SignedDecimal(0)).negative


class TestMul:
    def test_exact(self):
        assert mul(D("1.5"), D("2.0")) == D("3.0")

    def test_annihilator(self):
        assert mul(D("123.456"), D("0")) == 0

    def test_underflow_truncates(self):
        tiny = D("0.000000000000000001")
        assert mul(tiny, tiny) == 0

    def test_sign(self):
        assert mul(D("-1.5"), D("2")) == D("-3")
        assert mul(D("-1.5"), D("-2")) == D("3")

    def test_full_width_intermediate(self):
        # raw product is ~2**300 but the rescaled result fits
        a = SignedDecimal(2**150)
        b = SignedDecimal(2**150)
        assert (a * b).magnitude == 2**300 // SCALE

    def test_overflow(self):
        with pytest.raises(FixedPointOverflow):
            SignedDecimal(2**200) * SignedDecimal(2**200)

    def test_truncates_toward_zero(self):
        third = D("1") / 3
        assert mul(third, D("-1")) == D("-0.333333333333333333")


class TestDiv:
    def test_exact(self):
        assert div(D("3.0"), D("2.0")) == D("1.5")

    def test_truncated(self):
        assert str(div(D("1.0"), D("3.0"))) == "0.333333333333333333"

    def test_negative_truncates_toward_zero(self):
        assert str(div(D("-1.0"), D("3.0"))) == "-0.333333333333333333"

    def test_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            div(D("1.0"), D("0"))
        with pytest.raises(ZeroDivisionError):
            D("1.0") / 0


class TestPow:
    def test_cube(self):
        assert pow_uint(D("2.0"), 3) == D("8.0")

    def test_zero_exponent(self):
        assert pow_uint(D("123.4"), 0) == D("1")

    def test_half_to_the_eighth(self):
        # oracle: repeated multiplication
        acc = D("1")
        for _ in range(8):
            acc = acc * D("0.5")
        assert pow_uint(D("0.5"), 8) == acc == D("0.00390625")

    def test_exponent_ceiling(self):
        pow_uint(D("0.9"), 75)
        with pytest.raises(ValueError):
            pow_uint(D("0.9"), 76)

    def test_overflow_propagates(self):
        with pytest.raises(FixedPointOverflow):
            pow_uint(D("1000000"), 20)

    @given(st.integers(0, 10**19), st.integers(0, 12))
    def test_matches_repeated_mul_for_exact_cases(self, raw, n):
        # values with few decimals multiply exactly
        a = SignedDecimal.from_raw(raw - raw % 10**16)
        expected = Fraction(1)
        for _ in range(n):
            expected *= as_fraction(a)
        try:
            got = pow_uint(a, n)
        except FixedPointOverflow:
            assert expected * SCALE > MAX_MAGNITUDE / 2
            return
        assert abs(as_fraction(got) - expected) <= Fraction(n + 1, SCALE) * max(1, expected)


class TestSqrt:
    def test_four(self):
        assert sqrt(D("4.0")) == D("2.0")

    def test_zero(self):
        assert sqrt(D("0")) == 0

    def test_two(self):
        # oracle: integer square root of the scaled magnitude
        assert math.isqrt(2 * SCALE * SCALE) == 1414213562373095048
        assert str(sqrt(D("2.0"))) == "1.414213562373095048"

    def test_negative(self):
        with pytest.raises(ValueError):
            sqrt(D("-1"))

    @given(st.integers(0, 10**11 * SCALE))
    def test_floor_postcondition(self, raw):
        a = SignedDecimal(raw)
        r = sqrt(a)
        # r**2 <= a < (r + ulp)**2 in exact arithmetic
        assert r.magnitude**2 <= raw * SCALE < (r.magnitude + 1) ** 2

    @given(st.integers(0, 2**512))
    def test_babylonian_matches_isqrt(self, n):
        assert babylonian_isqrt(n) == math.isqrt(n)


class TestFormat:
    def test_parse_rejects_19_digits(self):
        with pytest.raises(ValueError):
            D("0.1234567890123456789")

    def test_parse_forms(self):
        assert D("7") == D("7.") == D("7.0")
        assert D("-0.5").negative
        assert D("−0.5") == D("-0.5")

    @pytest.mark.parametrize("bad", ["", "abc", "1.2.3", "--1", "1e5"])
    def test_parse_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            D(bad)

    @given(raw_values)
    def test_round_trip(self, v):
        assert D(str(v)) == v

    def test_coerce_float_truncates(self):
        assert SignedDecimal.coerce(0.1) == D("0.1")
        assert SignedDecimal.coerce(-2.5) == D("-2.5")
        with pytest.raises(ValueError):
            SignedDecimal.coerce(float("nan"))


class TestProperties:
    @given(raw_values, raw_values)
    def test_add_mul_commute(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @given(raw_values, raw_values, raw_values)
    def test_distributive_within_truncation(self, a, b, c):
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert abs(lhs.raw - rhs.raw) <= 2

    @given(raw_values, raw_values)
    def test_mul_is_truncated_exact_product(self, a, b):
        assert (a * b).raw == trunc_fraction(as_fraction(a) * as_fraction(b))

    @given(raw_values, raw_values.filter(bool))
    def test_div_is_truncated_exact_quotient(self, a, b):
        assert (a / b).raw == trunc_fraction(as_fraction(a) / as_fraction(b))

    @settings(max_examples=300)
    @given(
        st.floats(1e-6, 1e12),
        st.floats(1e-6, 1e12),
        st.sampled_from(["add", "mul", "div", "sqrt"]),
    )
    def test_agrees_with_float(self, x, y, op):
        a, b = SignedDecimal.coerce(x), SignedDecimal.coerce(y)
        # compare against float arithmetic on the already-truncated operands
        fa, fb = float(a), float(b)
        got, ref = {
            "add": (a + b, fa + fb),
            "mul": (a * b, fa * fb),
            "div": (a / b, fa / fb),
            "sqrt": (sqrt(a), math.sqrt(fa)),
        }[op]
        # truncation to 1e-18 is the documented difference
        assert abs(float(got) - ref) <= 1e-12 * abs(ref) + 2e-18
