from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2gz.exact_field import (
    ONE,
    SQRT3,
    ZERO,
    FieldDomainError,
    FieldElement,
    field_arith,
    field_sign,
    format_field,
    parse_field,
    to_float,
)

fracs = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)
elements = st.builds(FieldElement, fracs, fracs)
nonzero = elements.filter(bool)


def hundred_digit(x: FieldElement) -> Decimal:
    # oracle: direct high-precision evaluation, independent of the sign logic
    with localcontext() as ctx:
        ctx.prec = 100
        a = Decimal(x.a.numerator) / Decimal(x.a.denominator)
        b = Decimal(x.b.numerator) / Decimal(x.b.denominator)
        return a + b * Decimal(3).sqrt()


@given(elements, elements, elements)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x and x * ONE == x
    assert x - x == ZERO


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == ONE
    assert x / x == ONE


@given(elements)
def test_sign_matches_high_precision(x):
    d = hundred_digit(x)
    expected = (d > 0) - (d < 0)
    assert x.sign() == expected
    assert field_sign(x) == expected


@given(elements, elements)
def test_order_is_total_and_compatible(x, y):
    assert (x < y) + (x == y) + (x > y) == 1
    assert (x <= y) == (not x > y)
    if x < y:
        assert x + ONE < y + ONE


@given(elements)
def test_text_round_trip(x):
    assert parse_field(format_field(x)) == x


@given(elements)
def test_to_float_close(x):
    d = hundred_digit(x)
    f = to_float(x)
    assert abs(Decimal(f) - d) <= abs(d) * Decimal(2) ** -52 + Decimal(10) ** -300


@given(elements)
def test_sqrt_of_square(x):
    r = (x * x).sqrt()
    assert r is not None and r == abs(x)


def test_sign_near_cancellation():
    # 1351/780 is a continued-fraction convergent of sqrt3
    x = FieldElement(Fraction(1351, 780), -1)
    assert x.sign() == 1
    assert FieldElement(Fraction(-1351, 780), 1).sign() == -1
    assert FieldElement(Fraction(780, 1351), Fraction(-1, 3)).sign() == -1
    assert 0 < to_float(x) < 1e-6
    assert abs(to_float(x) - float(hundred_digit(x))) < 1e-20


def test_examples():
    assert SQRT3 * SQRT3 == 3
    assert ONE / SQRT3 == FieldElement(0, Fraction(1, 3))
    assert (FieldElement(2, 1) * FieldElement(2, -1)) == 1
    assert FieldElement(7, 4).sqrt() == FieldElement(2, 1)
    assert SQRT3.sqrt() is None
    assert FieldElement(-1).sqrt() is None
    assert field_arith(1, SQRT3, "add") == FieldElement(1, 1)
    assert field_arith(SQRT3, 3, "div") == FieldElement(0, Fraction(1, 3))


def test_division_by_zero():
    with pytest.raises(FieldDomainError):
        ONE / ZERO
    with pytest.raises(FieldDomainError):
        field_arith(SQRT3, 0, "div")


@pytest.mark.parametrize(
    "text, a, b",
    [
        ("0/1+1/1*sqrt3", 0, 1),
        ("7/2", Fraction(7, 2), 0),
        ("2+sqrt3", 2, 1),
        ("1/3+-2/3*sqrt3", Fraction(1, 3), Fraction(-2, 3)),
        ("-sqrt3", 0, -1),
        ("2*sqrt3", 0, 2),
        ("2+√3", 2, 1),
        ("-5", -5, 0),
    ],
)
def test_parse(text, a, b):
    assert parse_field(text) == FieldElement(a, b)


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1//2", "sqrt2", "1+"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_field(text)


def test_format():
    assert format_field(FieldElement(Fraction(1, 2), 0)) == "1/2"
    assert format_field(FieldElement(0, -1)) == "0/1+-1/1*sqrt3"


def test_hash_consistent_with_rationals():
    assert hash(FieldElement(3)) == hash(3) == hash(Fraction(3))
    assert FieldElement(3) == 3 and FieldElement(Fraction(1, 2)) == Fraction(1, 2)
    assert len({FieldElement(1, 1), FieldElement(1, 1)}) == 1


def test_immutable():
    with pytest.raises(AttributeError):
        SQRT3.a = 2
