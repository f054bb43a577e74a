"""Exact arithmetic in the real quadratic field Q(sqrt 3).

Every coordinate of the Gelfand-Zeitlin polytope, the weight lattice and the
G2 root data lives in this field, so all polyhedral work is done with
:class:`FieldElement` values and exact sign tests.
"""
from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "FieldElement",
    "FieldDomainError",
    "SQRT3",
    "ZERO",
    "ONE",
    "field_arith",
    "field_sign",
    "to_float",
    "parse_field",
    "format_field",
]

Scalar = Union["FieldElement", int, Fraction]


class FieldDomainError(ArithmeticError):
    """Raised for operations outside the field's domain (division by zero)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _sign_of(a: Fraction, b: Fraction) -> int:
    # sign of a + b*sqrt3
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    d = a * a - 3 * b * b
    if d > 0:
        return sa
    if d < 0:
        return sb
    return 0  # unreachable for nonzero rational b: sqrt3 is irrational


class FieldElement:
    """The real number ``a + b*sqrt(3)`` with rational ``a`` and ``b``.

    Instances are immutable and always canonical (both parts are reduced
    fractions), so equality and hashing are component-wise. Comparison is the
    ordering of the reals.

    >>> x = FieldElement(1, 1)
    >>> x * FieldElement(1, -1)
    FieldElement('-2/1')
    """

    __slots__ = ("_a", "_b")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> None:
        object.__setattr__(self, "_a", _frac(a))
        object.__setattr__(self, "_b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def coerce(cls, x: Scalar) -> FieldElement:
        if isinstance(x, FieldElement):
            return x
        return cls(_frac(x), 0)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._a.denominator == 1

    def sign(self) -> int:
        return _sign_of(self._a, self._b)

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self._a - o._a, self._b - o._b)

    def __rsub__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self) -> FieldElement:
        return FieldElement(-self._a, -self._b)

    def __pos__(self) -> FieldElement:
        return self

    def __abs__(self) -> FieldElement:
        return -self if self.sign() < 0 else self

    def __mul__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self._a, self._b, o._a, o._b
        if not b and not d:
            return FieldElement(a * c, b)
        return FieldElement(a * c + 3 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> FieldElement:
        """Galois conjugate ``a - b*sqrt(3)``."""
        return FieldElement(self._a, -self._b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 3*b**2``."""
        return self._a * self._a - 3 * self._b * self._b

    def inverse(self) -> FieldElement:
        n = self.norm()
        if n == 0:
            raise FieldDomainError("division by zero in Q(sqrt3)")
        return FieldElement(self._a / n, -self._b / n)

    def __truediv__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def sqrt(self) -> FieldElement | None:
        """Square root inside the field, or ``None`` when there is none.

        Only non-negative elements have real roots; the returned root is
        non-negative.
        """
        s = self.sign()
        if s < 0:
            return None
        if s == 0:
            return ZERO
        a, b = self._a, self._b
        # (p + q sqrt3)^2 = p^2 + 3q^2 + 2pq sqrt3
        disc = _rational_sqrt(a * a - 3 * b * b)
        if disc is None:
            return None
        for p2 in ((a + disc) / 2, (a - disc) / 2):
            p = _rational_sqrt(p2)
            if p is None:
                continue
            if p == 0:
                q = _rational_sqrt(a / 3)
                cands = [] if q is None else [FieldElement(0, q)]
            else:
                q = b / (2 * p)
                cands = [FieldElement(p, q), FieldElement(-p, -q)]
            for c in cands:
                if c * c == self and c.sign() >= 0:
                    return c
        return None

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def _cmp(self, other) -> int:
        o = FieldElement.coerce(other)
        return _sign_of(self._a - o._a, self._b - o._b)

    def __lt__(self, other) -> bool:
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other) -> bool:
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other) -> bool:
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other) -> bool:
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    # -- conversion -------------------------------------------------------
    def __float__(self) -> float:
        return to_float(self)

    def __repr__(self) -> str:
        return f"FieldElement({format_field(self)!r})"

    def __str__(self) -> str:
        return format_field(self)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


ZERO = FieldElement(0, 0)
ONE = FieldElement(1, 0)
SQRT3 = FieldElement(0, 1)


def field_arith(x: Scalar, y: Scalar, op: str) -> FieldElement:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two field elements."""
    x = FieldElement.coerce(x)
    y = FieldElement.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


def field_sign(x: Scalar) -> int:
    return FieldElement.coerce(x).sign()


def _dec(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def to_float(x: Scalar) -> float:
    """Nearest double to ``a + b*sqrt(3)``.

    Mixed-sign inputs are evaluated as ``(a**2 - 3b**2) / (a - b*sqrt3)`` so
    no cancellation happens in the decimal evaluation.
    """
    x = FieldElement.coerce(x)
    a, b = x.a, x.b
    if b == 0:
        return float(a)
    with localcontext() as ctx:
        ctx.prec = 60
        r3 = Decimal(3).sqrt()
        if (a >= 0) == (b >= 0) or a == 0:
            val = _dec(a) + _dec(b) * r3
        else:
            val = _dec(a * a - 3 * b * b) / (_dec(a) - _dec(b) * r3)
        return float(val)


_NUM = r"[+-]?\d+(?:/\d+)?"
_TEXT_RE = re.compile(
    rf"^(?:(?P<a>{_NUM}))?(?:(?P<op>[+-])?(?P<b>{_NUM})?\*?sqrt3)?$"
)


def parse_field(text: str) -> FieldElement:
    """Parse ``p/q`` or ``p/q+r/s*sqrt3`` (``r/s`` may carry its own sign).

    Bare integers and a leading ``sqrt3`` term are accepted too.
    """
    try:
        return _parse_field(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def _parse_field(text: str) -> FieldElement:
    s = text.strip().replace(" ", "").replace("\u221a3", "sqrt3")
    if not s:
        raise ValueError("empty field element")
    # canonical writer emits "+-r/s*sqrt3"; fold the sign pair
    s = s.replace("+-", "-").replace("-+", "-").replace("--", "+")
    m = _TEXT_RE.match(s)
    if m is None or (m.group("a") is None and "sqrt3" not in s):
        raise ValueError(f"malformed field element {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    b = Fraction(0)
    if "sqrt3" in s:
        if m.group("op") is None and m.group("b") is None and m.group("a") is not None:
            # "r/s*sqrt3": the greedy match put the coefficient in the rational slot
            return FieldElement(0, a)
        b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
        if m.group("op") == "-":
            b = -b
    return FieldElement(a, b)


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_field(x: Scalar) -> str:
    x = FieldElement.coerce(x)
    if x.b == 0:
        return _fmt_q(x.a)
    return f"{_fmt_q(x.a)}+{_fmt_q(x.b)}*sqrt3"
