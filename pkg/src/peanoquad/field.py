"""Exact arithmetic in the real field Q(sqrt3, sqrt5).

An element is stored as four rational coordinates over the basis
``{1, sqrt3, sqrt5, sqrt15}``.  All nodes and weights of the rules G2, G3,
Lob3, Lob4 and the two Radau rules live here, and so do the coefficients of
their Peano kernels.

Signs are decided exactly: zero is detected structurally, otherwise the
element is enclosed with rational brackets of the three square roots whose
width halves until the enclosure excludes zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .interval import RationalInterval

__all__ = [
    "FieldElement",
    "SQRT3",
    "SQRT5",
    "SQRT15",
    "field_sign",
    "field_to_interval",
    "rational_between",
    "sqrt_enclosure",
]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a field coordinate")


class FieldElement:
    """``a + b*sqrt3 + c*sqrt5 + d*sqrt15`` with rational ``a, b, c, d``."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _q(a)
        self.b = _q(b)
        self.c = _q(c)
        self.d = _q(d)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        return cls(_q(x))

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return FieldElement.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                return FieldElement(self.a * other, self.b * other, self.c * other, self.d * other)
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        if not (b2 or c2 or d2):
            return FieldElement(a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        if not (b1 or c1 or d1):
            return FieldElement(a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        return FieldElement(
            a1 * a2 + 3 * b1 * b2 + 5 * c1 * c2 + 15 * d1 * d2,
            a1 * b2 + b1 * a2 + 5 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 3 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conjugate(self, flip3: bool, flip5: bool) -> "FieldElement":
        """Galois conjugate sending sqrt3 -> -sqrt3 and/or sqrt5 -> -sqrt5."""
        s3 = -1 if flip3 else 1
        s5 = -1 if flip5 else 1
        return FieldElement(self.a, s3 * self.b, s5 * self.c, s3 * s5 * self.d)

    def norm(self) -> Fraction:
        """Product of the four Galois conjugates; nonzero iff ``self`` is."""
        n = self * self.conjugate(True, False) * self.conjugate(False, True) * self.conjugate(True, True)
        return n.to_fraction()

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt3, sqrt5)")
        if self.is_rational():
            return FieldElement(1 / self.a)
        # 1/x = (product of the other three conjugates) / norm
        other = self.conjugate(True, False) * self.conjugate(False, True) * self.conjugate(True, True)
        n = (self * other).to_fraction()
        return other * (1 / n)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    raise ZeroDivisionError("division by zero")
                inv = 1 / Fraction(other)
                return FieldElement(self.a * inv, self.b * inv, self.c * inv, self.d * inv)
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElement.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        return field_sign(self)

    def _cmp(self, other) -> int:
        return field_sign(self - FieldElement.coerce(other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.a) if self.is_rational() else hash(self.coords)
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- conversions ------------------------------------------------------

    def to_interval(self, precision: int = 64) -> RationalInterval:
        return field_to_interval(self, precision)

    def __float__(self):
        return float(field_to_interval(self, 64).midpoint)

    def to_json(self) -> dict:
        return {k: str(v) for k, v in zip("abcd", self.coords)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldElement":
        return cls(*(Fraction(data[k]) for k in "abcd"))

    def __repr__(self):
        return f"FieldElement({self.a!s}, {self.b!s}, {self.c!s}, {self.d!s})"

    def __str__(self):
        parts = []
        for coeff, name in zip(self.coords, ("", "sqrt3", "sqrt5", "sqrt15")):
            if not coeff:
                continue
            if not name:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(name)
            elif coeff == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{coeff}*{name}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


SQRT3 = FieldElement(0, 1, 0, 0)
SQRT5 = FieldElement(0, 0, 1, 0)
SQRT15 = FieldElement(0, 0, 0, 1)


@lru_cache(maxsize=None)
def sqrt_enclosure(n: int, bits: int) -> RationalInterval:
    """Bracket of ``sqrt(n)`` with dyadic endpoints and width ``2**-bits``.

    ``isqrt(n * 4**bits)`` is exactly the endpoint that bisection of
    ``t**2 - n`` on dyadic grid points converges to.
    """
    scale = 1 << bits
    r = math.isqrt(n * scale * scale)
    if r * r == n * scale * scale:
        return RationalInterval(Fraction(r, scale))
    return RationalInterval(Fraction(r, scale), Fraction(r + 1, scale))


def _enclose(x: FieldElement, bits: int) -> RationalInterval:
    out = RationalInterval(x.a)
    for coeff, n in ((x.b, 3), (x.c, 5), (x.d, 15)):
        if coeff:
            out = out + sqrt_enclosure(n, bits) * coeff
    return out


def field_to_interval(x, precision: int) -> RationalInterval:
    """Rational interval of width ``<= 2**-precision`` containing ``x``."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    x = FieldElement.coerce(x)
    if x.is_rational():
        return RationalInterval(x.a)
    spread = abs(x.b) + abs(x.c) + abs(x.d)
    extra = max(math.ceil(spread).bit_length(), 0)
    return _enclose(x, precision + extra + 1)


def field_sign(x) -> int:
    """Exact sign (-1, 0, +1) of an element of Q(sqrt3, sqrt5)."""
    x = FieldElement.coerce(x)
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.a > 0 else -1
    bits = 32
    while True:
        s = _enclose(x, bits).sign()
        if s is not None and s != 0:
            return s
        bits *= 2


def rational_between(lo, hi) -> Fraction:
    """A rational strictly between two field elements ``lo < hi``.

    Returns the exact midpoint when both are rational, otherwise a dyadic
    point separating their enclosures.
    """
    lo = FieldElement.coerce(lo)
    hi = FieldElement.coerce(hi)
    if lo.is_rational() and hi.is_rational():
        if lo.a >= hi.a:
            raise ValueError("empty interval")
        return (lo.a + hi.a) / 2
    if field_sign(hi - lo) <= 0:
        raise ValueError("empty interval")
    bits = 16
    while True:
        a = field_to_interval(lo, bits)
        b = field_to_interval(hi, bits)
        if a.hi < b.lo:
            return (a.hi + b.lo) / 2
        bits *= 2
