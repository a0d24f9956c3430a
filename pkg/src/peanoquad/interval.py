"""Closed intervals with rational endpoints.

Every operation returns an interval containing the exact image of its
operands.  Endpoints are :class:`fractions.Fraction`, so arithmetic is exact
and only the explicit :meth:`RationalInterval.round_outward` (and the
transcendental enclosures, which go through ``mpmath.iv``) lose information.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from mpmath import iv

__all__ = [
    "RationalInterval",
    "as_interval",
    "digits_to_bits",
    "exp_enclosure",
    "log_enclosure",
    "to_decimal_pair",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __init__(self, lo, hi=None):
        lo = _frac(lo)
        hi = lo if hi is None else _frac(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- queries ---------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = _frac(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int | None:
        """Sign of every member, or ``None`` if the interval straddles 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    # -- arithmetic ------------------------------------------------------

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other):
        other = as_interval(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_interval(other)
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return as_interval(other) - self

    def __mul__(self, other):
        other = as_interval(other)
        if self.lo >= 0 and other.lo >= 0:
            return RationalInterval(self.lo * other.lo, self.hi * other.hi)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self):
        if not self.excludes_zero():
            raise ZeroDivisionError(f"interval {self} contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * as_interval(other).reciprocal()

    def __rtruediv__(self, other):
        return as_interval(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return RationalInterval(1)
        if k % 2 == 1 or self.lo >= 0:
            return RationalInterval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return RationalInterval(self.hi**k, self.lo**k)
        return RationalInterval(0, max(self.lo**k, self.hi**k))

    def positive_part(self):
        """Image under ``t -> max(t, 0)``."""
        return RationalInterval(max(self.lo, 0), max(self.hi, 0))

    def hull(self, other):
        other = as_interval(other)
        return RationalInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def round_outward(self, bits: int):
        """Enlarge to the nearest enclosing interval with denominators ``2**bits``."""
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return RationalInterval(lo, hi)

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        return f"RationalInterval({self.lo}, {self.hi})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def as_interval(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    to_interval = getattr(x, "to_interval", None)
    if to_interval is not None:
        return to_interval()
    return RationalInterval(x)


def digits_to_bits(digits: int) -> int:
    """Binary precision (with guard bits) matching ``digits`` decimal digits."""
    return math.ceil(digits * math.log2(10)) + 16


def to_decimal_pair(x: RationalInterval, digits: int) -> tuple[str, str]:
    """Outward-rounded decimal strings with ``digits`` significant digits."""
    lo_ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_FLOOR)
    hi_ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING)

    def conv(q: Fraction, ctx) -> str:
        if q == 0:
            return "0"
        d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
        return format(d, "E") if abs(d.adjusted()) > 5 else format(d, "f")

    return conv(x.lo, lo_ctx), conv(x.hi, hi_ctx)


# -- transcendental enclosures via mpmath's outward-rounded interval context --


def _mpf_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if man == 0:
        return Fraction(0)
    value = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -value if sign else value


def _to_iv(x: RationalInterval):
    lo = iv.mpf(x.lo.numerator) / x.lo.denominator
    hi = iv.mpf(x.hi.numerator) / x.hi.denominator
    return iv.mpf([lo.a, hi.b])


def _from_iv(y) -> RationalInterval:
    a, b = y._mpi_
    return RationalInterval(_mpf_to_fraction(a), _mpf_to_fraction(b))


def _apply(fn, x, bits: int) -> RationalInterval:
    x = as_interval(x)
    saved = iv.prec
    iv.prec = bits
    try:
        return _from_iv(fn(_to_iv(x)))
    finally:
        iv.prec = saved


def exp_enclosure(x, bits: int = 200) -> RationalInterval:
    """Certified enclosure of ``exp`` over a rational interval."""
    return _apply(iv.exp, x, bits)


def log_enclosure(x, bits: int = 200) -> RationalInterval:
    """Certified enclosure of the natural logarithm; ``x`` must be positive."""
    x = as_interval(x)
    if x.lo <= 0:
        raise ValueError("log of a non-positive interval")
    return _apply(iv.log, x, bits)
