"""Dense univariate polynomials over Q(sqrt3, sqrt5).

Coefficients are stored in ascending order and trailing zeros are always
stripped, so two polynomials are equal iff their coefficient tuples are.
Because the coefficient ring is a field, Euclidean division, GCDs and Sturm
sequences need no pseudo-remainders.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .field import FieldElement, field_sign, rational_between

__all__ = [
    "Polynomial",
    "PolynomialError",
    "budan_fourier_V",
    "budan_fourier_bound",
    "isolate_roots",
    "poly_gcd",
    "sign_changes",
    "sign_sequence",
    "squarefree_part",
    "sturm_root_count",
    "sturm_sequence",
]

_ZERO = FieldElement(0)
_ONE = FieldElement(1)


class PolynomialError(ArithmeticError):
    pass


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [FieldElement.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[FieldElement, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def linear_power(cls, c, k: int, sign: int = -1) -> "Polynomial":
        """Expanded ``(c + sign*x)**k`` via the binomial theorem."""
        c = FieldElement.coerce(c)
        powers = [_ONE]
        for _ in range(k):
            powers.append(powers[-1] * c)
        return cls([powers[k - j] * (comb(k, j) * sign**j) for j in range(k + 1)])

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` standing for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = self.leading.inverse()
        return Polynomial([c * inv for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (_ZERO,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = FieldElement.coerce(other)
            return Polynomial([x * c for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Polynomial(), self
        inv = other.leading.inverse()
        quot = [_ZERO] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            quot[k - dq] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # -- calculus and evaluation -------------------------------------------

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self, k: int = 1) -> "Polynomial":
        p = self
        for _ in range(k):
            p = Polynomial([c * i for i, c in enumerate(p.coeffs)][1:])
        return p

    def antiderivative(self) -> "Polynomial":
        return Polynomial([_ZERO] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def integral(self, a, b) -> FieldElement:
        P = self.antiderivative()
        return P(b) - P(a)

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        return Polynomial([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def compose_affine(self, scale, shift) -> "Polynomial":
        """``p(scale*x + shift)`` by Horner's scheme."""
        lin = Polynomial([shift, scale])
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- display / serialization -------------------------------------------

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls([FieldElement.from_json(c) for c in data])

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            if mon and c == 1:
                terms.append(mon)
            else:
                terms.append(cs if not mon else f"{cs}*{mon}")
        return " + ".join(terms)


def poly_eval(p: Polynomial, x):
    """Horner evaluation; exact for field or rational arguments."""
    if not isinstance(x, FieldElement) and isinstance(x, (int, Fraction)) and all(c.is_rational() for c in p.coeffs):
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c.a
        return FieldElement(acc)
    x = FieldElement.coerce(x)
    acc = _ZERO
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    """``p / gcd(p, p')``: same distinct roots, all simple."""
    if p.is_zero():
        raise PolynomialError("square-free part of the zero polynomial")
    if p.degree <= 0:
        return Polynomial([1])
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of the square-free part of ``p``."""
    f = squarefree_part(p)
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def sign_changes(signs) -> int:
    """Sign changes in a sequence, zeros skipped."""
    count, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _sturm_V(seq, x) -> int:
    return sign_changes(field_sign(q(x)) for q in seq)


def sturm_root_count(p: Polynomial, a, b, *, _seq=None) -> int:
    """Number of distinct real roots of ``p`` in ``(a, b]``."""
    if p.is_zero():
        raise PolynomialError("root count of the zero polynomial")
    if not FieldElement.coerce(a) < FieldElement.coerce(b):
        raise ValueError("need a < b")
    seq = _seq if _seq is not None else sturm_sequence(p)
    return _sturm_V(seq, a) - _sturm_V(seq, b)


def sign_sequence(p: Polynomial, x) -> list[int]:
    """Signs of ``p(x), p'(x), ..., p^(n)(x)``."""
    out = []
    q = p
    for _ in range(max(p.degree, 0) + 1):
        out.append(field_sign(q(x)))
        q = q.derivative()
    return out


def budan_fourier_V(p: Polynomial, x) -> int:
    if p.is_zero():
        raise PolynomialError("V of the zero polynomial")
    return sign_changes(sign_sequence(p, x))


def budan_fourier_bound(p: Polynomial, a, b) -> int:
    """``V(a) - V(b)``: the root count in ``(a, b]`` with multiplicity is this
    value minus an even non-negative integer."""
    if not FieldElement.coerce(a) < FieldElement.coerce(b):
        raise ValueError("need a < b")
    bound = budan_fourier_V(p, a) - budan_fourier_V(p, b)
    if bound < 0:
        raise PolynomialError(f"V(a) - V(b) = {bound} < 0; arithmetic fault")
    return bound


def isolate_roots(p: Polynomial, a, b) -> list[tuple[Fraction, Fraction]]:
    """Isolate the distinct real roots of ``p`` in the open interval ``(a, b)``.

    Returns ordered, disjoint pairs ``(lo, hi)`` with rational endpoints
    strictly inside ``(a, b)``.  A pair with ``lo == hi`` is an exact
    rational root; otherwise exactly one root lies in ``(lo, hi)`` and
    neither endpoint is a root.
    """
    if p.is_zero():
        raise PolynomialError("cannot isolate roots of the zero polynomial")
    a = FieldElement.coerce(a)
    b = FieldElement.coerce(b)
    if not a < b:
        raise ValueError("need a < b")
    f = squarefree_part(p)
    if f.degree < 1:
        return []
    seq = sturm_sequence(f)

    def is_root(x) -> bool:
        return f(x).is_zero()

    def open_count(lo, hi) -> int:
        return sturm_root_count(f, lo, hi, _seq=seq) - (1 if is_root(hi) else 0)

    found: list[tuple[Fraction, Fraction]] = []
    stack = [(a, b, open_count(a, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        lo_ok = lo != a and not is_root(lo)
        hi_ok = hi != b and not is_root(hi)
        if n == 1 and lo_ok and hi_ok:
            found.append((lo.to_fraction(), hi.to_fraction()))
            continue
        m = FieldElement(rational_between(lo, hi))
        if is_root(m):
            found.append((m.a, m.a))
        left = open_count(lo, m)
        stack.append((lo, m, left))
        stack.append((m, hi, n - left - (1 if is_root(m) else 0)))
    found.sort()
    return found
