"""Divided differences, sampled n-convexity checks and the integrand corpus.

Convexity orders follow Popoviciu: ``f`` is n-convex when every divided
difference on ``n + 2`` points is non-negative, so 1-convex is ordinary
convexity and a C^(n+1) function is n-convex iff ``f^(n+1) >= 0``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .field import FieldElement
from .interval import RationalInterval, as_interval, exp_enclosure, log_enclosure
from .poly import Polynomial

__all__ = [
    "ConsistentWithConvex",
    "CorpusFunction",
    "CounterexampleTuple",
    "DividedDifferenceTable",
    "corpus",
    "corpus_function",
    "divided_difference",
    "divided_difference_table",
    "exp_function",
    "is_n_convex_sampled",
    "monomial",
    "radau_f",
    "radau_g",
    "reciprocal_shift",
    "truncated_power",
]

MAX_ORDER = 8


# -- divided differences ------------------------------------------------------------


@dataclass(frozen=True)
class DividedDifferenceTable:
    """``table[k][i] = [x_i, ..., x_{i+k}; f]``."""

    points: tuple
    values: tuple
    table: tuple

    @property
    def top(self):
        return self.table[-1][0]


def divided_difference_table(points: Sequence, values: Sequence) -> DividedDifferenceTable:
    if len(points) != len(values) or not points:
        raise ValueError("need matching, non-empty points and values")
    if len(set(points)) != len(points):
        raise ValueError("divided differences need pairwise distinct points")
    rows = [list(values)]
    for k in range(1, len(points)):
        prev = rows[-1]
        rows.append([(prev[i + 1] - prev[i]) / (points[i + k] - points[i]) for i in range(len(prev) - 1)])
    return DividedDifferenceTable(tuple(points), tuple(values), tuple(tuple(r) for r in rows))


def divided_difference(points: Sequence, values: Sequence):
    """``[x_1, ..., x_m; f]`` by the recursive table; exact for Fraction input."""
    return divided_difference_table(points, values).top


# -- corpus ----------------------------------------------------------------------------


def _monotone_enclosure(fn: Callable, increasing: bool = True):
    def enclose(x, bits: int = 200) -> RationalInterval:
        x = as_interval(x)
        a, b = fn(x.lo), fn(x.hi)
        return RationalInterval(a, b) if increasing else RationalInterval(b, a)

    return enclose


@dataclass(frozen=True)
class CorpusFunction:
    """A named test integrand with what is known about it analytically.

    ``evaluator`` maps a Fraction (or FieldElement, for exact members) to
    a value of the same kind; floats also work.  ``enclose`` is an interval
    extension and ``integral(a, b, bits)`` a certified enclosure of the
    integral over ``[a, b]``.  ``smoothness`` is the largest ``r`` with
    ``f in C^r``; ``None`` means C-infinity.
    """

    name: str
    evaluator: Callable
    known_convexity_orders: frozenset
    smoothness: int | None
    exact: bool
    enclose: Callable
    integral: Callable
    polynomial: Polynomial | None = None
    domain: tuple = (Fraction(-1), Fraction(1))
    description: str = field(default="", compare=False)

    def __call__(self, x):
        return self.evaluator(x)

    def is_smooth(self, r: int) -> bool:
        return self.smoothness is None or self.smoothness >= r

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "convexity_orders": sorted(self.known_convexity_orders),
            "smoothness": self.smoothness,
            "exact": self.exact,
            "polynomial": self.polynomial is not None,
            "domain": [str(self.domain[0]), str(self.domain[1])],
            "description": self.description,
        }


def _orders(pred) -> frozenset:
    return frozenset(n for n in range(MAX_ORDER + 1) if pred(n))


def monomial(k: int) -> CorpusFunction:
    p = Polynomial.monomial(k)

    def integral(a, b, bits=200):
        a, b = Fraction(a), Fraction(b)
        return RationalInterval((b ** (k + 1) - a ** (k + 1)) / (k + 1))

    return CorpusFunction(
        name=f"x^{k}",
        evaluator=lambda x: x**k,
        # f^(n+1) = k!/(k-n-1)! x^(k-n-1) on [-1, 1]
        known_convexity_orders=_orders(lambda n: k < n + 1 or (k - n - 1) % 2 == 0),
        smoothness=None,
        exact=True,
        enclose=lambda x, bits=200: as_interval(x) ** k,
        integral=integral,
        polynomial=p,
        description=f"monomial of degree {k}",
    )


def exp_function() -> CorpusFunction:
    def integral(a, b, bits=200):
        return exp_enclosure(b, bits) - exp_enclosure(a, bits)

    return CorpusFunction(
        name="exp",
        evaluator=lambda x: math.exp(float(x)),
        known_convexity_orders=_orders(lambda n: True),
        smoothness=None,
        exact=False,
        enclose=lambda x, bits=200: exp_enclosure(x, bits),
        integral=integral,
        description="exp(x); every derivative is positive",
    )


def radau_f() -> CorpusFunction:
    """(x+1)/(x+2) = 1 - 1/(x+2); derivative m is (-1)^(m+1) m!/(x+2)^(m+1)."""

    def ev(x):
        if isinstance(x, int):
            x = Fraction(x)
        return (x + 1) / (x + 2)

    def integral(a, b, bits=200):
        a, b = Fraction(a), Fraction(b)
        return RationalInterval(b - a) - log_enclosure(Fraction(b + 2) / (a + 2), bits)

    return CorpusFunction(
        name="(x+1)/(x+2)",
        evaluator=ev,
        known_convexity_orders=_orders(lambda n: n % 2 == 0),
        smoothness=None,
        exact=True,
        enclose=_monotone_enclosure(ev, increasing=True),
        integral=integral,
        description="rational; 2-convex on [-1, 1]",
    )


def reciprocal_shift() -> CorpusFunction:
    """1/(x+2); derivative m is (-1)^m m!/(x+2)^(m+1), so odd orders are convex."""

    def ev(x):
        if isinstance(x, int):
            x = Fraction(x)
        return 1 / (x + 2)

    def integral(a, b, bits=200):
        a, b = Fraction(a), Fraction(b)
        return log_enclosure(Fraction(b + 2) / (a + 2), bits)

    return CorpusFunction(
        name="1/(x+2)",
        evaluator=ev,
        known_convexity_orders=_orders(lambda n: n % 2 == 1),
        smoothness=None,
        exact=True,
        enclose=_monotone_enclosure(ev, increasing=False),
        integral=integral,
        description="rational; n-convex for every odd n on [-1, 1]",
    )


def radau_g() -> CorpusFunction:
    p = Polynomial([16, 32, 24, 8, 1])

    def integral(a, b, bits=200):
        a, b = Fraction(a), Fraction(b)
        return RationalInterval(((b + 2) ** 5 - (a + 2) ** 5) / 5)

    return CorpusFunction(
        name="(x+2)^4",
        evaluator=lambda x: (x + 2) ** 4,
        known_convexity_orders=_orders(lambda n: True),
        smoothness=None,
        exact=True,
        enclose=_monotone_enclosure(lambda t: (t + 2) ** 4, increasing=True),
        integral=integral,
        polynomial=p,
        description="polynomial; all derivatives non-negative on [-1, 1]",
    )


def truncated_power(n: int) -> CorpusFunction:
    """``x_+^n = max(x, 0)^n``: n-convex (and m-convex for m < n), only C^(n-1)."""
    if n < 1:
        raise ValueError("truncated power needs n >= 1")

    def ev(x):
        if isinstance(x, FieldElement):
            return x**n if x.sign() > 0 else FieldElement(0)
        return x**n if x > 0 else 0 * x

    def integral(a, b, bits=200):
        a, b = Fraction(a), Fraction(b)
        return RationalInterval((max(b, 0) ** (n + 1) - max(a, 0) ** (n + 1)) / (n + 1))

    return CorpusFunction(
        name=f"x_+^{n}",
        evaluator=ev,
        known_convexity_orders=_orders(lambda m: m <= n),
        smoothness=n - 1,
        exact=True,
        enclose=lambda x, bits=200: as_interval(x).positive_part() ** n,
        integral=integral,
        description=f"truncated power; the {n}-th derivative jumps at 0",
    )


def corpus() -> list[CorpusFunction]:
    out = [monomial(k) for k in range(9)]
    out += [exp_function(), radau_f(), radau_g(), reciprocal_shift()]
    out += [truncated_power(n) for n in range(1, 7)]
    return out


def corpus_function(name: str) -> CorpusFunction:
    for f in corpus():
        if f.name == name:
            return f
    raise KeyError(f"no corpus function named {name!r}")


# -- sampled convexity ---------------------------------------------------------------


@dataclass(frozen=True)
class ConsistentWithConvex:
    trials: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class CounterexampleTuple:
    points: tuple
    value: float

    def __bool__(self):
        return False


def _random_tuple(rng: random.Random, m: int, lo: Fraction, hi: Fraction, exact: bool):
    """``m`` sorted points in ``[lo, hi]`` with pairwise gaps >= 1e-3 * width."""
    width = hi - lo
    sep = width / 1000
    slack = width - sep * (m - 1)
    # stars and bars: sorted uniform offsets plus the mandatory gaps
    if exact:
        grid = 10**6
        raw = sorted(Fraction(rng.randrange(grid + 1), grid) for _ in range(m))
        return tuple(lo + slack * u + sep * i for i, u in enumerate(raw))
    raw = sorted(rng.random() for _ in range(m))
    return tuple(float(lo) + float(slack) * u + float(sep) * i for i, u in enumerate(raw))


def _normalized(points, values) -> float:
    """Divided difference over the size of the terms in its explicit form."""
    total = 0.0
    scale = 0.0
    for j, xj in enumerate(points):
        denom = 1.0
        for k, xk in enumerate(points):
            if k != j:
                denom *= xj - xk
        term = values[j] / denom
        total += term
        scale += abs(term)
    return total / scale if scale else 0.0


def is_n_convex_sampled(
    f,
    n: int,
    trials: int = 1000,
    domain=(-1, 1),
    tolerance: float = 1e-9,
    seed: int | None = 0,
):
    """Look for a negative divided difference on ``n + 2`` random points.

    Exact corpus members are checked in rational arithmetic against 0;
    anything else in floating point against ``-tolerance`` on the
    normalized divided difference.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    lo, hi = Fraction(domain[0]), Fraction(domain[1])
    exact = getattr(f, "exact", False)
    m = n + 2
    for _ in range(trials):
        pts = _random_tuple(rng, m, lo, hi, exact)
        values = [f(x) for x in pts]
        if exact:
            dd = divided_difference(pts, values)
            if dd < 0:
                return CounterexampleTuple(pts, float(dd))
        else:
            nd = _normalized(pts, [float(v) for v in values])
            if nd < -tolerance:
                return CounterexampleTuple(pts, nd)
    return ConsistentWithConvex(trials)
