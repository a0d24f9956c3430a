"""Quadrature rules with exact or interval-valued nodes and weights.

Exact rules keep their nodes and weights in :class:`FieldElement`; the
Gauss-Legendre and Lobatto rules with 4 to 6 points do not fit in
Q(sqrt3, sqrt5) and are loaded from ``data/numeric_rules.json`` as
rational intervals instead.  Numeric rules can be applied and used for
kernel sampling but never for exact certification.
"""

from __future__ import annotations

import decimal
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .field import SQRT3, SQRT5, SQRT15, FieldElement, field_to_interval
from .interval import RationalInterval, as_interval
from .interval import digits_to_bits
from .poly import Polynomial, isolate_roots

__all__ = [
    "EXACT_RULE_NAMES",
    "NUMERIC_RULE_NAMES",
    "BackendError",
    "QuadratureRule",
    "RuleCombination",
    "UnknownRuleError",
    "apply_rule",
    "apply_rule_enclosure",
    "apply_rule_poly",
    "builtin_rule",
    "combine",
    "compute_numeric_rule",
    "default_precision",
    "exactness_degree",
    "get_rule",
    "is_symmetric",
    "legendre",
    "load_numeric_rule",
    "monomial_integral",
    "rescale",
]

DEFAULT_DIGITS = 50


class UnknownRuleError(KeyError):
    pass


class BackendError(TypeError):
    """Raised when an exact operation is requested on a numeric rule."""


def default_precision() -> int:
    """Numeric-backend decimal precision from ``PEANO_PRECISION`` (default 50)."""
    raw = os.environ.get("PEANO_PRECISION")
    if not raw:
        return DEFAULT_DIGITS
    value = int(raw)
    if value < 1:
        raise ValueError("PEANO_PRECISION must be positive")
    return value


@dataclass(frozen=True)
class QuadratureRule:
    """Weighted point rule ``Q[f] = sum w_i f(x_i)`` on ``interval``.

    ``backend`` is ``"exact"`` (nodes/weights are FieldElement) or
    ``"numeric"`` (RationalInterval).  ``exactness`` records the stated
    degree of a numeric rule; exact rules compute theirs.
    """

    name: str
    nodes: tuple
    weights: tuple
    backend: str = "exact"
    interval: tuple = (FieldElement(-1), FieldElement(1))
    exactness: int | None = None
    digits: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if self.backend == "exact":
            nodes = tuple(FieldElement.coerce(x) for x in self.nodes)
            weights = tuple(FieldElement.coerce(w) for w in self.weights)
            a, b = (FieldElement.coerce(t) for t in self.interval)
            if not a < b:
                raise ValueError("empty rule interval")
            for x0, x1 in zip(nodes, nodes[1:]):
                if not x0 < x1:
                    raise ValueError(f"nodes of {self.name} are not strictly increasing")
            if nodes and (nodes[0] < a or nodes[-1] > b):
                raise ValueError(f"nodes of {self.name} leave [{a}, {b}]")
        elif self.backend == "numeric":
            nodes = tuple(as_interval(x) for x in self.nodes)
            weights = tuple(as_interval(w) for w in self.weights)
            a, b = (FieldElement.coerce(t) for t in self.interval)
        else:
            raise ValueError(f"unknown backend {self.backend!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "interval", (a, b))

    @property
    def points(self):
        return list(zip(self.nodes, self.weights))

    @property
    def is_exact(self) -> bool:
        return self.backend == "exact"

    def require_exact(self):
        if not self.is_exact:
            raise BackendError(f"rule {self.name} has numeric nodes; exact operation unavailable")

    def node_intervals(self, bits: int = 200) -> list[RationalInterval]:
        if self.is_exact:
            return [field_to_interval(x, bits) for x in self.nodes]
        return list(self.nodes)

    def weight_intervals(self, bits: int = 200) -> list[RationalInterval]:
        if self.is_exact:
            return [field_to_interval(w, bits) for w in self.weights]
        return list(self.weights)

    def to_json(self, digits: int = 30) -> dict:
        from .interval import to_decimal_pair

        if self.is_exact:
            pts = [{"node": x.to_json(), "weight": w.to_json()} for x, w in self.points]
            degree = exactness_degree(self)
        else:
            pts = [
                {"node": list(to_decimal_pair(x, digits)), "weight": list(to_decimal_pair(w, digits))}
                for x, w in self.points
            ]
            degree = self.exactness
        return {
            "name": self.name,
            "backend": self.backend,
            "interval": [self.interval[0].to_json(), self.interval[1].to_json()],
            "exactness_degree": degree,
            "symmetric": is_symmetric(self),
            "points": pts,
        }


# -- catalog ------------------------------------------------------------------

_H = Fraction(1, 2)


def _exact_catalog() -> dict[str, tuple[list, list]]:
    g3_node = SQRT15 / 5
    lob4_node = SQRT5 / 5
    g2_node = SQRT3 / 3
    return {
        "midpoint": ([0], [2]),
        "trapezoid": ([-1, 1], [1, 1]),
        "rad2l": ([-1, Fraction(1, 3)], [_H, Fraction(3, 2)]),
        "rad2r": ([Fraction(-1, 3), 1], [Fraction(3, 2), _H]),
        "g2": ([-g2_node, g2_node], [1, 1]),
        "g3": ([-g3_node, 0, g3_node], [Fraction(5, 9), Fraction(8, 9), Fraction(5, 9)]),
        "lob3": ([-1, 0, 1], [Fraction(1, 3), Fraction(4, 3), Fraction(1, 3)]),
        "lob4": (
            [-1, -lob4_node, lob4_node, 1],
            [Fraction(1, 6), Fraction(5, 6), Fraction(5, 6), Fraction(1, 6)],
        ),
    }


EXACT_RULE_NAMES = ("midpoint", "trapezoid", "rad2l", "rad2r", "g2", "g3", "lob3", "lob4")
NUMERIC_RULE_NAMES = ("g4", "g5", "lob5", "lob6")


def builtin_rule(name: str) -> QuadratureRule:
    """One of the exact rules on [-1, 1]: midpoint, trapezoid, rad2l, rad2r,
    g2, g3, lob3, lob4."""
    catalog = _exact_catalog()
    if name not in catalog:
        raise UnknownRuleError(f"unknown exact rule {name!r}; expected one of {', '.join(EXACT_RULE_NAMES)}")
    nodes, weights = catalog[name]
    return QuadratureRule(name, tuple(nodes), tuple(weights))


def _parse_table_value(text: str, table_digits: int, digits: int) -> RationalInterval:
    if not any(ch in text for ch in ".eE"):
        return RationalInterval(Fraction(text))
    d = decimal.Decimal(text)
    half_ulp = Fraction(decimal.Decimal(1).scaleb(d.adjusted() - table_digits + 1)) / 2
    centre = Fraction(d)
    out = RationalInterval(centre - half_ulp, centre + half_ulp)
    if digits >= table_digits:
        return out
    lo_ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_FLOOR)
    hi_ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING)
    lo = lo_ctx.divide(decimal.Decimal(out.lo.numerator), decimal.Decimal(out.lo.denominator))
    hi = hi_ctx.divide(decimal.Decimal(out.hi.numerator), decimal.Decimal(out.hi.denominator))
    return RationalInterval(Fraction(lo), Fraction(hi))


def _read_table(path: str | os.PathLike | None) -> dict:
    if path is None:
        text = resources.files("peanoquad").joinpath("data/numeric_rules.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise ValueError(f"unsupported node table version {doc.get('version')!r}")
    return doc


def load_numeric_rule(name: str, digits: int | None = None, path=None) -> QuadratureRule:
    """Interval-valued rule read from the node table.

    Decimal entries are taken as correctly rounded to the table's digit
    count; ``digits`` below that widens them outward.
    """
    digits = default_precision() if digits is None else digits
    doc = _read_table(path)
    table_digits = int(doc["digits"])
    if digits > table_digits:
        if path is None and name in NUMERIC_RULE_NAMES:
            return compute_numeric_rule(name, digits)
        raise ValueError(f"node table only carries {table_digits} digits, {digits} requested")
    try:
        entry = doc["rules"][name]
    except KeyError:
        raise UnknownRuleError(f"rule {name!r} not in node table") from None
    nodes = tuple(_parse_table_value(x, table_digits, digits) for x, _ in entry["points"])
    weights = tuple(_parse_table_value(w, table_digits, digits) for _, w in entry["points"])
    return QuadratureRule(name, nodes, weights, backend="numeric", exactness=entry.get("exactness"), digits=digits)


def legendre(n: int) -> Polynomial:
    """P_n by the three-term recurrence."""
    prev, cur = Polynomial.constant(1), Polynomial.x()
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, (Polynomial.x() * cur * (2 * k + 1) - prev * k) * Fraction(1, k + 1)
    return cur


def _interval_horner(p: Polynomial, x: RationalInterval) -> RationalInterval:
    acc = RationalInterval(0)
    for c in reversed(p.coeffs):
        acc = acc * x + RationalInterval(c.to_fraction())
    return acc


def _refine_root(p: Polynomial, lo: Fraction, hi: Fraction, width: Fraction) -> RationalInterval:
    """Bisect an isolating interval of a simple root down to ``width``."""
    if lo == hi:
        return RationalInterval(lo)
    s_lo = p(lo).sign()
    while hi - lo > width:
        m = (lo + hi) / 2
        s = p(m).sign()
        if s == 0:
            return RationalInterval(m)
        if s == s_lo:
            lo = m
        else:
            hi = m
    return RationalInterval(lo, hi)


def compute_numeric_rule(name: str, digits: int) -> QuadratureRule:
    """Certified enclosures of Gauss (``gN``) or Lobatto (``lobN``) nodes and
    weights at any precision: nodes are isolated as roots of ``P_N`` resp.
    ``P'_{N-1}`` and bisected, weights follow by interval evaluation."""
    bits = digits_to_bits(digits) + 8
    width = Fraction(1, 2**bits)
    if name.startswith("lob"):
        m = int(name[3:])
        p_n = legendre(m - 1)
        target, exactness = p_n.derivative(), 2 * m - 3
        end = RationalInterval(Fraction(2, m * (m - 1)))
    else:
        m = int(name[1:])
        target, exactness = legendre(m), 2 * m - 1
    roots = [_refine_root(target, lo, hi, width) for lo, hi in isolate_roots(target, -1, 1)]
    if name.startswith("lob"):
        nodes = [RationalInterval(-1), *roots, RationalInterval(1)]
        inner = [RationalInterval(2 * m * (m - 1)).reciprocal() * 4 / _interval_horner(p_n, x) ** 2 for x in roots]
        weights = [end, *inner, end]
    else:
        dp = target.derivative()
        nodes = roots
        weights = [RationalInterval(2) / ((1 - x**2) * _interval_horner(dp, x) ** 2) for x in roots]
    weights = [w.round_outward(bits) for w in weights]
    return QuadratureRule(name, tuple(nodes), tuple(weights), backend="numeric", exactness=exactness, digits=digits)


def get_rule(name: str, digits: int | None = None, nodes_file=None) -> QuadratureRule:
    """Resolve any catalog name, exact or numeric."""
    if name in EXACT_RULE_NAMES:
        return builtin_rule(name)
    if name in NUMERIC_RULE_NAMES or nodes_file is not None:
        return load_numeric_rule(name, digits, nodes_file)
    raise UnknownRuleError(
        f"unknown rule {name!r}; expected one of {', '.join(EXACT_RULE_NAMES + NUMERIC_RULE_NAMES)}"
    )


# -- application ----------------------------------------------------------------


def apply_rule(rule: QuadratureRule, f: Callable, precision: int = 64) -> float:
    """``sum w_i f(x_i)`` in floating point.

    Irrational nodes are replaced by the midpoints of ``precision``-bit
    enclosures before ``f`` sees them.
    """
    total = 0
    for x, w in zip(rule.node_intervals(precision), rule.weight_intervals(precision)):
        total += w.midpoint * Fraction(f(x.midpoint))
    return float(total)


def apply_rule_poly(rule: QuadratureRule, p: Polynomial) -> FieldElement:
    rule.require_exact()
    total = FieldElement(0)
    for x, w in rule.points:
        total = total + w * p(x)
    return total


def apply_rule_enclosure(rule: QuadratureRule, enclose: Callable, bits: int = 200) -> RationalInterval:
    """Certified enclosure of ``Q[f]`` given an interval extension of ``f``."""
    total = RationalInterval(0)
    for x, w in zip(rule.node_intervals(bits), rule.weight_intervals(bits)):
        total = total + w * enclose(x)
    return total


def monomial_integral(k: int, a, b) -> FieldElement:
    a = FieldElement.coerce(a)
    b = FieldElement.coerce(b)
    return (b ** (k + 1) - a ** (k + 1)) / (k + 1)


def exactness_degree(rule: QuadratureRule, max_degree: int = 64) -> int:
    """Largest ``d`` with zero error on every monomial of degree ``<= d``.

    Returns ``-1`` if the rule already fails on constants.
    """
    if not rule.is_exact:
        if rule.exactness is None:
            raise BackendError(f"numeric rule {rule.name} carries no exactness metadata")
        return rule.exactness
    a, b = rule.interval
    d = -1
    powers = [FieldElement(1)] * len(rule.nodes)
    for k in range(max_degree + 1):
        value = sum((w * p for w, p in zip(rule.weights, powers)), FieldElement(0))
        if value != monomial_integral(k, a, b):
            return d
        d = k
        powers = [p * x for p, x in zip(powers, rule.nodes)]
    return d


def is_symmetric(rule: QuadratureRule) -> bool:
    """True iff nodes and weights are mirror-symmetric about the interval centre."""
    a, b = rule.interval
    n = len(rule.nodes)
    if rule.is_exact:
        centre2 = a + b
        for i in range(n):
            j = n - 1 - i
            if rule.nodes[i] + rule.nodes[j] != centre2 or rule.weights[i] != rule.weights[j]:
                return False
        return True
    centre2 = field_to_interval(a + b, 200)
    for i in range(n):
        j = n - 1 - i
        s = rule.nodes[i] + rule.nodes[j] - centre2
        dw = rule.weights[i] - rule.weights[j]
        if s.excludes_zero() or dw.excludes_zero():
            return False
    return True


# -- combination and rescaling ----------------------------------------------------


@dataclass(frozen=True)
class RuleCombination:
    terms: tuple  # of (Fraction, QuadratureRule)

    def __init__(self, terms: Iterable):
        object.__setattr__(self, "terms", tuple((Fraction(c), r) for c, r in terms))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for c, _ in self.terms)

    def flatten(self, bits: int = 200) -> QuadratureRule:
        return combine(self.terms, bits=bits)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def combine(terms: Sequence, bits: int = 200) -> QuadratureRule:
    """Merge ``sum c_j Q_j`` into one rule.

    Exact rules merge coincident nodes by exact equality.  If any term is
    numeric the result is numeric; nodes merge only when their intervals
    are identical.
    """
    terms = [(Fraction(c), r) for c, r in terms]
    if not terms:
        raise ValueError("empty combination")
    interval = terms[0][1].interval
    if any(r.interval != interval for _, r in terms):
        raise ValueError("rules in a combination must share their interval")
    name = "+".join(f"{_format_coeff(c)}*{r.name}" for c, r in terms)
    exact = all(r.is_exact for _, r in terms)
    if exact:
        merged: dict[FieldElement, FieldElement] = {}
        for c, r in terms:
            for x, w in r.points:
                merged[x] = merged.get(x, FieldElement(0)) + w * c
        pts = sorted(((x, w) for x, w in merged.items() if not w.is_zero()), key=_sort_key)
        return QuadratureRule(name, tuple(x for x, _ in pts), tuple(w for _, w in pts), interval=interval)
    merged_iv: dict[tuple, list] = {}
    for c, r in terms:
        for x, w in zip(r.node_intervals(bits), r.weight_intervals(bits)):
            key = (x.lo, x.hi)
            if key in merged_iv:
                merged_iv[key][1] = merged_iv[key][1] + w * c
            else:
                merged_iv[key] = [x, w * c]
    pts = sorted(merged_iv.values(), key=lambda p: p[0].midpoint)
    degrees = [r.exactness if not r.is_exact else exactness_degree(r) for _, r in terms]
    return QuadratureRule(
        name,
        tuple(x for x, _ in pts),
        tuple(w for _, w in pts),
        backend="numeric",
        interval=interval,
        exactness=min(degrees),
    )


class _sort_key:
    """Order (node, weight) pairs by exact node value."""

    __slots__ = ("x",)

    def __init__(self, pair):
        self.x = pair[0]

    def __lt__(self, other):
        return self.x < other.x


def rescale(rule: QuadratureRule, x, y) -> QuadratureRule:
    """Transport a rule from its interval to ``[x, y]`` by the affine map."""
    x = FieldElement.coerce(x)
    y = FieldElement.coerce(y)
    if not x < y:
        raise ValueError("need x < y")
    a, b = rule.interval
    scale = (y - x) / (b - a)
    if rule.is_exact:
        nodes = tuple(x + (t - a) * scale for t in rule.nodes)
        weights = tuple(w * scale for w in rule.weights)
        return QuadratureRule(rule.name, nodes, weights, interval=(x, y))
    bits = 200
    s_iv = field_to_interval(scale, bits)
    x_iv = field_to_interval(x, bits)
    a_iv = field_to_interval(a, bits)
    nodes = tuple(x_iv + (t - a_iv) * s_iv for t in rule.nodes)
    weights = tuple(w * s_iv for w in rule.weights)
    return QuadratureRule(
        rule.name, nodes, weights, backend="numeric", interval=(x, y), exactness=rule.exactness, digits=rule.digits
    )
