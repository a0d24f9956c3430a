"""Certified integral brackets for odd-order convex integrands.

For a (2n-1)-convex ``f`` on ``[a, b]`` the rescaled pairs

    n = 1:  midpoint  <=  int f  <=  trapezoid
    n = 2:  G2        <=  int f  <=  Lob3 (Simpson)
    n = 3:  G3        <=  int f  <=  Lob4

bracket the integral.  Values are exact field elements when the integrand
can be evaluated exactly at the (possibly irrational) nodes, and certified
rational intervals otherwise.  Plain callables are accepted too but their
results are floating point and flagged as uncertified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .convexity import CounterexampleTuple, is_n_convex_sampled, radau_f, radau_g
from .field import FieldElement, field_sign, field_to_interval
from .interval import RationalInterval, digits_to_bits, log_enclosure
from .quadrature import QuadratureRule, apply_rule, builtin_rule, combine, rescale

__all__ = [
    "RULE_PAIRS",
    "ComparisonReport",
    "ConvexityPrecheckError",
    "EnclosureDepthError",
    "EnclosureResult",
    "RadauReport",
    "bracket",
    "compare_remainders",
    "composite_enclose",
    "radau_counterexample",
    "reference_integral",
    "rule_value",
]

RULE_PAIRS = {1: ("midpoint", "trapezoid"), 2: ("g2", "lob3"), 3: ("g3", "lob4")}


class EnclosureDepthError(RuntimeError):
    def __init__(self, width, depth):
        super().__init__(f"width {float(width):.3e} still above tolerance at depth {depth}")
        self.width = width
        self.depth = depth


class ConvexityPrecheckError(ValueError):
    def __init__(self, counterexample: CounterexampleTuple):
        super().__init__(f"sampled convexity check failed at points {counterexample.points}")
        self.counterexample = counterexample


def _certified(f) -> bool:
    return hasattr(f, "enclose") and hasattr(f, "integral")


def _pair(n: int):
    try:
        return RULE_PAIRS[n]
    except KeyError:
        raise ValueError(f"unsupported n={n}; expected 1, 2 or 3") from None


def rule_value(rule: QuadratureRule, f, digits: int = 50):
    """``rule[f]`` as an exact FieldElement when possible, else a certified
    RationalInterval, else (plain callables) a float."""
    if not _certified(f):
        return apply_rule(rule, f, digits_to_bits(digits))
    if rule.is_exact and (f.polynomial is not None or f.exact):
        evaluate = f.polynomial if f.polynomial is not None else f.evaluator
        total = FieldElement(0)
        for x, w in rule.points:
            total = total + w * FieldElement.coerce(evaluate(x))
        return total
    bits = digits_to_bits(digits)
    total = RationalInterval(0)
    for x, w in zip(rule.node_intervals(bits), rule.weight_intervals(bits)):
        total = total + w * f.enclose(x, bits)
    return total


def _lower(v, bits):
    if isinstance(v, FieldElement):
        return field_to_interval(v, bits).lo
    if isinstance(v, RationalInterval):
        return v.lo
    return v


def _upper(v, bits):
    if isinstance(v, FieldElement):
        return field_to_interval(v, bits).hi
    if isinstance(v, RationalInterval):
        return v.hi
    return v


def _as_iv(v, bits) -> RationalInterval:
    if isinstance(v, FieldElement):
        return field_to_interval(v, bits)
    return v


def reference_integral(f, a, b, digits: int = 50) -> RationalInterval:
    """Enclosure of ``int_a^b f`` independent of the rules under test.

    Corpus functions use their closed-form antiderivative in exact or
    outward-rounded arithmetic.  Plain callables fall back to ``mpmath.quad``
    and the returned interval is its error estimate, not a proof.
    """
    a, b = Fraction(a), Fraction(b)
    if _certified(f):
        return f.integral(a, b, digits_to_bits(digits))
    with mpmath.workdps(digits + 10):
        value, err = mpmath.quad(lambda t: f(t), [mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator], error=True)
        v = Fraction(mpmath.nstr(value, digits + 5, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
        e = Fraction(mpmath.nstr(err, 5, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)) if err else Fraction(0)
    return RationalInterval(v - e, v + e)


# -- brackets ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnclosureResult:
    lower: Fraction | float
    upper: Fraction | float
    best_estimate: Fraction | float
    rule_pair: tuple
    subdivisions: int
    certified: bool = True
    exact: bool = False

    @property
    def width(self):
        return self.upper - self.lower

    def to_json(self) -> dict:
        conv = str if self.certified else repr
        return {
            "lower": conv(self.lower),
            "upper": conv(self.upper),
            "best_estimate": conv(self.best_estimate),
            "width": conv(self.width),
            "rule_pair": list(self.rule_pair),
            "subdivisions": self.subdivisions,
            "certified": self.certified,
            "exact": self.exact,
        }


def _check_convexity(f, n, a, b, precheck: int):
    if precheck and callable(f):
        verdict = is_n_convex_sampled(f, 2 * n - 1, trials=precheck, domain=(a, b))
        if isinstance(verdict, CounterexampleTuple):
            raise ConvexityPrecheckError(verdict)


def _bracket_values(f, a, b, n, digits):
    lo_name, hi_name = _pair(n)
    lo_rule = rescale(builtin_rule(lo_name), a, b)
    hi_rule = rescale(builtin_rule(hi_name), a, b)
    return rule_value(lo_rule, f, digits), rule_value(hi_rule, f, digits)


def bracket(f, a, b, n: int, digits: int = 50, precheck: int = 0) -> EnclosureResult:
    """Lower/upper rule values on ``[a, b]``; the caller asserts (2n-1)-convexity.

    ``precheck`` > 0 first runs that many sampled divided-difference trials
    and raises :class:`ConvexityPrecheckError` on a counterexample.
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    _pair(n)
    _check_convexity(f, n, a, b, precheck)
    low, up = _bracket_values(f, a, b, n, digits)
    bits = digits_to_bits(digits)
    lower, upper = _lower(low, bits), _upper(up, bits)
    exact = isinstance(low, FieldElement) and isinstance(up, FieldElement) and low.is_rational() and up.is_rational()
    return EnclosureResult(
        lower=lower,
        upper=upper,
        best_estimate=(lower + upper) / 2,
        rule_pair=_pair(n),
        subdivisions=1,
        certified=_certified(f),
        exact=exact,
    )


def composite_enclose(
    f, a, b, n: int, tol, max_depth: int = 16, digits: int = 50, precheck: int = 0
) -> EnclosureResult:
    """Bisect ``[a, b]`` uniformly until the summed bracket width is ``<= tol``.

    Depth ``d`` uses ``2**d`` equal subintervals.  Raises
    :class:`EnclosureDepthError` carrying the achieved width if ``max_depth``
    is not enough.
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    _pair(n)
    _check_convexity(f, n, a, b, precheck)
    tol = Fraction(tol) if not isinstance(tol, float) else tol
    bits = digits_to_bits(digits)
    width = None
    for depth in range(max_depth + 1):
        lower, upper, exact = _composite_sums(f, a, b, n, depth, digits, bits)
        width = upper - lower
        if width <= tol:
            return EnclosureResult(
                lower=lower,
                upper=upper,
                best_estimate=(lower + upper) / 2,
                rule_pair=_pair(n),
                subdivisions=2**depth,
                certified=_certified(f),
                exact=exact,
            )
    raise EnclosureDepthError(width, max_depth)


def _composite_sums(f, a, b, n, depth, digits, bits):
    pieces = 2**depth
    h = (b - a) / pieces
    lows, ups = [], []
    for i in range(pieces):
        lo, up = _bracket_values(f, a + i * h, a + (i + 1) * h, n, digits)
        lows.append(lo)
        ups.append(up)
    if all(isinstance(v, FieldElement) for v in lows + ups):
        low = sum(lows, FieldElement(0))
        up = sum(ups, FieldElement(0))
        exact = low.is_rational() and up.is_rational()
        return _lower(low, bits), _upper(up, bits), exact
    if all(isinstance(v, float) for v in lows + ups):
        return sum(lows), sum(ups), False
    low = sum((_as_iv(v, bits) for v in lows), RationalInterval(0))
    up = sum((_as_iv(v, bits) for v in ups), RationalInterval(0))
    return low.lo, up.hi, False


def composite_widths(f, a, b, n: int, depths, digits: int = 50) -> list:
    """Total bracket width at each requested bisection depth."""
    a, b = Fraction(a), Fraction(b)
    bits = digits_to_bits(digits)
    out = []
    for d in depths:
        lo, up, _ = _composite_sums(f, a, b, n, d, digits, bits)
        out.append(up - lo)
    return out


# -- remainder comparison ---------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    """Remainders ``int - G_n`` and ``Lob_{n+1} - int`` on ``[a, b]``.

    ``gauss_nonnegative`` and ``gauss_le_lobatto`` are exact verdicts when
    ``exact`` is true; otherwise they state that the certified enclosures do
    not refute the inequality, and ``margin`` (the width of the reference
    integral enclosure) bounds how far they could be off.
    """

    n: int
    interval: tuple
    gauss_error: RationalInterval
    lobatto_error: RationalInterval
    reference_integral: RationalInterval
    margin: Fraction
    exact: bool
    gauss_nonnegative: bool
    gauss_le_lobatto: bool
    gauss_error_exact: FieldElement | None = None
    lobatto_error_exact: FieldElement | None = None

    @property
    def theorem_holds(self) -> bool:
        return self.gauss_nonnegative and self.gauss_le_lobatto

    def to_json(self) -> dict:
        def iv(x: RationalInterval):
            return str(x.lo) if x.is_point() else [str(x.lo), str(x.hi)]

        out = {
            "n": self.n,
            "interval": [str(self.interval[0]), str(self.interval[1])],
            "gauss_error": iv(self.gauss_error),
            "lobatto_error": iv(self.lobatto_error),
            "reference_integral": iv(self.reference_integral),
            "margin": str(self.margin),
            "exact": self.exact,
            "gauss_nonnegative": self.gauss_nonnegative,
            "gauss_le_lobatto": self.gauss_le_lobatto,
        }
        if self.gauss_error_exact is not None:
            out["gauss_error_exact"] = self.gauss_error_exact.to_json()
            out["lobatto_error_exact"] = self.lobatto_error_exact.to_json()
        return out


def compare_remainders(f, n: int, digits: int = 50, interval=(-1, 1)) -> ComparisonReport:
    """Evaluate ``0 <= int f - G_n[f] <= Lob_{n+1}[f] - int f`` for ``n`` in {2, 3}."""
    if n not in (2, 3):
        raise ValueError("remainder comparison is defined for n = 2, 3")
    a, b = Fraction(interval[0]), Fraction(interval[1])
    bits = digits_to_bits(digits)
    g, lob = _bracket_values(f, a, b, n, digits)
    ref = reference_integral(f, a, b, digits)
    if isinstance(g, FieldElement) and isinstance(lob, FieldElement) and ref.is_point():
        ge = ref.lo - g
        le = lob - ref.lo
        return ComparisonReport(
            n=n,
            interval=(a, b),
            gauss_error=field_to_interval(ge, bits),
            lobatto_error=field_to_interval(le, bits),
            reference_integral=ref,
            margin=Fraction(0),
            exact=True,
            gauss_nonnegative=field_sign(ge) >= 0,
            gauss_le_lobatto=field_sign(le - ge) >= 0,
            gauss_error_exact=ge,
            lobatto_error_exact=le,
        )
    if isinstance(g, float):
        g = RationalInterval(Fraction(g))
        lob = RationalInterval(Fraction(lob))
    g, lob = _as_iv(g, bits), _as_iv(lob, bits)
    ge = ref - g
    le = lob - ref
    # one enclosure of the difference avoids counting the integral twice
    diff = lob + g - ref * 2
    return ComparisonReport(
        n=n,
        interval=(a, b),
        gauss_error=ge,
        lobatto_error=le,
        reference_integral=ref,
        margin=ref.width,
        exact=False,
        gauss_nonnegative=ge.hi >= 0,
        gauss_le_lobatto=diff.hi >= 0,
    )


# -- the averaged Radau example -----------------------------------------------------------


@dataclass(frozen=True)
class RadauReport:
    """Residuals of ``(Rad2l + Rad2r)/2 - int`` for ``(x+2)^4`` and ``(x+1)/(x+2)``."""

    residual_g: Fraction
    residual_f: RationalInterval
    rule_value_f: Fraction
    rule_value_g: Fraction
    integral_g: Fraction

    @property
    def signs_differ(self) -> bool:
        sf = self.residual_f.sign()
        sg = (self.residual_g > 0) - (self.residual_g < 0)
        return sf is not None and sf != 0 and sg != 0 and sf != sg

    def to_json(self, digits: int = 30) -> dict:
        from .interval import to_decimal_pair

        return {
            "g": {
                "function": "(x+2)^4",
                "averaged_radau": str(self.rule_value_g),
                "integral": str(self.integral_g),
                "residual": str(self.residual_g),
            },
            "f": {
                "function": "(x+1)/(x+2)",
                "averaged_radau": str(self.rule_value_f),
                "integral": "2 - ln 3",
                "residual_closed_form": f"ln 3 - {2 - self.rule_value_f}",
                "residual_enclosure": list(to_decimal_pair(self.residual_f, digits)),
            },
            "signs_differ": self.signs_differ,
        }


def radau_counterexample(digits: int = 50) -> RadauReport:
    """Both averaged-Radau residuals; their signs differ, so neither Radau
    rule dominates the other on 2-convex functions."""
    avg = combine([(Fraction(1, 2), builtin_rule("rad2l")), (Fraction(1, 2), builtin_rule("rad2r"))])
    f, g = radau_f(), radau_g()
    bits = digits_to_bits(digits)
    qg = rule_value(avg, g, digits).to_fraction()
    qf = rule_value(avg, f, digits).to_fraction()
    ig = g.integral(-1, 1, bits)
    # int_{-1}^{1} (x+1)/(x+2) dx = 2 - ln 3
    i_f = RationalInterval(2) - log_enclosure(3, bits)
    return RadauReport(
        residual_g=qg - ig.lo,
        residual_f=RationalInterval(qf) - i_f,
        rule_value_f=qf,
        rule_value_g=qg,
        integral_g=ig.lo,
    )
