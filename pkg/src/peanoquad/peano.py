"""Peano kernels of quadrature remainders on [-1, 1].

For ``E[f] = Q[f] - c * int_{-1}^{1} f`` annihilating polynomials of degree
``< r`` the kernel is

    K(x) = E[(. - x)_+^(r-1)] / (r-1)!
         = ( sum_{x_i > x} w_i (x_i - x)^(r-1) - c (1 - x)^r / r ) / (r-1)!

which is a polynomial in ``x`` between consecutive nodes.  Kernels are kept
as exact piecewise polynomials for rules in Q(sqrt3, sqrt5) and sampled in
interval arithmetic otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from .field import FieldElement, field_sign, rational_between
from .interval import RationalInterval, digits_to_bits
from .poly import Polynomial, isolate_roots
from .quadrature import QuadratureRule, apply_rule_enclosure, apply_rule_poly

__all__ = [
    "AnnihilationError",
    "InsufficientPrecisionError",
    "PiecewisePolynomial",
    "RemainderFunctional",
    "SignVerdict",
    "Verdict",
    "apply_functional",
    "apply_functional_poly",
    "build_kernel",
    "certify_sign",
    "error_constant",
    "kernel_is_even",
    "kernel_sample_numeric",
    "peano_integral",
]


class AnnihilationError(ValueError):
    """The functional does not vanish on some monomial of degree < r."""

    def __init__(self, degree: int, value):
        super().__init__(f"E[x^{degree}] = {value} != 0")
        self.degree = degree
        self.value = value


class InsufficientPrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RemainderFunctional:
    """``E[f] = rule[f] - integral_coefficient * int_{-1}^{1} f``, of Peano order ``order``."""

    rule: QuadratureRule
    order: int
    integral_coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "integral_coefficient", Fraction(self.integral_coefficient))
        if self.order < 1:
            raise ValueError("order must be positive")
        a, b = self.rule.interval
        if a != -1 or b != 1:
            raise ValueError("remainder functionals are defined for rules on [-1, 1]")

    def check_annihilation(self):
        """Raise :class:`AnnihilationError` at the first monomial ``x^k, k < r``
        on which ``E`` does not vanish."""
        self.rule.require_exact()
        for k in range(self.order):
            value = apply_functional_poly(self, Polynomial.monomial(k))
            if not value.is_zero():
                raise AnnihilationError(k, value)


def apply_functional_poly(E: RemainderFunctional, p: Polynomial) -> FieldElement:
    return apply_rule_poly(E.rule, p) - p.integral(-1, 1) * E.integral_coefficient


def apply_functional(E: RemainderFunctional, f, digits: int = 50) -> RationalInterval:
    """Certified enclosure of ``E[f]`` for an integrand with interval
    evaluation and a reference integral (see :mod:`peanoquad.convexity`)."""
    from .enclosure import reference_integral

    bits = digits_to_bits(digits)
    q = apply_rule_enclosure(E.rule, lambda x: f.enclose(x, bits), bits)
    integral = reference_integral(f, -1, 1, digits)
    return q - integral * E.integral_coefficient


# -- piecewise polynomials ----------------------------------------------------------


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces on ``[b_0, b_1), [b_1, b_2), ..., [b_{m-1}, b_m]``."""

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps = tuple(FieldElement.coerce(b) for b in self.breakpoints)
        if len(self.pieces) != len(bps) - 1:
            raise ValueError("need exactly one piece per pair of consecutive breakpoints")
        for b0, b1 in zip(bps, bps[1:]):
            if not b0 < b1:
                raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def piece_index(self, x) -> int:
        x = FieldElement.coerce(x)
        bps = self.breakpoints
        if x < bps[0] or x > bps[-1]:
            raise ValueError(f"{x} outside [{bps[0]}, {bps[-1]}]")
        for i in range(len(self.pieces) - 1):
            if x < bps[i + 1]:
                return i
        return len(self.pieces) - 1

    def piece_on(self, lo, hi) -> Polynomial:
        """The piece whose interval contains ``[lo, hi]``."""
        i = self.piece_index(lo)
        if FieldElement.coerce(hi) > self.breakpoints[i + 1]:
            raise ValueError(f"[{lo}, {hi}] crosses a breakpoint")
        return self.pieces[i]

    def __call__(self, x) -> FieldElement:
        return self.pieces[self.piece_index(x)](x)

    def integral(self) -> FieldElement:
        total = FieldElement(0)
        for (b0, b1), p in zip(self.intervals(), self.pieces):
            total = total + p.integral(b0, b1)
        return total

    def intervals(self):
        return list(zip(self.breakpoints, self.breakpoints[1:]))

    def reflect(self) -> "PiecewisePolynomial":
        """``x -> K(-x)``."""
        return PiecewisePolynomial(
            tuple(-b for b in reversed(self.breakpoints)),
            tuple(p.reflect() for p in reversed(self.pieces)),
        )

    def refine(self, points) -> "PiecewisePolynomial":
        """Same function with extra breakpoints inserted."""
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        extra = {FieldElement.coerce(p) for p in points} | set(self.breakpoints)
        bps = sorted((b for b in extra if lo <= b <= hi), key=_Key)
        pieces = tuple(self.piece_on(b0, b1) for b0, b1 in zip(bps, bps[1:]))
        return PiecewisePolynomial(tuple(bps), pieces)

    def to_json(self) -> dict:
        return {
            "breakpoints": [b.to_json() for b in self.breakpoints],
            "pieces": [
                {"lo": b0.to_json(), "hi": b1.to_json(), "coefficients": p.to_json(), "text": str(p)}
                for (b0, b1), p in zip(self.intervals(), self.pieces)
            ],
        }


class _Key:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x


# -- kernel construction ------------------------------------------------------------


def build_kernel(E: RemainderFunctional) -> PiecewisePolynomial:
    """Exact Peano kernel of ``E`` as a piecewise polynomial in ``x``."""
    E.rule.require_exact()
    if E.order < 2:
        # (t - x)_+^0 needs a convention at t == x which is not fixed here
        raise ValueError("Peano order must be at least 2")
    E.check_annihilation()
    r = E.order
    nodes = list(E.rule.nodes)
    weights = list(E.rule.weights)
    bps = [FieldElement(-1)] + [x for x in nodes if -1 < x < 1] + [FieldElement(1)]
    tail = Polynomial.linear_power(1, r) * (E.integral_coefficient / r)
    scale = Fraction(1, math.factorial(r - 1))
    pieces = []
    for hi in bps[1:]:
        acc = -tail
        for x, w in zip(nodes, weights):
            if x >= hi:
                acc = acc + Polynomial.linear_power(x, r - 1) * w
        pieces.append(acc * scale)
    return PiecewisePolynomial(tuple(bps), tuple(pieces))


def kernel_is_even(K: PiecewisePolynomial) -> bool:
    """Exact test of ``K(-x) == K(x)`` on the common refinement of both
    breakpoint sets."""
    mirror = K.reflect()
    if mirror.breakpoints[0] != K.breakpoints[0] or mirror.breakpoints[-1] != K.breakpoints[-1]:
        return False
    a = K.refine(mirror.breakpoints)
    b = mirror.refine(K.breakpoints)
    return a.pieces == b.pieces


def error_constant(K: PiecewisePolynomial) -> FieldElement:
    """``int_{-1}^{1} K``: the factor in ``E[f] = f^(r)(xi) * int K`` when K is one-signed."""
    return K.integral()


def peano_integral(K: PiecewisePolynomial, q: Polynomial) -> FieldElement:
    """``int q(x) K(x) dx`` over the kernel's support, exactly."""
    total = FieldElement(0)
    for (b0, b1), p in zip(K.intervals(), K.pieces):
        total = total + (p * q).integral(b0, b1)
    return total


# -- sign certification ---------------------------------------------------------------


class Verdict(enum.Enum):
    NONNEGATIVE = "Nonnegative"
    NONPOSITIVE = "Nonpositive"
    SIGN_CHANGING = "SignChanging"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of :func:`certify_sign`.

    For ``SIGN_CHANGING`` the kernel is negative on the closed rational
    interval ``witness_interval``, which contains ``negative_point``, and
    positive at ``positive_point``.
    """

    verdict: Verdict
    negative_point: Fraction | None = None
    positive_point: Fraction | None = None
    witness_interval: tuple | None = None

    def to_json(self) -> dict:
        out = {"verdict": str(self.verdict)}
        if self.verdict is Verdict.SIGN_CHANGING:
            out["witness"] = {
                "negative_point": str(self.negative_point),
                "positive_point": str(self.positive_point),
                "interval": [str(self.witness_interval[0]), str(self.witness_interval[1])],
            }
        return out


def _piece_regions(p: Polynomial, a: FieldElement, b: FieldElement):
    """Yield ``(sample, sign, lo, hi)`` for every maximal root-free open
    sub-interval of ``(a, b)``.

    ``sample`` is a rational point of the region and ``[lo, hi]`` a closed
    rational sub-interval containing it, so ``p`` has sign ``sign`` on all
    of ``[lo, hi]``.
    """
    if p.is_zero():
        m = rational_between(a, b)
        yield m, 0, rational_between(a, m), rational_between(m, b)
        return
    roots = isolate_roots(p, a, b)
    # boundaries between regions: (left point, right point, exact-root?)
    left_cut = (a, None)
    regions = []
    for lo, hi in roots:
        # region to the left of this root ends at ``lo`` (a non-root if lo < hi)
        regions.append((left_cut, (FieldElement(lo), lo if lo != hi else None)))
        left_cut = (FieldElement(hi), hi if lo != hi else None)
    regions.append((left_cut, (b, None)))
    for (u, u_rat), (v, v_rat) in regions:
        # u_rat / v_rat are set when the boundary point itself lies in the region
        if u_rat is not None and v_rat is not None and u_rat == v_rat:
            m = u_rat
        else:
            m = rational_between(u, v)
        s = field_sign(p(FieldElement(m)))
        lo = u_rat if u_rat is not None else rational_between(u, m)
        hi = v_rat if v_rat is not None else rational_between(m, v)
        yield m, s, lo, hi


def certify_sign(K: PiecewisePolynomial) -> SignVerdict:
    """Exact sign classification of a kernel with field coefficients.

    Every root-free region of every piece is sampled at a rational point.
    Zeros (roots of even multiplicity, vanishing at breakpoints) do not
    break one-signedness.
    """
    negative = positive = None
    for (a, b), p in zip(K.intervals(), K.pieces):
        for m, s, lo, hi in _piece_regions(p, a, b):
            if s < 0 and negative is None:
                negative = (m, lo, hi)
            elif s > 0 and positive is None:
                positive = m
    if negative is None:
        return SignVerdict(Verdict.NONNEGATIVE)
    if positive is None:
        return SignVerdict(Verdict.NONPOSITIVE)
    m, lo, hi = negative
    return SignVerdict(Verdict.SIGN_CHANGING, m, positive, (lo, hi))


# -- numeric sampling ------------------------------------------------------------------


def kernel_sample_numeric(
    rule: QuadratureRule,
    order: int,
    grid: int,
    digits: int = 50,
    integral_coefficient=1,
    max_width: Fraction | None = None,
) -> list[tuple[Fraction, RationalInterval]]:
    """Interval enclosures of the Peano kernel at ``grid`` equispaced points.

    Works for exact and numeric rules alike; annihilation is not checked,
    since numeric weights only annihilate low monomials approximately.
    """
    if grid < 2:
        raise ValueError("grid needs at least two points")
    if order < 2:
        raise ValueError("Peano order must be at least 2")
    bits = digits_to_bits(digits)
    if max_width is None:
        max_width = Fraction(1, 10 ** (digits // 2))
    nodes = rule.node_intervals(bits)
    weights = rule.weight_intervals(bits)
    gamma = Fraction(integral_coefficient)
    r = order
    scale = Fraction(1, math.factorial(r - 1))
    out = []
    for j in range(grid):
        x = Fraction(-1) + Fraction(2 * j, grid - 1)
        acc = RationalInterval(-gamma * (1 - x) ** r / r)
        for xi, wi in zip(nodes, weights):
            if xi.hi <= x:
                continue
            acc = acc + wi * ((xi - x).positive_part() ** (r - 1))
        value = (acc * scale).round_outward(bits)
        if value.width > max_width:
            raise InsufficientPrecisionError(
                f"kernel enclosure at x={x} has width {float(value.width):.3g} > {float(max_width):.3g}"
            )
        out.append((x, value))
    return out


def functional_from_rule(rule: QuadratureRule, order: int | None = None, integral_coefficient=1) -> RemainderFunctional:
    """Convenience: ``rule - integral_coefficient * int`` with default order
    one more than the rule's exactness degree."""
    from .quadrature import exactness_degree

    if order is None:
        order = exactness_degree(rule) + 1
    return RemainderFunctional(rule, order, Fraction(integral_coefficient))
