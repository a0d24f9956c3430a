"""Independent reference computations shared by the test modules."""

import math
from fractions import Fraction

import sympy

from peanoquad.field import SQRT5, SQRT15, FieldElement
from peanoquad.peano import apply_functional_poly
from peanoquad.poly import Polynomial
from peanoquad.quadrature import QuadratureRule


def sextic_k() -> Polynomial:
    """4320 * K on [0, sqrt5/5] for G3/2 + Lob4/2 - int."""
    x = Polynomial.x()
    return (
        Polynomial.linear_power(SQRT5 / 5, 5) * 15
        + Polynomial.linear_power(SQRT15 / 5, 5) * 10
        + Polynomial.linear_power(1, 5) * (x * 2 - 1) * 3
    )


def moment_constant(E):
    """int K = E[x^r] / r!, computed without building the kernel."""
    return apply_functional_poly(E, Polynomial.monomial(E.order)) / math.factorial(E.order)


def direct_kernel_value(E, x):
    """K(x) straight from the definition E[(t - x)_+^(r-1)] / (r-1)!."""
    r = E.order
    x = FieldElement.coerce(x)
    total = FieldElement(0)
    for t, w in E.rule.points:
        if t > x:
            total = total + w * (t - x) ** (r - 1)
    total = total - E.integral_coefficient * (1 - x) ** r / r
    return total / math.factorial(r - 1)


def _sym(q: Fraction):
    return sympy.Rational(q.numerator, q.denominator)


def random_symmetric_rule(rng, r):
    """Symmetric rule on [-1, 1] whose remainder annihilates degree <= r - 1.

    Nodes are random rationals.  The weight at 0 and at the r/2 - 1
    innermost pairs are solved exactly (by sympy) to match the even
    moments; the outer pairs get random weights.
    """
    pairs = rng.randint(r // 2, r // 2 + 3)
    ts = sorted({Fraction(rng.randint(1, 999), 1000) for _ in range(pairs)})
    if rng.random() < 0.3:
        ts[-1] = Fraction(1)
    free = {t: Fraction(rng.randint(-5, 5), rng.randint(1, 7)) for t in ts[r // 2 - 1 :]}
    solve_ts = ts[: r // 2 - 1]
    unknowns = sympy.symbols(f"w0:{r // 2}")
    eqs = []
    for j in range(r // 2):
        k = 2 * j
        lhs = unknowns[0] * (1 if k == 0 else 0)
        lhs += sum(2 * u * _sym(t) ** k for u, t in zip(unknowns[1:], solve_ts))
        lhs += sum(2 * _sym(w) * _sym(t) ** k for t, w in free.items())
        eqs.append(sympy.Eq(lhs, sympy.Rational(2, k + 1)))
    sol = sympy.solve(eqs, unknowns, dict=True)[0]
    weights = {Fraction(0): Fraction(str(sol[unknowns[0]]))}
    for u, t in zip(unknowns[1:], solve_ts):
        weights[t] = Fraction(str(sol[u]))
    weights.update(free)
    nodes = sorted({-t for t in weights if t} | set(weights))
    return QuadratureRule("sym", tuple(nodes), tuple(weights[abs(x)] for x in nodes))
