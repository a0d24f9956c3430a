import math
import random
from fractions import Fraction

import pytest

from peanoquad.convexity import corpus, corpus_function, exp_function, monomial, radau_f, radau_g
from peanoquad.enclosure import (
    ConvexityPrecheckError,
    EnclosureDepthError,
    bracket,
    compare_remainders,
    composite_enclose,
    composite_widths,
    radau_counterexample,
    reference_integral,
)
from peanoquad.interval import RationalInterval, log_enclosure

E_LO, E_HI = Fraction(2718281, 10**6), Fraction(2718282, 10**6)
SINH2_LO, SINH2_HI = Fraction(2350402, 10**6), Fraction(2350403, 10**6)  # 2 sinh(1)


def test_bracket_x2_n1():
    r = bracket(monomial(2), -1, 1, 1)
    assert (r.lower, r.upper) == (0, 2)
    assert r.lower <= Fraction(2, 3) <= r.upper
    assert r.exact


def test_bracket_x4_n2():
    r = bracket(monomial(4), -1, 1, 2)
    assert (r.lower, r.upper) == (Fraction(2, 9), Fraction(2, 3))
    assert r.lower <= Fraction(2, 5) <= r.upper


def test_bracket_exp_n3():
    r = bracket(exp_function(), -1, 1, 3)
    assert r.lower <= SINH2_LO and SINH2_HI <= r.upper
    # width = e^xi * (1/15750 + 2/23625) = e^xi / 6750
    assert Fraction(1, 6750) / E_HI <= r.width <= E_HI / 6750
    assert r.certified and not r.exact


def test_bracket_rejects_bad_input():
    with pytest.raises(ValueError):
        bracket(monomial(2), 1, -1, 1)
    with pytest.raises(ValueError):
        bracket(monomial(2), -1, 1, 4)


def test_bracket_precheck():
    with pytest.raises(ConvexityPrecheckError) as info:
        bracket(monomial(3), -1, 1, 1, precheck=500)  # x^3 is not convex on [-1, 1]
    assert len(info.value.counterexample.points) == 3
    assert bracket(monomial(3), 0, 1, 1, precheck=200).lower == Fraction(1, 8)


def test_plain_callable_is_uncertified():
    r = bracket(math.exp, -1, 1, 2)
    assert not r.certified
    assert r.lower <= 2 * math.sinh(1) <= r.upper


def test_compare_x4_n2_exact():
    rep = compare_remainders(monomial(4), 2)
    assert rep.exact
    assert rep.gauss_error_exact == Fraction(8, 45)
    assert rep.lobatto_error_exact == Fraction(4, 15)
    assert rep.theorem_holds


def test_compare_x6_n3_exact():
    rep = compare_remainders(monomial(6), 3)
    # int x^6 = 2/7, G3 = 6/25, Lob4 = 26/75
    assert rep.gauss_error_exact == Fraction(2, 7) - Fraction(6, 25)
    assert rep.lobatto_error_exact == Fraction(26, 75) - Fraction(2, 7)
    assert rep.theorem_holds


@pytest.mark.parametrize("n", [2, 3])
def test_compare_low_degree_polynomials_vanish(n):
    for k in range(2 * n):
        rep = compare_remainders(monomial(k), n)
        assert rep.gauss_error_exact == 0 and rep.lobatto_error_exact == 0


def test_compare_exp():
    rep = compare_remainders(exp_function(), 2)
    assert not rep.exact
    assert rep.gauss_error.lo > 0
    assert rep.theorem_holds
    assert rep.margin < Fraction(1, 10**40)


def test_compare_rejects_n1():
    with pytest.raises(ValueError):
        compare_remainders(monomial(2), 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bracket_width_equals_sum_of_remainders(n):
    for f in (monomial(2 * n), radau_g(), monomial(2 * n + 2)):
        r = bracket(f, -1, 1, n)
        ref = reference_integral(f, -1, 1)
        assert ref.is_point()
        gauss_error = ref.lo - r.lower
        lobatto_error = r.upper - ref.lo
        assert r.width == gauss_error + lobatto_error
        if n > 1:
            rep = compare_remainders(f, n)
            assert rep.gauss_error_exact + rep.lobatto_error_exact == r.width


def test_composite_exp():
    r = composite_enclose(exp_function(), -1, 1, 2, Fraction(1, 10**6))
    assert r.width <= Fraction(1, 10**6)
    ref = reference_integral(exp_function(), -1, 1)
    assert r.lower <= ref.lo and ref.hi <= r.upper
    assert r.subdivisions & (r.subdivisions - 1) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_composite_low_degree_converges_at_depth_zero(n):
    r = composite_enclose(monomial(2 * n - 1), -1, 1, n, 0)
    assert r.subdivisions == 1 and r.width == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_halving_shrinks_width(n):
    w0, w1 = composite_widths(monomial(2 * n), -1, 1, n, [0, 1])
    assert w1 < w0


@pytest.mark.parametrize("f", [exp_function(), corpus_function("1/(x+2)"), corpus_function("x_+^5")], ids=lambda f: f.name)
def test_composite_width_monotone(f):
    widths = composite_widths(f, -1, 1, 1 if f.name == "x_+^5" else 3, range(6))
    assert all(b <= a for a, b in zip(widths, widths[1:]))


def test_composite_depth_exhausted():
    with pytest.raises(EnclosureDepthError) as info:
        composite_enclose(exp_function(), -1, 1, 1, Fraction(1, 10**12), max_depth=3)
    assert info.value.width > Fraction(1, 10**12)


def test_hermite_hadamard_random_subintervals():
    rng = random.Random(5)
    members = [f for f in corpus() if 1 in f.known_convexity_orders]
    for _ in range(100):
        f = rng.choice(members)
        a = Fraction(rng.randint(-1000, 998), 1000)
        b = Fraction(rng.randint(int(a * 1000) + 1, 1000), 1000)
        r = bracket(f, a, b, 1)
        ref = reference_integral(f, a, b)
        assert r.lower <= ref.lo and ref.hi <= r.upper


def test_reference_integral_closed_forms():
    assert reference_integral(monomial(2), 0, 3) == RationalInterval(9)
    iv = reference_integral(corpus_function("1/(x+2)"), -1, 1)
    assert iv.lo <= log_enclosure(3).hi and log_enclosure(3).lo <= iv.hi
    sinh = reference_integral(exp_function(), -1, 1)
    assert SINH2_LO <= sinh.lo and sinh.hi <= SINH2_HI
    assert sinh.width < Fraction(1, 10**50)


def test_radau_counterexample():
    rep = radau_counterexample()
    assert rep.rule_value_g == Fraction(1310, 27)
    assert rep.integral_g == Fraction(242, 5)
    assert rep.residual_g == Fraction(16, 135)
    assert rep.rule_value_f == Fraction(94, 105)
    ln3 = log_enclosure(3)
    target = ln3 - Fraction(116, 105)
    assert rep.residual_f.hi < 0
    assert rep.residual_f.lo <= target.hi and target.lo <= rep.residual_f.hi
    assert rep.residual_f.width <= Fraction(1, 10**20)
    assert rep.signs_differ


def test_radau_functions_are_2_convex():
    from peanoquad.convexity import is_n_convex_sampled

    assert is_n_convex_sampled(radau_f(), 2, trials=300)
    assert is_n_convex_sampled(radau_g(), 2, trials=300)


def test_json_is_string_valued():
    r = composite_enclose(exp_function(), -1, 1, 3, Fraction(1, 10**4))
    doc = r.to_json()
    assert all(isinstance(doc[k], str) for k in ("lower", "upper", "best_estimate", "width"))
    rep = compare_remainders(exp_function(), 3).to_json()
    assert all(isinstance(v, str) for v in rep["gauss_error"])


@pytest.mark.parametrize("n", [2, 3])
def test_even_order_convex_member_violates_theorem(n):
    # (x+1)/(x+2) has f^(2n) < 0, so it is not (2n-1)-convex and the Gauss remainder is negative
    f = radau_f()
    assert (2 * n - 1) not in f.known_convexity_orders
    rep = compare_remainders(f, n)
    assert rep.gauss_error.hi < 0
    assert not rep.theorem_holds
