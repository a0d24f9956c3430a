import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peanoquad.convexity import (
    ConsistentWithConvex,
    CounterexampleTuple,
    corpus,
    corpus_function,
    divided_difference,
    divided_difference_table,
    exp_function,
    is_n_convex_sampled,
    monomial,
    radau_f,
    reciprocal_shift,
    truncated_power,
)

distinct_points = st.lists(
    st.fractions(min_value=-3, max_value=3, max_denominator=20), min_size=1, max_size=7, unique=True
)


@given(distinct_points, st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_divided_difference_extracts_leading_coefficient(points, coeffs):
    m = len(points)
    # polynomial of degree m - 1: the divided difference is its leading coefficient
    c = coeffs[:m]
    values = [sum(ci * x**i for i, ci in enumerate(c)) for x in points]
    assert divided_difference(points, values) == c[-1]


@given(distinct_points)
def test_divided_difference_matches_explicit_formula(points):
    values = [x**5 - 3 * x + 1 for x in points]
    explicit = sum(
        v / math.prod(xj - xk for xk in points if xk != xj) for xj, v in zip(points, values)
    )
    assert divided_difference(points, values) == explicit


def test_divided_difference_rejects_repeats():
    with pytest.raises(ValueError):
        divided_difference_table([0, 0], [1, 1])


@pytest.mark.parametrize("f", corpus(), ids=lambda f: f.name)
def test_sampled_check_agrees_with_declared_orders(f):
    for n in range(0, 6):
        verdict = is_n_convex_sampled(f, n, trials=300, seed=n)
        assert bool(verdict) == (n in f.known_convexity_orders), (f.name, n, verdict)
        if not verdict:
            assert isinstance(verdict, CounterexampleTuple)
            assert len(verdict.points) == n + 2
            assert verdict.value < 0


def test_counterexample_is_genuine():
    v = is_n_convex_sampled(monomial(3), 1, trials=500)  # x^3 is not convex on [-1, 1]
    assert isinstance(v, CounterexampleTuple)
    values = [x**3 for x in v.points]
    assert divided_difference(list(v.points), values) < 0


def test_consistent_result_is_truthy():
    v = is_n_convex_sampled(exp_function(), 3, trials=100)
    assert isinstance(v, ConsistentWithConvex) and v and v.trials == 100


def test_declared_orders():
    assert corpus_function("(x+1)/(x+2)").known_convexity_orders == frozenset({0, 2, 4, 6, 8})
    assert corpus_function("1/(x+2)").known_convexity_orders == frozenset({1, 3, 5, 7})
    assert corpus_function("x_+^3").smoothness == 2
    assert 3 in corpus_function("x_+^3").known_convexity_orders
    assert 4 not in corpus_function("x_+^3").known_convexity_orders
    assert corpus_function("x^4").known_convexity_orders == frozenset({1, 3, 4, 5, 6, 7, 8})
    with pytest.raises(KeyError):
        corpus_function("sin")


@pytest.mark.parametrize("f", corpus(), ids=lambda f: f.name)
def test_integral_enclosure_against_mpmath(f):
    rng = random.Random(3)
    for _ in range(5):
        a = Fraction(rng.randint(-1000, 999), 1000)
        b = a + Fraction(rng.randint(1, 1000 - int(a * 1000)), 1000)
        iv = f.integral(a, b, 200)
        with mpmath.workdps(60):
            lo_mp, hi_mp = _mp(a), _mp(b)
            # split at the kink of the truncated powers
            nodes = [lo_mp, 0, hi_mp] if a < 0 < b else [lo_mp, hi_mp]
            ref = mpmath.quad(lambda t: _mp_eval(f, t), nodes)
            lo = mpmath.mpf(iv.lo.numerator) / iv.lo.denominator
            hi = mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
            assert lo - mpmath.mpf(10) ** -40 <= ref <= hi + mpmath.mpf(10) ** -40


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _mp_eval(f, t):
    name = f.name
    if name == "exp":
        return mpmath.exp(t)
    if name == "(x+1)/(x+2)":
        return (t + 1) / (t + 2)
    if name == "1/(x+2)":
        return 1 / (t + 2)
    if name == "(x+2)^4":
        return (t + 2) ** 4
    if name.startswith("x_+^"):
        return max(t, 0) ** int(name[4:])
    return t ** int(name[2:])


@pytest.mark.parametrize("f", corpus(), ids=lambda f: f.name)
def test_enclose_contains_values(f):
    bits = 120
    for x in (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(5, 7), Fraction(1)):
        iv = f.enclose(x, bits)
        with mpmath.workdps(50):
            v = _mp_eval(f, mpmath.mpf(x.numerator) / x.denominator)
            assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator - mpmath.mpf(10) ** -30 <= v
            assert v <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator + mpmath.mpf(10) ** -30


def test_exact_members_are_rational_valued():
    for f in (radau_f(), reciprocal_shift(), truncated_power(2), monomial(3)):
        assert isinstance(f(Fraction(1, 3)), Fraction)
        assert isinstance(f(1), (Fraction, int))


def test_to_json():
    doc = corpus_function("exp").to_json()
    assert doc["convexity_orders"] == list(range(9))
    assert doc["smoothness"] is None


def test_divided_difference_examples():
    assert divided_difference([0, 1], [0, 1]) == 1
    pts = [Fraction(-2, 3), Fraction(1, 5), Fraction(7, 4)]
    assert divided_difference(pts, [x * x for x in pts]) == 1
    pts = [Fraction(k, 7) for k in range(-3, 3)]
    assert divided_difference(pts, [x**4 - x for x in pts]) == 0


@given(distinct_points, st.randoms(use_true_random=False))
def test_divided_difference_permutation_symmetry(points, rnd):
    values = [x**6 - 2 * x**3 + x for x in points]
    order = list(range(len(points)))
    rnd.shuffle(order)
    shuffled = divided_difference([points[i] for i in order], [values[i] for i in order])
    assert shuffled == divided_difference(points, values)


@given(st.integers(min_value=0, max_value=6), st.data())
def test_leading_monomial_divided_difference(k, data):
    pts = data.draw(st.lists(st.fractions(-5, 5, max_denominator=9), min_size=k + 1, max_size=k + 1, unique=True))
    assert divided_difference(pts, [x**k for x in pts]) == 1


def test_truncated_power_examples():
    t3 = truncated_power(3)
    assert t3(Fraction(-1)) == 0 and t3(Fraction(1, 2)) == Fraction(1, 8)
    assert truncated_power(4).smoothness == 3
    assert is_n_convex_sampled(truncated_power(5), 5, trials=500)
    with pytest.raises(ValueError):
        truncated_power(0)


def test_sampled_examples():
    assert is_n_convex_sampled(radau_f(), 2, trials=500)
    assert is_n_convex_sampled(exp_function(), 3, trials=500)
    assert not is_n_convex_sampled(lambda x: -x * x, 1, trials=50)
    assert 2 in corpus_function("(x+2)^4").known_convexity_orders
    assert {1, 2, 3, 4, 5} <= corpus_function("exp").known_convexity_orders


def test_sampled_check_rejects_bad_arguments():
    with pytest.raises(ValueError):
        is_n_convex_sampled(exp_function(), -1)
    with pytest.raises(ValueError):
        is_n_convex_sampled(exp_function(), 1, trials=0)


@pytest.mark.slow
@pytest.mark.parametrize("f", corpus(), ids=lambda f: f.name)
def test_declared_orders_survive_ten_thousand_tuples(f):
    for n in sorted(f.known_convexity_orders):
        if n > 5:
            break
        assert is_n_convex_sampled(f, n, trials=10_000, seed=100 + n), (f.name, n)
