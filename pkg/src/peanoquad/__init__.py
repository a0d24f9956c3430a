"""Exact Peano-kernel analysis of symmetric quadrature rules and certified
Gauss/Lobatto integral enclosures for odd-order convex integrands."""

from .convexity import corpus, corpus_function, divided_difference, is_n_convex_sampled
from .enclosure import bracket, compare_remainders, composite_enclose, radau_counterexample, reference_integral
from .field import SQRT3, SQRT5, SQRT15, FieldElement
from .interval import RationalInterval
from .peano import (
    PiecewisePolynomial,
    RemainderFunctional,
    SignVerdict,
    Verdict,
    build_kernel,
    certify_sign,
    error_constant,
    functional_from_rule,
    kernel_is_even,
    kernel_sample_numeric,
)
from .poly import Polynomial, budan_fourier_bound, budan_fourier_V, isolate_roots, sturm_root_count
from .quadrature import QuadratureRule, combine, exactness_degree, get_rule, is_symmetric

__version__ = "0.1.0"

__all__ = [
    "SQRT15",
    "SQRT3",
    "SQRT5",
    "FieldElement",
    "PiecewisePolynomial",
    "Polynomial",
    "QuadratureRule",
    "RationalInterval",
    "RemainderFunctional",
    "SignVerdict",
    "Verdict",
    "bracket",
    "budan_fourier_V",
    "budan_fourier_bound",
    "build_kernel",
    "certify_sign",
    "combine",
    "compare_remainders",
    "composite_enclose",
    "corpus",
    "corpus_function",
    "divided_difference",
    "error_constant",
    "exactness_degree",
    "functional_from_rule",
    "get_rule",
    "is_n_convex_sampled",
    "is_symmetric",
    "isolate_roots",
    "kernel_is_even",
    "kernel_sample_numeric",
    "radau_counterexample",
    "reference_integral",
    "sturm_root_count",
]
