"""Command-line front end: ``peanoquad <subcommand> ...``.

Output is JSON (or CSV for kernel samples) on stdout.  Rationals are
printed as ``"p/q"`` strings and inexact quantities as outward-rounded
decimal intervals, never bare floats.

Exit status: 0 on success, 1 on usage or input errors, 2 when
``certify --expect`` does not match the verdict.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from fractions import Fraction

from .convexity import corpus, corpus_function
from .enclosure import EnclosureDepthError, compare_remainders, composite_enclose, radau_counterexample
from .interval import RationalInterval, to_decimal_pair
from .peano import (
    RemainderFunctional,
    build_kernel,
    certify_sign,
    error_constant,
    kernel_sample_numeric,
)
from .quadrature import (
    EXACT_RULE_NAMES,
    NUMERIC_RULE_NAMES,
    RuleCombination,
    UnknownRuleError,
    combine,
    default_precision,
    exactness_degree,
    get_rule,
)

__all__ = ["ComboParseError", "main", "parse_combo", "run"]


class ComboParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+/\d+|\d+\.\d*|\.\d+|\d+)\s*\*\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*"
)


def parse_combo(text: str, digits: int | None = None, nodes_file=None) -> RuleCombination:
    """Parse ``"0.5*g2+0.5*lob3"`` into exact coefficients and catalog rules."""
    pos = 0
    terms = []
    while pos < len(text) or not terms:
        m = _TERM.match(text, pos)
        if not m:
            raise ComboParseError("expected '<rational>*<rule>'", pos)
        if terms and m.group("sign") is None:
            raise ComboParseError("expected '+' or '-' between terms", pos)
        coef = Fraction(m.group("coef"))
        if m.group("sign") == "-":
            coef = -coef
        name = m.group("name")
        try:
            rule = get_rule(name, digits=digits, nodes_file=nodes_file)
        except UnknownRuleError as exc:
            raise ComboParseError(f"unknown rule {name!r}", m.start("name")) from exc
        terms.append((coef, rule))
        pos = m.end()
    return RuleCombination(terms)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="peanoquad", description=__doc__.split("\n\n")[0])
    p.add_argument("--nodes-file", help="JSON node table for the numeric rules (default: bundled)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rules = sub.add_parser("rules", help="rule catalog")
    rules.add_argument("action", choices=["list"])

    def functional_args(sp):
        sp.add_argument("--combo", required=True, help="e.g. 0.5*g2+0.5*lob3")
        sp.add_argument("--order", type=int, help="Peano order r (default: exactness degree + 1)")
        sp.add_argument("--integral-coef", type=_rational, default=Fraction(1), help="c in E = Q - c*int (default 1)")

    kernel = sub.add_parser("kernel", help="Peano kernel pieces (json) or samples (csv)")
    functional_args(kernel)
    kernel.add_argument("--format", choices=["json", "csv"], default="json")
    kernel.add_argument("--grid", type=int, default=101)

    certify = sub.add_parser("certify", help="exact sign certification of a Peano kernel")
    functional_args(certify)
    certify.add_argument("--expect", choices=["nonnegative", "nonpositive"])

    constant = sub.add_parser("constant", help="exact integral of the Peano kernel")
    functional_args(constant)

    compare = sub.add_parser("compare", help="Gauss vs Lobatto remainders")
    compare.add_argument("--fn", required=True)
    compare.add_argument("--n", type=int, choices=[2, 3], required=True)
    compare.add_argument("--a", type=_rational, default=Fraction(-1))
    compare.add_argument("--b", type=_rational, default=Fraction(1))

    enclose = sub.add_parser("enclose", help="certified composite bracket of an integral")
    enclose.add_argument("--fn", required=True)
    enclose.add_argument("--a", type=_rational, required=True)
    enclose.add_argument("--b", type=_rational, required=True)
    enclose.add_argument("--n", type=int, choices=[1, 2, 3], required=True)
    enclose.add_argument("--tol", type=_rational, required=True)
    enclose.add_argument("--max-depth", type=int, default=16)

    corp = sub.add_parser("corpus", help="test integrands")
    corp.add_argument("action", choices=["list"])

    counter = sub.add_parser("counterexample", help="averaged Radau residuals")
    counter.add_argument("which", choices=["radau"])

    figure = sub.add_parser("figure", help="kernel samples of G_n/2 + Lob_{n+1}/2 as CSV")
    figure.add_argument("--n", type=int, choices=[2, 3, 4, 5], required=True)
    figure.add_argument("--grid", type=int, default=400)
    return p


def _dump(obj, out):
    json.dump(obj, out, indent=2)
    out.write("\n")


def _functional(args, digits):
    combo = parse_combo(args.combo, digits=digits, nodes_file=args.nodes_file)
    rule = combo.flatten()
    order = args.order if args.order is not None else exactness_degree(rule) + 1
    return RemainderFunctional(rule, order, args.integral_coef)


def _write_samples(samples, digits, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "K_lo", "K_hi"])
    for x, k in samples:
        w.writerow([str(x), *to_decimal_pair(k, digits)])


def _fraction_or_field(v):
    return str(v.to_fraction()) if v.is_rational() else v.to_json()


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = _build_parser().parse_args(argv)
    digits = default_precision()
    try:
        return _dispatch(args, digits, out)
    except (ValueError, KeyError, TypeError, ArithmeticError, OSError) as exc:
        print(f"peanoquad: error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args, digits, out) -> int:
    cmd = args.command
    if cmd == "rules":
        rules = [get_rule(n) for n in EXACT_RULE_NAMES]
        rules += [get_rule(n, digits=digits, nodes_file=args.nodes_file) for n in NUMERIC_RULE_NAMES]
        _dump({"rules": [r.to_json(digits) for r in rules]}, out)
    elif cmd == "corpus":
        _dump({"corpus": [f.to_json() for f in corpus()]}, out)
    elif cmd == "constant":
        E = _functional(args, digits)
        _dump({"constant": _fraction_or_field(error_constant(build_kernel(E)))}, out)
    elif cmd == "certify":
        E = _functional(args, digits)
        verdict = certify_sign(build_kernel(E))
        _dump(verdict.to_json(), out)
        if args.expect and str(verdict.verdict).lower() != args.expect:
            return 2
    elif cmd == "kernel":
        E = _functional(args, digits)
        if args.format == "csv":
            samples = kernel_sample_numeric(E.rule, E.order, args.grid, digits, E.integral_coefficient)
            _write_samples(samples, digits, out)
        else:
            K = build_kernel(E)
            _dump({"rule": E.rule.name, "order": E.order, "integral_coefficient": str(E.integral_coefficient), **K.to_json()}, out)
    elif cmd == "figure":
        n = args.n
        g = get_rule(f"g{n}", digits=digits, nodes_file=args.nodes_file)
        lob = get_rule(f"lob{n + 1}", digits=digits, nodes_file=args.nodes_file)
        rule = combine([(Fraction(1, 2), g), (Fraction(1, 2), lob)])
        _write_samples(kernel_sample_numeric(rule, 2 * n, args.grid, digits), digits, out)
    elif cmd == "compare":
        f = corpus_function(args.fn)
        report = compare_remainders(f, args.n, digits, interval=(args.a, args.b))
        _dump({"function": f.name, **report.to_json()}, out)
    elif cmd == "enclose":
        f = corpus_function(args.fn)
        try:
            result = composite_enclose(f, args.a, args.b, args.n, args.tol, max_depth=args.max_depth, digits=digits)
        except EnclosureDepthError as exc:
            print(f"peanoquad: error: {exc} (achieved width {exc.width})", file=sys.stderr)
            return 1
        body = {"function": f.name, **result.to_json()}
        if result.certified:
            body["decimal"] = list(to_decimal_pair(RationalInterval(result.lower, result.upper), 25))
        _dump(body, out)
    elif cmd == "counterexample":
        _dump(radau_counterexample(digits).to_json(), out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
