"""Regenerate src/peanoquad/data/numeric_rules.json.

Nodes are computed with mpmath at 80 digits and written rounded to 50
significant digits.  Values that are exactly rational (0, +-1, Lobatto
endpoint weights) are written as "p/q" strings.
"""

import json
from fractions import Fraction
from pathlib import Path

import mpmath as mp

DIGITS = 50
mp.mp.dps = 80


def dec(x) -> str:
    return mp.nstr(mp.mpf(x), DIGITS, min_fixed=-mp.inf, max_fixed=mp.inf, strip_zeros=False)


def legendre_roots(n):
    roots = []
    for i in range(1, n + 1):
        guess = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        roots.append(mp.findroot(lambda t: mp.legendre(n, t), guess))
    return sorted(roots)


def gauss(n):
    out = []
    for x in legendre_roots(n):
        dp = mp.diff(lambda t: mp.legendre(n, t), x)
        w = 2 / ((1 - x**2) * dp**2)
        out.append((x, w))
    return out


def lobatto(m):
    # interior nodes: roots of P'_{m-1}
    n = m - 1
    dp = lambda t: mp.diff(lambda s: mp.legendre(n, s), t)
    interior = []
    for i in range(1, m - 1):
        guess = -mp.cos(mp.pi * i / n)
        interior.append(mp.findroot(dp, guess))
    interior.sort()
    end_w = Fraction(2, m * (m - 1))
    pts = [(Fraction(-1), end_w)]
    for x in interior:
        pts.append((x, mp.mpf(2) / (m * (m - 1) * mp.legendre(n, x) ** 2)))
    pts.append((Fraction(1), end_w))
    return pts


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if abs(v) < mp.mpf(10) ** (-70):
        return "0"
    return dec(v)


rules = {}
for n in (4, 5):
    rules[f"g{n}"] = {"points": [[fmt(x), fmt(w)] for x, w in gauss(n)], "exactness": 2 * n - 1}
for m in (5, 6):
    rules[f"lob{m}"] = {"points": [[fmt(x), fmt(w)] for x, w in lobatto(m)], "exactness": 2 * m - 3}

doc = {"version": 1, "digits": DIGITS, "rules": rules}
path = Path(__file__).resolve().parents[1] / "src" / "peanoquad" / "data" / "numeric_rules.json"
path.write_text(json.dumps(doc, indent=2) + "\n")
print(path)
