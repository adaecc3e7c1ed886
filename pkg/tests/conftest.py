from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import settings, strategies as st

from gkmod.gaussian import GaussianRational
from gkmod.polynomial import Polynomial

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SYMS = sympy.symbols("m1:5")


def to_sympy(p: Polynomial):
    xs = SYMS[: p.n]
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator)
        for x, k in zip(xs, e):
            term *= x ** k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, n: int) -> Polynomial:
    expr = sympy.expand(expr)
    if expr == 0:
        return Polynomial.zero(n)
    poly = sympy.Poly(expr, *SYMS[:n])
    terms = {}
    for e, c in poly.terms():
        re, im = sympy.re(c), sympy.im(c)
        terms[tuple(e)] = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return Polynomial(n, terms)


small_fraction = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gaussians = st.builds(GaussianRational, small_fraction, small_fraction)
nonzero_gaussians = gaussians.filter(lambda z: not z.is_zero())


def polynomials(n: int, max_degree: int = 3, max_terms: int = 5):
    exps = st.tuples(*[st.integers(0, max_degree) for _ in range(n)]).filter(lambda e: sum(e) <= max_degree)
    return st.dictionaries(exps, gaussians, max_size=max_terms).map(lambda d: Polynomial(n, d))


def rational_matrices(n: int, lo: int = -3, hi: int = 3):
    entry = st.builds(Fraction, st.integers(lo, hi), st.integers(1, 3))
    return st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)


# --- acceptance summary ------------------------------------------------------------

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
