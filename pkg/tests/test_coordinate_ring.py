"""Normal forms on R^n and on the hyperboloids N_xi."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import SYMS, from_sympy, polynomials, to_sympy
from gkmod.gaussian import GaussianRational
from gkmod.polynomial import Polynomial, parse_polynomial
from gkmod.variety import Variety, affine_space, hyperboloid, normal_form, ring_mul

N1 = hyperboloid(1)
xis = st.sampled_from([Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 3)])
nonzero_small = st.builds(Fraction, st.integers(1, 5), st.integers(1, 3)).flatmap(
    lambda f: st.sampled_from([f, -f]))


def _point_on(xi, s, t, u):
    # (m3 - m1)(m3 + m1) = xi + m2^2 with m3 - m1 = u
    v = (xi + s * s) / u
    return ((v - u) / 2, s, (u + v) / 2)


@given(polynomials(3, max_degree=4))
def test_normal_form_idempotent(p):
    q = N1.normal_form(p)
    assert N1.normal_form(q) == q


@given(polynomials(3), polynomials(3))
def test_normal_form_is_ring_homomorphism(p, q):
    assert N1.normal_form(p * q) == N1.ring_mul(N1.normal_form(p), N1.normal_form(q))
    assert N1.normal_form(p + q) == N1.normal_form(p) + N1.normal_form(q)


@given(polynomials(3, max_degree=4), xis, st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)), nonzero_small)
def test_normal_form_preserves_values_on_rational_points(p, xi, s, u):
    V = hyperboloid(xi)
    pt = _point_on(xi, s, None, u)
    assert V.contains_point(pt)
    assert V.normal_form(p).evaluate(pt) == p.evaluate(pt)


@given(polynomials(3, max_degree=4))
def test_normal_form_matches_sympy_reduction(p):
    m1, m2, m3 = SYMS[:3]
    gen = -m1 ** 2 - m2 ** 2 + m3 ** 2 - 1
    _, rem = sympy.reduced(to_sympy(p), [gen], m3, m1, m2, order="grlex")
    assert from_sympy(rem, 3) == N1.normal_form(p)


def test_normal_forms_are_free_of_lead_power():
    for e in N1.monomial_basis(5):
        assert e[2] < 2


@pytest.mark.parametrize("xi", [1, 2, -1])
def test_lead_power_rewrite(xi):
    V = hyperboloid(xi)
    assert V.normal_form(parse_polynomial("m3^2", 3)) == parse_polynomial(f"m1^2 + m2^2 + ({xi})", 3)
    assert V.ring_mul(parse_polynomial("m3", 3), parse_polynomial("m3", 3)) == V.normal_form(
        parse_polynomial("m3^2", 3))
    assert V.normal_form(parse_polynomial("-m1^2-m2^2+m3^2", 3)) == Polynomial.constant(3, xi)


def test_truncation_dims():
    assert affine_space(2).truncation_dim(6) == 28
    # degree-d normal monomials on N_xi: (d+1) + d
    assert N1.truncation_dim(4) == sum(2 * d + 1 for d in range(5))


def test_generator_in_ideal():
    assert N1.normal_form(N1.ideal_generator).is_zero()


def test_affine_space_is_identity():
    p = parse_polynomial("m1^5 - i*m2", 2)
    assert normal_form(p, affine_space(2)) == p
    assert ring_mul(p, p, affine_space(2)) == p * p


def test_rejects_non_pure_power_lead():
    with pytest.raises(ValueError):
        Variety(2, parse_polynomial("m1*m2 - 1", 2))


def test_rejects_constant_generator():
    with pytest.raises(ValueError):
        Variety(2, Polynomial.constant(2, 3))


def test_ranking_changes_eliminated_variable():
    V = Variety(2, parse_polynomial("m1^2 + m2^2 - 1", 2), ranking=(1, 0))
    assert V.normal_form(parse_polynomial("m2^2", 2)) == parse_polynomial("1 - m1^2", 2)
