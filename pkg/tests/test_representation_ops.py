"""drho and dpi' against symbolic differentiation, and their algebraic identities."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import SYMS, from_sympy, polynomials, rational_matrices, to_sympy
from gkmod.closed_forms import FIELDS, apply_field, apply_field_on_gaussian, compare_with_fields
from gkmod.gaussian import GaussianRational
from gkmod.lie import GroupElement, Matrix, ad_action, bracket, determinant, sl2_adjoint, sl2_standard
from gkmod.operators import (DPI_PRIME, DRHO, IdealNotPreserved, OperatorWord, ad_equivariance_check,
                             apply_combination, apply_dpi_prime, apply_drho, apply_op, apply_word,
                             check_hom_identity, equivariance_sides, rho_substitute, unit_grid)
from gkmod.polynomial import Polynomial, parse_polynomial
from gkmod.variety import Variety, hyperboloid

STD, ADJ = sl2_standard(), sl2_adjoint()
matrices2 = rational_matrices(2).map(Matrix)


def _sym_matrix(X: Matrix):
    return [[sympy.Rational(a.re.numerator, a.re.denominator) + sympy.I * sympy.Rational(
        a.im.numerator, a.im.denominator) for a in row] for row in X.rows]


def _sympy_flow_derivative(X: Matrix, expr, n):
    """d/dt f((I - tX) m) at t = 0."""
    t = sympy.Symbol("t")
    xs = SYMS[:n]
    A = _sym_matrix(X)
    moved = {xs[i]: xs[i] - t * sum(A[i][k] * xs[k] for k in range(n)) for i in range(n)}
    return sympy.diff(expr.subs(moved, simultaneous=True), t).subs(t, 0)


@given(matrices2, polynomials(2, max_degree=3))
def test_drho_matches_flow_derivative(X, p):
    expr = _sympy_flow_derivative(X, to_sympy(p), 2)
    assert from_sympy(expr, 2) == apply_drho(X, p)


@given(st.sampled_from([m for _, m in ADJ.basis] + list(ADJ.elements.values())), polynomials(3, max_degree=3))
def test_dpi_prime_matches_gaussian_derivative(X, p):
    xs = SYMS[:3]
    gauss = sympy.exp(-sum(x ** 2 for x in xs))
    expr = sympy.simplify(_sympy_flow_derivative(X, to_sympy(p) * gauss, 3) / gauss)
    assert from_sympy(expr, 3) == apply_dpi_prime(X, p)


def test_example1_known_values():
    Xp, Xm = STD.element("X+"), STD.element("X-")
    one = Polynomial.constant(2, 1)
    assert apply_dpi_prime(Xp, one) == parse_polynomial("-2*i*(q+)^2", 2)
    assert apply_dpi_prime(Xp, apply_dpi_prime(Xm, one)) == parse_polynomial("4*r2^2 - 8*r2", 2)
    for k in range(9):
        qk = parse_polynomial("q+", 2) ** k
        assert apply_drho(Xp, qk).is_zero()
        assert apply_drho(STD.element("H"), qk) == qk.scale(GaussianRational(0, k))


@pytest.mark.parametrize("lie", [STD, ADJ], ids=["standard", "adjoint"])
def test_closed_forms_exact(lie):
    res = compare_with_fields(lie, FIELDS[lie.name](), 6)
    for name, r in res.items():
        assert r["drho_matches"] and r["dpi_prime_matches"], (name, r["mismatched_monomials"])


def test_field_helpers():
    F = FIELDS["sl2_standard"]()["H"]
    assert apply_field(F, parse_polynomial("m1", 2)) == parse_polynomial("-m2", 2)
    assert apply_field_on_gaussian(F, Polynomial.constant(2, 1)).is_zero()


@given(st.sampled_from([m for _, m in ADJ.basis]), polynomials(3, max_degree=2), polynomials(3, max_degree=2))
def test_leibniz(X, p, q):
    assert apply_drho(X, p * q) == apply_drho(X, p) * q + p * apply_drho(X, q)
    # the Gaussian factor is differentiated once
    assert apply_dpi_prime(X, p * q) == apply_drho(X, p) * q + p * apply_dpi_prime(X, q)


@given(st.sampled_from([m for _, m in STD.basis]), st.integers(0, 6))
def test_degree_shift(X, l):
    for e in Variety(2).order.monomials_of_degree(l):
        m = Polynomial.monomial(e)
        assert apply_drho(X, m).homogeneous_degrees() <= {l}
        assert apply_dpi_prime(X, m).homogeneous_degrees() <= {l, l + 2}


@pytest.mark.parametrize("lie", [STD, ADJ], ids=["standard", "adjoint"])
@pytest.mark.parametrize("tag", [DRHO, DPI_PRIME])
def test_hom_identity_all_pairs(lie, tag):
    for _, X in lie.basis:
        for _, Y in lie.basis:
            assert check_hom_identity(X, Y, 4, tag=tag)


def test_hom_identity_on_hyperboloid():
    V = hyperboloid(1)
    for _, X in ADJ.basis:
        for _, Y in ADJ.basis:
            assert check_hom_identity(X, Y, 3, V)


def test_words_and_combinations():
    Xp, Xm = STD.element("X+"), STD.element("X-")
    one = Polynomial.constant(2, 1)
    w = OperatorWord.of([Xp, Xm], labels=["X+", "X-"])
    assert apply_word(w, one) == apply_dpi_prime(Xp, apply_dpi_prime(Xm, one))
    assert w.describe() == "X+*X-"
    assert apply_word(OperatorWord.identity(), one) == one
    both = apply_combination([(GaussianRational(1), w), (GaussianRational(-1), OperatorWord.of([Xm, Xp]))], one)
    assert both == apply_dpi_prime(bracket(Xp, Xm), one)
    with pytest.raises(ValueError):
        apply_op(Xp, "bogus", one)


@given(matrices2, matrices2, polynomials(2, max_degree=3))
def test_rho_is_a_representation(gm, hm, p):
    assume(not determinant(gm).is_zero() and not determinant(hm).is_zero())
    g, h = GroupElement.from_matrix(gm), GroupElement.from_matrix(hm)
    assert rho_substitute(g @ h, p) == rho_substitute(g, rho_substitute(h, p))


def test_rho_on_hyperboloid_requires_invariance():
    V = hyperboloid(1)
    p = parse_polynomial("m1*m3", 3)
    rot = GroupElement.from_matrix([[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0],
                                    [0, 0, 1]])
    assert rho_substitute(rot, p, V) == V.normal_form(rho_substitute(rot, p))
    with pytest.raises(IdealNotPreserved):
        rho_substitute(GroupElement.from_matrix(Matrix.diag(2, 1, 1)), p, V)


@given(matrices2, st.sampled_from([m for _, m in STD.basis]), polynomials(2, max_degree=3))
def test_equivariance_identity_exact(gm, X, p):
    assume(not determinant(gm).is_zero())
    g = GroupElement.from_matrix(gm)
    lhs, rhs, _ = equivariance_sides(g, X, p)
    assert lhs == rhs


def test_equivariance_residual_numeric():
    g = GroupElement.from_matrix([[1, Fraction(1, 3)], [0, 1]])
    X = STD.element("a3")
    assert ad_equivariance_check(g, X, parse_polynomial("q+^2", 2), unit_grid(2)) <= 1e-12
    assert len(unit_grid(3, 5)) == 125
