"""Matrix Lie algebras, group elements and the adjoint embedding."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import rational_matrices
from gkmod.gaussian import GaussianRational, I
from gkmod.lie import (A1, A2, A3, ADJOINT_COORDINATES, H_STD, X_MINUS_STD, X_PLUS_STD, GroupElement, LieAlgebra,
                       Matrix, ad_action, adjoint_embedding, bracket, coordinates_in, det_one, determinant, preset,
                       sl2_adjoint, sl2_standard)

matrices2 = rational_matrices(2).map(Matrix)
matrices3 = rational_matrices(3).map(Matrix)


def _sym(m: Matrix):
    return sympy.Matrix([[sympy.Rational(a.re.numerator, a.re.denominator) + sympy.I * sympy.Rational(
        a.im.numerator, a.im.denominator) for a in row] for row in m.rows])


def _invertible(m: Matrix) -> bool:
    return not determinant(m).is_zero()


def test_example1_brackets():
    assert bracket(X_PLUS_STD, X_MINUS_STD) == H_STD.scale(GaussianRational(0, -4))
    assert bracket(H_STD, X_PLUS_STD) == X_PLUS_STD.scale(GaussianRational(0, 2))
    assert bracket(H_STD, X_MINUS_STD) == X_MINUS_STD.scale(GaussianRational(0, -2))


@given(matrices3)
def test_bracket_antisymmetric(X):
    assert bracket(X, X).is_zero()


@given(matrices3, matrices3)
def test_bracket_matches_sympy(X, Y):
    assert _sym(bracket(X, Y)) == _sym(X) * _sym(Y) - _sym(Y) * _sym(X)


@given(matrices2, matrices2, matrices2)
def test_jacobi(X, Y, Z):
    total = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert total.is_zero()


@pytest.mark.parametrize("lie", [sl2_standard(), sl2_adjoint()], ids=["standard", "adjoint"])
def test_jacobi_on_basis_triples_and_structure_constants(lie):
    mats = [m for _, m in lie.basis]
    for i, X in enumerate(mats):
        for j, Y in enumerate(mats):
            for Z in mats:
                J = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
                assert J.is_zero()
            if i < j:
                assert lie.bracket_from_constants(i, j) == bracket(X, Y)


def test_ad_action_examples():
    g = GroupElement.from_matrix([[2, 0], [0, Fraction(1, 2)]])
    assert ad_action(g, A1) == A1.scale(4)
    assert ad_action(GroupElement.from_matrix(Matrix.identity(2)), A3) == A3


@given(matrices2, matrices2, matrices2, matrices2)
def test_ad_is_an_action_and_preserves_brackets(gm, hm, X, Y):
    assume(_invertible(gm) and _invertible(hm))
    g, h = GroupElement.from_matrix(gm), GroupElement.from_matrix(hm)
    assert ad_action(g @ h, X) == ad_action(g, ad_action(h, X))
    assert ad_action(g, bracket(X, Y)) == bracket(ad_action(g, X), ad_action(g, Y))


@given(matrices3)
def test_group_inverse_matches_sympy(m):
    assume(_invertible(m))
    g = GroupElement.from_matrix(m)
    assert _sym(g.inverse) == _sym(m).inv()
    assert (g @ g.inv()).matrix == Matrix.identity(3)


def test_group_element_checks():
    with pytest.raises(ValueError):
        GroupElement(Matrix.identity(2), Matrix.diag(1, 2))
    with pytest.raises(ValueError):
        GroupElement.from_matrix([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        GroupElement.from_matrix(Matrix.diag(2, 1), det_one)
    assert GroupElement.from_matrix(Matrix.diag(2, Fraction(1, 2)), det_one).n == 2


def test_lie_algebra_validation():
    with pytest.raises(ValueError):
        LieAlgebra(2, [("a1", A1), ("b", A1.scale(2))])
    with pytest.raises(ValueError):
        LieAlgebra(2, [("a1", A1), ("a2", A2)])  # [a1, a2] = a3 is missing
    with pytest.raises(ValueError):
        LieAlgebra(2, [("a1", A1), ("a2", A2), ("a3", A3)], cartan=[A1, A3])


def test_adjoint_matrices():
    lie = sl2_adjoint()
    assert lie.element("H") == Matrix([[0, -2, 0], [2, 0, 0], [0, 0, 0]])
    assert lie.element("X+") == Matrix([[0, 0, GaussianRational(0, -2)], [0, 0, -2], [GaussianRational(0, -2), -2, 0]])


def test_adjoint_is_a_homomorphism():
    std, adj = sl2_standard(), sl2_adjoint()
    for (a, X), (_, aX) in zip(std.basis, adj.basis):
        for (b, Y), (_, aY) in zip(std.basis, adj.basis):
            c = coordinates_in([m for _, m in std.basis], bracket(X, Y))
            expected = Matrix.zero(3)
            for coef, (_, m) in zip(c, adj.basis):
                expected = expected + m.scale(coef)
            assert bracket(aX, aY) == expected


def test_adjoint_kills_own_coordinates():
    # ad(X) applied to the coordinates of X is zero
    adj = sl2_adjoint()
    std = sl2_standard()
    for (_, X), (_, aX) in zip(std.basis, adj.basis):
        m = coordinates_in(list(ADJOINT_COORDINATES), X)
        assert all(v.is_zero() for v in aX.apply(m))


def test_adjoint_rejects_dependent_coordinates():
    with pytest.raises(ValueError):
        adjoint_embedding(sl2_standard(), [A1, A1, A3])


def test_presets():
    assert preset("sl2_standard").ambient_dim == 2
    assert preset("sl2_adjoint").ambient_dim == 3
    with pytest.raises(KeyError):
        preset("so3")


def test_matrix_json_round_trip():
    from gkmod.config import _matrix

    m = X_PLUS_STD
    assert _matrix(m.to_json(), 2, "m") == m
