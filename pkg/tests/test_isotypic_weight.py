"""Isotypic projections for the torus K and Cartan weight spaces."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import polynomials
from gkmod.gaussian import GaussianRational
from gkmod.isotypic import (IsotypicError, NonSemisimpleDefect, candidate_indices, full_truncation,
                            isotypic_components, isotypic_decompose, isotypic_dims, isotypic_project,
                            linear_weights, projector_identities_check, weight_of, weight_space)
from gkmod.lie import A1, A2, A3, LieAlgebra, bracket, sl2_adjoint, sl2_standard
from gkmod.linalg import subspace_from
from gkmod.operators import apply_dpi_prime, apply_drho
from gkmod.polynomial import Polynomial, parse_polynomial
from gkmod.variety import Variety, hyperboloid

STD, ADJ = sl2_standard(), sl2_adjoint()


def _torus_eigen_multiplicities(lie, D):
    """Oracle: eigenvalues of -i drho(k) on C^{<=D}, from a sympy matrix."""
    V = Variety(lie.ambient_dim)
    basis = V.monomial_basis(D)
    index = {e: j for j, e in enumerate(basis)}
    M = sympy.zeros(len(basis), len(basis))
    for j, e in enumerate(basis):
        img = apply_drho(lie.k_generator, Polynomial.monomial(e)).scale(GaussianRational(0, -1))
        for f, c in img.terms.items():
            M[index[f], j] = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
                c.im.numerator, c.im.denominator)
    return {int(k): v for k, v in M.eigenvals().items()}


@pytest.mark.parametrize("lie", [STD, ADJ], ids=["standard", "adjoint"])
def test_isotypic_dims_match_eigenvalue_oracle(lie):
    D = 4
    dims = isotypic_dims(full_truncation(Variety(lie.ambient_dim), D), lie)
    assert dims == _torus_eigen_multiplicities(lie, D)


def test_linear_weights():
    assert sorted(linear_weights(STD)) == [-1, 1]
    assert sorted(linear_weights(ADJ)) == [-2, 0, 2]
    assert candidate_indices(STD, 2) == [-2, -1, 0, 1, 2]


@given(st.integers(0, 4), st.integers(0, 4))
def test_monomials_in_q_are_eigenvectors(a, b):
    p = parse_polynomial("q+", 2) ** a * parse_polynomial("q-", 2) ** b
    assert isotypic_project(a - b, p, STD) == p
    assert isotypic_project(a - b + 1, p, STD).is_zero()


@given(polynomials(2, max_degree=4))
def test_components_are_eigenvectors_summing_to_p(p):
    comps = isotypic_components(p, STD)
    total = Polynomial.zero(2)
    for n, c in comps.items():
        assert apply_drho(STD.k_generator, c) == c.scale(GaussianRational(0, n))
        total = total + c
    assert total == p


@given(polynomials(3, max_degree=3))
def test_projection_idempotent_on_hyperboloid(p):
    V = hyperboloid(1)
    p = V.normal_form(p)
    for n, c in isotypic_components(p, ADJ, V).items():
        assert isotypic_project(n, c, ADJ, V) == c


@pytest.mark.parametrize("lie", [STD, ADJ], ids=["standard", "adjoint"])
def test_projector_identities(lie):
    assert projector_identities_check(candidate_indices(lie, 4), 4, lie)


def test_projector_identities_on_hyperboloid():
    V = hyperboloid(1)
    assert projector_identities_check(candidate_indices(ADJ, 3), 3, ADJ, V)
    full = full_truncation(V, 3)
    assert sum(isotypic_dims(full, ADJ, V).values()) == full.dim


def test_project_degree_guard():
    with pytest.raises(ValueError):
        isotypic_project(0, parse_polynomial("m1^3", 2), STD, D=2)


def test_decompose_rejects_non_invariant_subspace():
    S = subspace_from([parse_polynomial("m1", 2)], 2)
    with pytest.raises(IsotypicError):
        isotypic_decompose(S, STD)


def test_non_compact_torus_rejected():
    lie = LieAlgebra(2, [("a1", A1), ("a2", A2), ("a3", A3)], k_generator=A3)
    with pytest.raises(IsotypicError):
        isotypic_components(parse_polynomial("m1", 2), lie)


def test_non_integer_weights_are_a_defect():
    half = (A1 - A2).scale(Fraction(1, 2))
    lie = LieAlgebra(2, [("a1", A1), ("a2", A2), ("a3", A3)], k_generator=half)
    with pytest.raises(NonSemisimpleDefect):
        linear_weights(lie)


def test_missing_torus():
    lie = LieAlgebra(2, [("a1", A1), ("a2", A2), ("a3", A3)])
    with pytest.raises(IsotypicError):
        linear_weights(lie)


@pytest.mark.parametrize("D", [2, 4])
def test_weight_spaces_fill_truncation(D):
    total = 0
    for n in candidate_indices(STD, D):
        total += weight_space([GaussianRational(0, n)], STD, D=D).dim
    assert total == full_truncation(Variety(2), D).dim


def _root(lie, E):
    H = lie.cartan[0]
    br = bracket(H, E)
    for a, b in zip(br.flatten(), E.flatten()):
        if not b.is_zero():
            return a / b


@pytest.mark.parametrize("lie", [STD, ADJ], ids=["standard", "adjoint"])
def test_weight_ladder(lie):
    D = 3
    roots = [(E, _root(lie, E)) for E in lie.pos_root_vectors + lie.neg_root_vectors]
    for n in candidate_indices(lie, D):
        lam = GaussianRational(0, n)
        for b in weight_space([lam], lie, D=D).basis:
            assert weight_of(b, lie) == (lam,)
            for E, alpha in roots:
                img = apply_dpi_prime(E, b)
                if not img.is_zero():
                    assert weight_of(img, lie) == (lam + alpha,)


def test_weight_of_non_eigenvector():
    assert weight_of(parse_polynomial("m1", 2), STD) is None
    assert weight_of(Polynomial.zero(2), STD) is None
    assert weight_of(parse_polynomial("q+", 2), STD) == (GaussianRational(0, 1),)


def test_weight_space_argument_checks():
    with pytest.raises(ValueError):
        weight_space([], STD, D=2)
    with pytest.raises(ValueError):
        weight_space([0, 0], STD, D=2)
