"""gkmod: exact Lie algebra actions on p * exp(-r^2) modules.

Polynomial parts are manipulated exactly over Q(i); floats appear only in
:mod:`gkmod.approximation`.
"""

from .gaussian import GaussianRational, parse_scalar
from .kernel import BACKEND
from .lie import GroupElement, LieAlgebra, Matrix, ad_action, adjoint_embedding, bracket, preset
from .linalg import GradedSubspace, operator_matrix, subspace_from, subspace_ops
from .operators import (OperatorWord, ad_equivariance_check, apply_dpi_prime, apply_drho, apply_word,
                        check_hom_identity, rho_substitute)
from .polynomial import MonomialOrder, Polynomial, parse_polynomial, poly_arith
from .variety import Variety, affine_space, hyperboloid, normal_form, ring_mul

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GaussianRational", "GradedSubspace", "GroupElement", "LieAlgebra", "Matrix", "MonomialOrder",
    "OperatorWord", "Polynomial", "Variety", "ad_action", "ad_equivariance_check", "adjoint_embedding",
    "affine_space", "apply_dpi_prime", "apply_drho", "apply_word", "bracket", "check_hom_identity",
    "hyperboloid", "normal_form", "operator_matrix", "parse_polynomial", "parse_scalar", "poly_arith",
    "preset", "rho_substitute", "ring_mul", "subspace_from", "subspace_ops",
]
