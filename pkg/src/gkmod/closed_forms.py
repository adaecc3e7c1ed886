"""Hand-written vector fields for the two sl(2) presets.

Each operator is a first-order differential operator sum_i F_i d_i, stored as
the list of coefficient polynomials F_i.  On functions p * exp(-r^2) the
operator acts on the polynomial part as F(p) - p F(r^2).
"""

from __future__ import annotations

from typing import Dict, List

from .lie import LieAlgebra
from .operators import apply_dpi_prime, apply_drho
from .polynomial import Polynomial, parse_polynomial
from .variety import Variety

VectorField = List[Polynomial]


def _field(n: int, *coeffs: str) -> VectorField:
    return [parse_polynomial(c, n) for c in coeffs]


def apply_field(F: VectorField, p: Polynomial) -> Polynomial:
    out = Polynomial.zero(p.n)
    for i, f in enumerate(F):
        if not f.is_zero():
            out = out + f * p.derivative(i)
    return out


def apply_field_on_gaussian(F: VectorField, p: Polynomial) -> Polynomial:
    """Polynomial part of F(p exp(-r^2))."""
    return apply_field(F, p) - p * apply_field(F, Polynomial.r_squared(p.n))


def sl2_standard_fields() -> Dict[str, VectorField]:
    # X+- = +-i q+- (d1 +- i d2),  H = m1 d2 - m2 d1
    return {
        "X+": _field(2, "i*(q+)", "-(q+)"),
        "X-": _field(2, "-i*(q-)", "-(q-)"),
        "H": _field(2, "-m2", "m1"),
    }


def sl2_adjoint_fields() -> Dict[str, VectorField]:
    # X+- = +-2i (m3 (d1 -+ i d2) + q-+ d3),  H = 2 (m2 d1 - m1 d2)
    return {
        "X+": _field(3, "2*i*m3", "2*m3", "2*i*(q-)"),
        "X-": _field(3, "-2*i*m3", "2*m3", "-2*i*(q+)"),
        "H": _field(3, "2*m2", "-2*m1", "0"),
    }


FIELDS = {"sl2_standard": sl2_standard_fields, "sl2_adjoint": sl2_adjoint_fields}


def compare_with_fields(lie: LieAlgebra, fields: Dict[str, VectorField], D: int) -> Dict[str, dict]:
    """Exact comparison of drho and dpi' with the vector fields on all monomials of degree <= D."""
    V = Variety(lie.ambient_dim)
    out = {}
    for name, F in fields.items():
        X = lie.element(name)
        bad_rho, bad_pi = [], []
        for e in V.monomial_basis(D):
            m = Polynomial.monomial(e)
            if apply_drho(X, m) != apply_field(F, m):
                bad_rho.append(list(e))
            if apply_dpi_prime(X, m) != apply_field_on_gaussian(F, m):
                bad_pi.append(list(e))
        out[name] = {"drho_matches": not bad_rho, "dpi_prime_matches": not bad_pi,
                     "mismatched_monomials": (bad_rho + bad_pi)[:5]}
    return out
