"""Differential operators on polynomial parts: drho, dpi', words and substitution.

A function phi = p * exp(-r^2) is stored through its polynomial part p.  The
Lie algebra acts on p by

    drho(X) p   = -sum_{i,k} X_ik m_k d_i p
    dpi'(X) p   = drho(X) p - (drho(X) r^2) p

and the group acts by rho(g) p = p(g^{-1} m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .gaussian import ZERO, GaussianRational
from .lie import GroupElement, Matrix, ad_action, bracket
from .polynomial import Exponents, Polynomial
from .variety import Variety

DRHO = "drho"
DPI_PRIME = "dpi_prime"
TAGS = (DRHO, DPI_PRIME)


class IdealNotPreserved(ValueError):
    pass


def _drho_raw(X: Matrix, p: Polynomial) -> Polynomial:
    n = p.n
    if X.n != n:
        raise ValueError(f"{X.n}x{X.n} matrix acting on polynomials in {n} variables")
    rows = X.rows
    out: Dict[Exponents, GaussianRational] = {}
    for e, c in p.terms.items():
        for i in range(n):
            k = e[i]
            if not k:
                continue
            base = list(e)
            base[i] = k - 1
            ck = c * (-k)
            for j in range(n):
                x = rows[i][j]
                if x.is_zero():
                    continue
                base[j] += 1
                f = tuple(base)
                base[j] -= 1
                v = ck * x
                s = out.get(f)
                out[f] = v if s is None else s + v
    return Polynomial(n, {f: c for f, c in out.items() if not c.is_zero()}, _clean=True)


@lru_cache(maxsize=256)
def drho_r_squared(X: Matrix) -> Polynomial:
    """drho(X) r^2 = -2 <m, X m> in ambient coordinates."""
    return _drho_raw(X, Polynomial.r_squared(X.n))


def apply_drho(X: Matrix, p: Polynomial, V: Variety | None = None) -> Polynomial:
    q = _drho_raw(X, p)
    return V.normal_form(q) if V is not None else q


def apply_dpi_prime(X: Matrix, p: Polynomial, V: Variety | None = None) -> Polynomial:
    q = _drho_raw(X, p) - drho_r_squared(X) * p
    return V.normal_form(q) if V is not None else q


def apply_op(X: Matrix, tag: str, p: Polynomial, V: Variety | None = None) -> Polynomial:
    if tag == DPI_PRIME:
        return apply_dpi_prime(X, p, V)
    if tag == DRHO:
        return apply_drho(X, p, V)
    raise ValueError(f"unknown operator tag {tag!r}; expected one of {TAGS}")


@dataclass(frozen=True)
class OperatorWord:
    """A product of tagged generators, applied right to left."""

    factors: Tuple[Tuple[Matrix, str], ...] = ()
    labels: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for _, tag in self.factors:
            if tag not in TAGS:
                raise ValueError(f"unknown operator tag {tag!r}")

    @classmethod
    def identity(cls) -> "OperatorWord":
        return cls()

    @classmethod
    def of(cls, mats: Sequence[Matrix], tag: str = DPI_PRIME, labels: Sequence[str] = ()) -> "OperatorWord":
        return cls(tuple((m, tag) for m in mats), tuple(labels))

    def __len__(self):
        return len(self.factors)

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        return OperatorWord(self.factors + other.factors, self.labels + other.labels)

    def describe(self) -> str:
        if not self.factors:
            return "1"
        if self.labels and len(self.labels) == len(self.factors):
            return "*".join(self.labels)
        return "*".join(f"<{i}>" for i in range(len(self.factors)))


def apply_word(w: OperatorWord, p: Polynomial, V: Variety | None = None) -> Polynomial:
    for X, tag in reversed(w.factors):
        if p.is_zero():
            return p
        p = apply_op(X, tag, p, V)
    return p


def apply_combination(terms: Iterable[Tuple[GaussianRational, OperatorWord]], p: Polynomial,
                      V: Variety | None = None) -> Polynomial:
    """Apply a linear combination of words (an element of the enveloping algebra)."""
    out = Polynomial.zero(p.n)
    for c, w in terms:
        out = out + apply_word(w, p, V).scale(c)
    return out


def rho_substitute(g: GroupElement, p: Polynomial, V: Variety | None = None) -> Polynomial:
    """rho(g) p = p(g^{-1} m), reduced on V."""
    if g.n != p.n:
        raise ValueError(f"{g.n}x{g.n} group element acting on polynomials in {p.n} variables")
    if V is not None and V.ideal_generator is not None:
        image = V.normal_form(V.ideal_generator.substitute_linear(g.inverse.rows))
        if not image.is_zero():
            raise IdealNotPreserved(
                f"g does not preserve the ideal: rho(g) applied to the generator reduces to {image}")
    q = p.substitute_linear(g.inverse.rows)
    return V.normal_form(q) if V is not None else q


def check_hom_identity(X: Matrix, Y: Matrix, D: int, V: Variety | None = None,
                       tag: str = DPI_PRIME) -> bool:
    """Exact check of op([X,Y]) = op(X)op(Y) - op(Y)op(X) on all monomials of degree <= D."""
    n = X.n
    V = V if V is not None else Variety(n)
    Z = bracket(X, Y)
    for e in V.monomial_basis(D):
        m = Polynomial.monomial(e)
        lhs = apply_op(Z, tag, m, V)
        rhs = apply_op(X, tag, apply_op(Y, tag, m, V), V) - apply_op(Y, tag, apply_op(X, tag, m, V), V)
        if lhs != rhs:
            return False
    return True


def _eval_weighted(p: Polynomial, s: Polynomial, pts: np.ndarray) -> np.ndarray:
    return p.evaluate_numeric(pts) * np.exp(-s.evaluate_numeric(pts))


def equivariance_sides(g: GroupElement, X: Matrix, p: Polynomial) -> Tuple[Polynomial, Polynomial, Polynomial]:
    """Polynomial parts of both sides of pi(g) dpi(X) phi = dpi(Ad(g)X) pi(g) phi.

    Both sides equal (polynomial) * exp(-rho(g) r^2); the shared exponent is
    returned third.
    """
    n = p.n
    s = rho_substitute(g, Polynomial.r_squared(n))
    lhs = rho_substitute(g, apply_dpi_prime(X, p))
    Y = ad_action(g, X)
    q = rho_substitute(g, p)
    rhs = _drho_raw(Y, q) - _drho_raw(Y, s) * q
    return lhs, rhs, s


def ad_equivariance_check(g: GroupElement, X: Matrix, phi: Polynomial, sample_points) -> float:
    """Max pointwise |pi(g) dpi(X) phi - dpi(Ad(g) X) pi(g) phi| over the sample points."""
    pts = np.asarray([[float(complex(x).real) for x in pt] for pt in sample_points], dtype=float)
    if phi.is_zero() or len(pts) == 0:
        return 0.0
    lhs, rhs, s = equivariance_sides(g, X, phi)
    diff = _eval_weighted(lhs, s, pts) - _eval_weighted(rhs, s, pts)
    return float(np.max(np.abs(diff)))


def unit_grid(n: int, points_per_axis: int = 5) -> List[Tuple[float, ...]]:
    axis = np.linspace(-1.0, 1.0, points_per_axis)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return [tuple(v) for v in np.stack([m.ravel() for m in mesh], axis=1)]
