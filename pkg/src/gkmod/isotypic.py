"""Torus-isotypic projections and Cartan weight spaces at degree truncation.

The compact torus K = exp(R k) acts on polynomials through rho; its
infinitesimal generator acts by drho(k).  The component of p of character
index n is the part of p in the eigenspace drho(k) q = i n q, with
T = -i drho(k).  Every result is checked: the components must be eigenvectors
of T and must add up to p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

from .gaussian import GaussianRational
from .lie import LieAlgebra, Matrix
from .linalg import GradedSubspace, dense_rank, kernel_of_maps
from .operators import apply_dpi_prime, apply_drho, drho_r_squared
from .polynomial import Polynomial, default_order
from .variety import Variety

NEG_I = GaussianRational(0, -1)


class IsotypicError(ValueError):
    pass


class NonSemisimpleDefect(IsotypicError):
    """The torus generator does not act semisimply with integer weights."""


@dataclass(frozen=True)
class WeightVector:
    lambda_values: tuple
    vector: Polynomial


def _require_torus(lie: LieAlgebra, V: Variety) -> Matrix:
    k = lie.k_generator
    if k is None:
        raise IsotypicError("Lie algebra has no k_generator (torus K undefined)")
    if not V.normal_form(drho_r_squared(k)).is_zero():
        raise IsotypicError("r^2 is not invariant under the torus generator")
    return k


def _T(k: Matrix, p: Polynomial, V: Variety) -> Polynomial:
    return apply_drho(k, p, V).scale(NEG_I)


def linear_weights(lie: LieAlgebra, V: Variety | None = None, bound: int = 64) -> List[int]:
    """Integer torus weights on the linear forms, with multiplicity."""
    if lie.k_generator is None:
        raise IsotypicError("Lie algebra has no k_generator (torus K undefined)")
    return _linear_weights_of(lie.k_generator, bound)


def _linear_weights_of(k: Matrix, bound: int = 64) -> List[int]:
    n = k.n
    # matrix of T on span{m_1..m_n}: column j = coordinates of T m_j
    cols = []
    for j in range(n):
        image = _T(k, Polynomial.variable(n, j), None)
        cols.append([image.coefficient(tuple(1 if t == i else 0 for t in range(n))) for i in range(n)])
    A = [[cols[j][i] for j in range(n)] for i in range(n)]
    weights: List[int] = []
    for w in range(-bound, bound + 1):
        shifted = [[A[i][j] - (w if i == j else 0) for j in range(n)] for i in range(n)]
        mult = n - dense_rank(shifted)
        weights.extend([w] * mult)
    if len(weights) != n:
        raise NonSemisimpleDefect(
            f"torus generator has {len(weights)} integer eigen-directions on linear forms, expected {n}")
    return weights


def candidate_indices(lie: LieAlgebra, degree: int) -> List[int]:
    ws = sorted(set(linear_weights(lie)))
    sums = {0}
    layer = {0}
    for _ in range(max(degree, 0)):
        layer = {a + w for a in layer for w in ws}
        sums |= layer
    return sorted(sums)


def _lagrange_coefficients(nodes: Sequence[int], target: int) -> List[Fraction]:
    """Coefficients (ascending powers) of prod_{u != target} (t - u)/(target - u)."""
    poly = [Fraction(1)]
    for u in nodes:
        if u == target:
            continue
        scale = Fraction(1, target - u)
        new = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] += c * scale
            new[i] -= c * u * scale
        poly = new
    return poly


_EIGEN_CACHE: Dict[Matrix, tuple] = {}


def _eigen_coordinates(k: Matrix):
    """(B, B^{-1}, weights) with y = B m a basis of torus eigen-forms, or None."""
    if k in _EIGEN_CACHE:
        return _EIGEN_CACHE[k]
    n = k.n
    linear = [Polynomial.variable(n, j) for j in range(n)]
    forms: List[Polynomial] = []
    weights: List[int] = []
    for w in sorted(set(_linear_weights_of(k))):
        ker = kernel_of_maps(linear, [lambda p, w=w: _T(k, p, None) - p.scale(w)], default_order(n), 1)
        for b in ker.basis:
            forms.append(b)
            weights.append(w)
    result = None
    if len(forms) == n:
        unit = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
        B = Matrix([[f.coefficient(u) for u in unit] for f in forms])
        result = (B, B.inverse(), tuple(weights))
    _EIGEN_CACHE[k] = result
    return result


def _components_by_coordinates(p: Polynomial, k: Matrix, V: Variety):
    data = _eigen_coordinates(k)
    if data is None:
        return None
    B, Binv, weights = data
    pt = p.substitute_linear(Binv.rows)
    groups: Dict[int, Dict] = {}
    for e, c in pt.terms.items():
        w = sum(a * b for a, b in zip(e, weights))
        groups.setdefault(w, {})[e] = c
    out = {}
    for w in sorted(groups):
        comp = V.normal_form(Polynomial(p.n, groups[w], _clean=True).substitute_linear(B.rows))
        if not comp.is_zero():
            out[w] = comp
    return out


def _components_by_krylov(p: Polynomial, k: Matrix, V: Variety, nodes: Sequence[int]):
    krylov = [p]
    for _ in range(len(nodes) - 1):
        krylov.append(_T(k, krylov[-1], V))
    out: Dict[int, Polynomial] = {}
    for w in nodes:
        comp = Polynomial.zero(p.n)
        for c, v in zip(_lagrange_coefficients(nodes, w), krylov):
            if c:
                comp = comp + v.scale(GaussianRational(c))
        if not comp.is_zero():
            out[w] = comp
    return out


def _verified(p: Polynomial, comps: Dict[int, Polynomial], k: Matrix, V: Variety) -> bool:
    total = Polynomial.zero(p.n)
    for w, c in comps.items():
        if _T(k, c, V) != c.scale(w):
            return False
        total = total + c
    return total == p


def isotypic_components(p: Polynomial, lie: LieAlgebra, V: Variety | None = None,
                        nodes: Sequence[int] | None = None) -> Dict[int, Polynomial]:
    """All nonzero isotypic components of p, verified to sum to p.

    The fast path rewrites p in torus eigen-coordinates, where every monomial
    is an eigenvector; the Krylov/interpolation path is the fallback.
    """
    V = V if V is not None else Variety(p.n)
    k = _require_torus(lie, V)
    if p.is_zero():
        return {}
    comps = _components_by_coordinates(p, k, V)
    if comps is not None and _verified(p, comps, k, V):
        return comps
    if nodes is None:
        nodes = candidate_indices(lie, int(p.degree()))
    comps = _components_by_krylov(p, k, V, nodes)
    if not _verified(p, comps, k, V):
        raise NonSemisimpleDefect("isotypic components do not reconstruct the input as eigenvectors; "
                                  "the torus generator is not semisimple with integer weights here")
    return comps


def isotypic_project(n: int, p: Polynomial, lie: LieAlgebra, V: Variety | None = None,
                     D: int | None = None) -> Polynomial:
    if D is not None and p.degree() > D:
        raise ValueError(f"polynomial of degree {p.degree()} exceeds bound {D}")
    return isotypic_components(p, lie, V).get(n, Polynomial.zero(p.n))


def isotypic_decompose(S: GradedSubspace, lie: LieAlgebra, V: Variety | None = None) -> Dict[int, GradedSubspace]:
    """Split a torus-invariant subspace into its isotypic parts."""
    n = S.ambient_dim
    V = V if V is not None else Variety(n)
    k = _require_torus(lie, V)
    parts: Dict[int, List[Polynomial]] = {}
    for b in S.basis:
        if not S.contains(apply_drho(k, b, V)):
            raise IsotypicError("subspace is not invariant under the torus generator")
        for w, c in isotypic_components(b, lie, V).items():
            parts.setdefault(w, []).append(c)
    out = {w: GradedSubspace(S.order, S.max_degree, vs) for w, vs in sorted(parts.items())}
    if sum(s.dim for s in out.values()) != S.dim:
        raise NonSemisimpleDefect("isotypic parts do not fill the subspace")
    return out


def isotypic_dims(S: GradedSubspace, lie: LieAlgebra, V: Variety | None = None) -> Dict[int, int]:
    return {w: s.dim for w, s in isotypic_decompose(S, lie, V).items()}


def full_truncation(V: Variety, D: int) -> GradedSubspace:
    n = V.ambient_dim
    return GradedSubspace(V.order, D, [Polynomial.monomial(e) for e in V.monomial_basis(D)])


def projector_identities_check(indices: Iterable[int], D: int, lie: LieAlgebra,
                               V: Variety | None = None) -> bool:
    """Idempotence, mutual orthogonality and completeness of the P(n) on degree <= D."""
    V = V if V is not None else Variety(lie.ambient_dim)
    indices = sorted(set(indices))
    nodes = sorted(set(candidate_indices(lie, D)) | set(indices))
    for e in V.monomial_basis(D):
        m = Polynomial.monomial(e)
        comps = isotypic_components(m, lie, V, nodes)
        proj = {w: comps.get(w, Polynomial.zero(m.n)) for w in indices}
        for w, c in proj.items():
            again = isotypic_components(c, lie, V, nodes) if not c.is_zero() else {}
            if again.get(w, Polynomial.zero(m.n)) != c:
                return False
            for u in indices:
                if u != w and not again.get(u, Polynomial.zero(m.n)).is_zero():
                    return False
        total = Polynomial.zero(m.n)
        for c in proj.values():
            total = total + c
        if total != m:
            return False
    return True


def weight_space(lambda_values: Sequence, lie: LieAlgebra, V: Variety | None = None,
                 D: int = 0) -> GradedSubspace:
    """Joint kernel of dpi'(H_i) - lambda_i on the degree <= D truncation."""
    if not lie.cartan:
        raise IsotypicError("Lie algebra has no Cartan data")
    if not lambda_values:
        raise ValueError("empty weight: supply one value per Cartan element")
    if len(lambda_values) != len(lie.cartan):
        raise ValueError(f"{len(lambda_values)} weight values for {len(lie.cartan)} Cartan elements")
    V = V if V is not None else Variety(lie.ambient_dim)
    lams = [GaussianRational.coerce(x) for x in lambda_values]
    domain = [Polynomial.monomial(e) for e in V.monomial_basis(D)]
    maps = [(lambda p, H=H, lam=lam: apply_dpi_prime(H, p, V) - p.scale(lam))
            for H, lam in zip(lie.cartan, lams)]
    return kernel_of_maps(domain, maps, V.order, D)


def weight_of(p: Polynomial, lie: LieAlgebra, V: Variety | None = None):
    """The Cartan weight of p, or None if p is not a joint eigenvector of dpi'."""
    if p.is_zero() or not lie.cartan:
        return None
    lead = next(iter(p.terms))
    out = []
    for H in lie.cartan:
        image = apply_dpi_prime(H, p, V)
        lam = image.coefficient(lead) / p.terms[lead]
        if image != p.scale(lam):
            return None
        out.append(lam)
    return tuple(out)
