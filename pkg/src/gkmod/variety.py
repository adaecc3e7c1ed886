"""Coordinate rings C[M] of R^n or of a hypersurface {generator = 0}."""

from __future__ import annotations

from typing import Dict, List, Sequence

from .gaussian import ONE, GaussianRational
from .polynomial import Exponents, MonomialOrder, Polynomial


class Variety:
    """R^n, or the hypersurface cut out by one polynomial ``ideal_generator``.

    The generator's leading monomial under the variety's order must be a
    pure power m_v^e; reduction then replaces m_v^e by the remaining terms,
    which gives unique remainders without a Groebner basis.
    """

    def __init__(self, ambient_dim: int, ideal_generator: Polynomial | None = None,
                 ranking: Sequence[int] | None = None):
        self.ambient_dim = n = ambient_dim
        self.order = MonomialOrder(n, ranking)
        self.r_squared = Polynomial.r_squared(n)
        self.ideal_generator = None
        self._lead_var = None
        self._lead_pow = None
        self._rewrite = None
        if ideal_generator is not None and not ideal_generator.is_zero():
            if ideal_generator.n != n:
                raise ValueError(f"generator lives in {ideal_generator.n} variables, variety in {n}")
            lead = ideal_generator.leading_monomial(self.order)
            nonzero = [i for i, k in enumerate(lead) if k]
            if not nonzero:
                raise ValueError("ideal generator must be non-constant")
            if len(nonzero) != 1:
                raise ValueError(
                    f"leading monomial {lead} of the generator is not a pure power; "
                    "rank the eliminable variable highest")
            v = nonzero[0]
            lc = ideal_generator.terms[lead]
            rest = ideal_generator - Polynomial(n, {lead: lc}, _clean=True)
            self.ideal_generator = ideal_generator
            self._lead_var = v
            self._lead_pow = lead[v]
            # m_v^e == -(rest)/lc on the variety
            self._rewrite = rest.scale(-lc.inverse())

    @property
    def is_affine_space(self) -> bool:
        return self.ideal_generator is None

    def __repr__(self):
        if self.ideal_generator is None:
            return f"Variety(R^{self.ambient_dim})"
        return f"Variety(n={self.ambient_dim}, {self.ideal_generator} = 0)"

    def is_normal(self, e: Exponents) -> bool:
        return self._lead_var is None or e[self._lead_var] < self._lead_pow

    def monomial_basis(self, D: int) -> List[Exponents]:
        """Normal-form monomials of degree <= D, ascending in the order."""
        return [e for d in range(D + 1) for e in self.order.monomials_of_degree(d) if self.is_normal(e)]

    def truncation_dim(self, D: int) -> int:
        return len(self.monomial_basis(D))

    def normal_form(self, p: Polynomial) -> Polynomial:
        if self._lead_var is None:
            return p
        if p.n != self.ambient_dim:
            raise ValueError(f"polynomial in {p.n} variables, variety in {self.ambient_dim}")
        v, k = self._lead_var, self._lead_pow
        if all(e[v] < k for e in p.terms):
            return p
        n = self.ambient_dim
        rewrite_powers = [Polynomial.constant(n, 1)]
        out: Dict[Exponents, GaussianRational] = {}
        pending = dict(p.terms)
        # each pass strictly lowers the exponent of m_v in rewritten terms
        while pending:
            nxt: Dict[Exponents, GaussianRational] = {}
            for e, c in pending.items():
                q, r = divmod(e[v], k)
                if q == 0:
                    s = out.get(e)
                    out[e] = c if s is None else s + c
                    continue
                while len(rewrite_powers) <= q:
                    rewrite_powers.append(rewrite_powers[-1] * self._rewrite)
                base = list(e)
                base[v] = r
                for f, d in rewrite_powers[q].terms.items():
                    g = tuple(a + b for a, b in zip(base, f))
                    s = nxt.get(g)
                    val = c * d
                    nxt[g] = val if s is None else s + val
            pending = {e: c for e, c in nxt.items() if not c.is_zero()}
        return Polynomial(n, {e: c for e, c in out.items() if not c.is_zero()}, _clean=True)

    def ring_mul(self, p: Polynomial, q: Polynomial) -> Polynomial:
        return self.normal_form(p * q)

    def contains_point(self, point) -> bool:
        if self.ideal_generator is None:
            return True
        return self.ideal_generator.evaluate(point).is_zero()


def normal_form(p: Polynomial, V: Variety) -> Polynomial:
    return V.normal_form(p)


def ring_mul(p: Polynomial, q: Polynomial, V: Variety) -> Polynomial:
    return V.ring_mul(p, q)


def affine_space(n: int) -> Variety:
    return Variety(n)


def hyperboloid(xi) -> Variety:
    """N_xi = {-m1^2 - m2^2 + m3^2 = xi} in R^3, with m3 ranked highest."""
    n = 3
    xi = GaussianRational.coerce(xi)
    gen = Polynomial(n, {(2, 0, 0): -ONE, (0, 2, 0): -ONE, (0, 0, 2): ONE, (0, 0, 0): -xi})
    return Variety(n, gen, ranking=(2, 0, 1))
