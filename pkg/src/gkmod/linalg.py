"""Exact subspaces of polynomial spaces over Q(i) in reduced echelon form.

Subspaces are stored as reduced echelon bases whose pivots are leading
monomials under a :class:`MonomialOrder`.  Because the order is graded, the
basis vectors whose leading monomial has degree <= D span exactly the
intersection of the subspace with the polynomials of degree <= D.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Dict, Iterable, List, Sequence

from . import kernel
from .gaussian import ONE, ZERO, GaussianRational
from .polynomial import MonomialOrder, Polynomial, default_order


class DegreeBoundError(ValueError):
    pass


class TruncationMismatch(ValueError):
    pass


class DegreeOverflow(ValueError):
    def __init__(self, monomial, image_degree, bound):
        super().__init__(f"image of monomial {monomial} has degree {image_degree} > {bound}")
        self.monomial = monomial


# --- conversions ---------------------------------------------------------------

def poly_to_row(p: Polynomial, order: MonomialOrder, shift: int = 0):
    den = 1
    for c in p.terms.values():
        den = lcm(den, c.re.denominator, c.im.denominator)
    ent = {}
    for e, c in p.terms.items():
        ent[order.index(e) + shift] = (c.re.numerator * (den // c.re.denominator),
                                       c.im.numerator * (den // c.im.denominator))
    return kernel.normalize(den, ent)


def row_to_poly(den: int, ent: dict, order: MonomialOrder) -> Polynomial:
    terms = {}
    for col, (a, b) in ent.items():
        terms[order.monomial(col)] = GaussianRational(Fraction(a, den), Fraction(b, den))
    return Polynomial(order.n, terms, _clean=True)


class EchelonBuilder:
    """Mutable reduced-echelon basis, used while a span is being grown."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.rows: Dict[int, tuple] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def add(self, p: Polynomial) -> bool:
        if p.is_zero():
            return False
        den, ent = poly_to_row(p, self.order)
        return kernel.insert_row(den, ent, self.rows) >= 0

    def add_residual(self, p: Polynomial):
        """Add p; return its remainder modulo the old span if it was new, else None."""
        if p.is_zero():
            return None
        den, ent = poly_to_row(p, self.order)
        den, ent = kernel.reduce_row(den, ent, self.rows)
        if not ent:
            return None
        residual = row_to_poly(den, ent, self.order)
        kernel.insert_row(den, ent, self.rows)
        return residual

    def reduce(self, p: Polynomial) -> Polynomial:
        den, ent = poly_to_row(p, self.order)
        den, ent = kernel.reduce_row(den, ent, self.rows)
        return row_to_poly(den, ent, self.order)

    def contains(self, p: Polynomial) -> bool:
        if p.is_zero():
            return True
        den, ent = poly_to_row(p, self.order)
        return not kernel.reduce_row(den, ent, self.rows)[1]

    def dim_up_to(self, D: int) -> int:
        bound = self.order.count_up_to(D)
        return sum(1 for piv in self.rows if piv < bound)

    def freeze(self, D: int | None) -> "GradedSubspace":
        if D is None:
            rows = dict(self.rows)
        else:
            bound = self.order.count_up_to(D)
            rows = {piv: r for piv, r in self.rows.items() if piv < bound}
        return GradedSubspace._from_rows(self.order, D, rows)


class GradedSubspace:
    """An immutable subspace of C^{<=D}[x_1..x_n] with a canonical basis.

    ``max_degree`` may be ``None`` for a subspace without a declared bound.
    Two subspaces are equal iff their reduced echelon bases coincide.
    """

    __slots__ = ("order", "max_degree", "_rows", "_basis")

    def __init__(self, order: MonomialOrder, max_degree: int | None, vectors: Iterable[Polynomial] = ()):
        b = EchelonBuilder(order)
        for v in vectors:
            if v.n != order.n:
                raise ValueError(f"vector in {v.n} variables, subspace ambient dimension {order.n}")
            if max_degree is not None and v.degree() > max_degree:
                raise DegreeBoundError(f"vector of degree {v.degree()} exceeds bound {max_degree}")
            b.add(v)
        self.order = order
        self.max_degree = max_degree
        self._rows = b.rows
        self._basis = None

    @classmethod
    def _from_rows(cls, order, D, rows):
        obj = cls.__new__(cls)
        obj.order = order
        obj.max_degree = D
        obj._rows = rows
        obj._basis = None
        return obj

    @property
    def ambient_dim(self) -> int:
        return self.order.n

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self):
        return self.dim

    @property
    def basis(self) -> List[Polynomial]:
        """Canonical basis, leading monomials strictly increasing."""
        if self._basis is None:
            self._basis = [row_to_poly(*self._rows[p], self.order) for p in sorted(self._rows)]
        return list(self._basis)

    def leading_monomials(self):
        return [self.order.monomial(p) for p in sorted(self._rows)]

    def builder(self) -> EchelonBuilder:
        b = EchelonBuilder(self.order)
        b.rows = dict(self._rows)
        return b

    def reduce(self, p: Polynomial) -> Polynomial:
        return self.builder().reduce(p)

    def contains(self, p) -> bool:
        if isinstance(p, GradedSubspace):
            return all(self.contains(v) for v in p.basis)
        if p.is_zero():
            return True
        den, ent = poly_to_row(p, self.order)
        return not kernel.reduce_row(den, ent, self._rows)[1]

    def __contains__(self, p):
        return self.contains(p)

    def truncated(self, D: int) -> "GradedSubspace":
        """Intersection with polynomials of degree <= D."""
        bound = self.order.count_up_to(D)
        return GradedSubspace._from_rows(self.order, D, {p: r for p, r in self._rows.items() if p < bound})

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.order == other.order and self._rows == other._rows

    def __hash__(self):
        return hash((self.order, tuple(sorted(self._rows))))

    def __repr__(self):
        return f"GradedSubspace(n={self.order.n}, D={self.max_degree}, dim={self.dim})"

    def dims_by_leading_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for p in self._rows:
            d = sum(self.order.monomial(p))
            out[d] = out.get(d, 0) + 1
        return out


def subspace_from(vectors: Sequence[Polynomial], D: int | None, order: MonomialOrder | None = None,
                  n: int | None = None) -> GradedSubspace:
    """Canonical reduced-echelon subspace spanned by ``vectors``."""
    if order is None:
        if n is None:
            if not vectors:
                raise ValueError("ambient dimension needed for an empty generating set")
            n = vectors[0].n
        order = default_order(n)
    return GradedSubspace(order, D, vectors)


def _check_compatible(A: GradedSubspace, B: GradedSubspace):
    if A.order != B.order:
        raise TruncationMismatch(f"subspaces use different orders: {A.order} vs {B.order}")
    if A.max_degree != B.max_degree:
        raise TruncationMismatch(f"degree bounds differ: {A.max_degree} vs {B.max_degree}")


def subspace_sum(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    _check_compatible(A, B)
    b = A.builder()
    for den, ent in B._rows.values():
        kernel.insert_row(den, dict(ent), b.rows)
    return GradedSubspace._from_rows(A.order, A.max_degree, b.rows)


def subspace_intersection(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    """Zassenhaus: reduce rows (a | a) and (b | 0); rows (0 | w) span the intersection."""
    _check_compatible(A, B)
    cols = [c for rows in (A._rows, B._rows) for _, ent in rows.values() for c in ent]
    offset = (max(cols) + 1) if cols else 0
    work: Dict[int, tuple] = {}
    for den, ent in A._rows.values():
        row = dict(ent)
        row.update({c + offset: v for c, v in ent.items()})
        kernel.insert_row(den, row, work)
    for den, ent in B._rows.values():
        kernel.insert_row(den, {c + offset: v for c, v in ent.items()}, work)
    rows = {p: r for p, r in work.items() if p < offset}
    return GradedSubspace._from_rows(A.order, A.max_degree, rows)


def subspace_ops(A: GradedSubspace, B: GradedSubspace, op: str):
    """``op`` in {"sum", "intersect", "contains", "equals"}."""
    _check_compatible(A, B)
    if op == "sum":
        return subspace_sum(A, B)
    if op == "intersect":
        return subspace_intersection(A, B)
    if op == "contains":
        return A.contains(B)
    if op == "equals":
        return A == B
    raise ValueError(f"unknown subspace operation {op!r}")


def kernel_of_maps(domain: Sequence[Polynomial], maps: Sequence[Callable[[Polynomial], Polynomial]],
                   order: MonomialOrder, D: int | None = None) -> GradedSubspace:
    """Polynomials in span(domain) annihilated by every linear map in ``maps``.

    Each domain vector v contributes the row (map_1(v) | ... | map_t(v) | v)
    with the image blocks in the most significant columns; after reduction the
    rows with a pivot in the last block span the joint kernel.
    """
    images = [[f(v) for f in maps] for v in domain]
    dom_rows = [poly_to_row(v, order) for v in domain]
    img_rows = [[poly_to_row(w, order) for w in ims] for ims in images]
    width = 1 + max([c for _, ent in dom_rows for c in ent]
                    + [c for rows in img_rows for _, ent in rows for c in ent] + [0])
    work: Dict[int, tuple] = {}
    for (dden, dent), rows in zip(dom_rows, img_rows):
        den = dden
        for iden, _ in rows:
            den = lcm(den, iden)
        ent = {c: (a * (den // dden), b * (den // dden)) for c, (a, b) in dent.items()}
        for t, (iden, ient) in enumerate(rows, start=1):
            f = den // iden
            for c, (a, b) in ient.items():
                ent[c + t * width] = (a * f, b * f)
        den, ent = kernel.normalize(den, ent)
        kernel.insert_row(den, ent, work)
    rows = {p: r for p, r in work.items() if p < width}
    return GradedSubspace._from_rows(order, D, rows)


def operator_matrix(op_action: Callable[[Polynomial], Polynomial], D: int, n: int,
                    monomials: Sequence[tuple] | None = None, order: MonomialOrder | None = None):
    """Matrix of a linear action in the monomial basis of degree <= D.

    Column j holds the coordinates of the image of the j-th monomial.  Raises
    :class:`DegreeOverflow` naming the offending monomial if an image leaves
    the space.
    """
    order = order or default_order(n)
    if monomials is None:
        monomials = [e for d in range(D + 1) for e in order.monomials_of_degree(d)]
    position = {tuple(e): i for i, e in enumerate(monomials)}
    size = len(monomials)
    mat = [[ZERO] * size for _ in range(size)]
    for j, e in enumerate(monomials):
        image = op_action(Polynomial(n, {tuple(e): ONE}, _clean=True))
        if image.degree() > D:
            raise DegreeOverflow(tuple(e), image.degree(), D)
        for f, c in image.terms.items():
            i = position.get(f)
            if i is None:
                raise DegreeOverflow(tuple(e), sum(f), D)
            mat[i][j] = c
    return mat


# --- small dense exact linear algebra -------------------------------------------

def _row_echelon(mat):
    m = [list(r) for r in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def dense_rank(mat) -> int:
    if not mat:
        return 0
    return len(_row_echelon([[GaussianRational.coerce(x) for x in row] for row in mat])[1])


def dense_solve(A, b):
    """Unique or particular solution x of A x = b, or None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[GaussianRational.coerce(x) for x in A[i]] + [GaussianRational.coerce(b[i])] for i in range(rows)]
    m, pivots = _row_echelon(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x


def dense_inverse(A):
    n = len(A)
    aug = [[GaussianRational.coerce(x) for x in A[i]] + [ONE if j == i else ZERO for j in range(n)]
           for i in range(n)]
    m, pivots = _row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]
