"""Matrix Lie algebras over Q(i), group elements, and the sl(2) presets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .gaussian import I, ONE, ZERO, GaussianRational
from .linalg import dense_inverse, dense_rank, dense_solve


class Matrix:
    """Immutable square matrix with Gaussian-rational entries (a LieElement)."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows):
        rows = tuple(tuple(GaussianRational.coerce(x) for x in r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Matrix":
        return cls([[ZERO] * n for _ in range(n)])

    @classmethod
    def diag(cls, *entries) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        c = GaussianRational.coerce(c)
        return Matrix([[c * a for a in r] for r in self.rows])

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = ZERO
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(out)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def inverse(self) -> "Matrix":
        return Matrix(dense_inverse(self.rows))

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def flatten(self) -> List[GaussianRational]:
        return [a for r in self.rows for a in r]

    def apply(self, vec):
        return [sum((a * GaussianRational.coerce(x) for a, x in zip(r, vec)), ZERO) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "])"

    def to_json(self):
        return [[a.to_json() for a in r] for r in self.rows]

    def to_complex(self):
        import numpy as np

        return np.array([[complex(a) for a in r] for r in self.rows])


LieElement = Matrix


def bracket(X: Matrix, Y: Matrix) -> Matrix:
    if X.n != Y.n:
        raise ValueError("bracket of matrices of different sizes")
    return X @ Y - Y @ X


@dataclass(frozen=True)
class GroupElement:
    """An invertible matrix together with its exact inverse."""

    matrix: Matrix
    inverse: Matrix

    def __post_init__(self):
        if not (self.matrix @ self.inverse) == Matrix.identity(self.matrix.n):
            raise ValueError("supplied inverse does not invert the matrix")

    @classmethod
    def from_matrix(cls, m, condition: Optional[Callable[[Matrix], bool]] = None) -> "GroupElement":
        m = m if isinstance(m, Matrix) else Matrix(m)
        try:
            inv = m.inverse()
        except ZeroDivisionError:
            raise ValueError("group element is not invertible") from None
        if condition is not None and not condition(m):
            raise ValueError("group element violates the supplied group condition")
        return cls(m, inv)

    @property
    def n(self) -> int:
        return self.matrix.n

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def inv(self) -> "GroupElement":
        return GroupElement(self.inverse, self.matrix)


def determinant(m: Matrix) -> GaussianRational:
    rows = [list(r) for r in m.rows]
    n = len(rows)
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if not f.is_zero():
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def det_one(m: Matrix) -> bool:
    return determinant(m) == ONE


def ad_action(g: GroupElement, X: Matrix) -> Matrix:
    """Ad(g)X = g X g^{-1}."""
    return g.matrix @ X @ g.inverse


def coordinates_in(basis: Sequence[Matrix], X: Matrix):
    """Coefficients of X in the span of ``basis`` or None if X is outside it."""
    cols = [b.flatten() for b in basis]
    A = [[cols[j][i] for j in range(len(basis))] for i in range(len(cols[0]))]
    return dense_solve(A, X.flatten())


@dataclass
class LieAlgebra:
    """A matrix Lie algebra with optional torus and root data.

    ``elements`` maps names to matrices; it always contains the basis names and
    may contain further named complex combinations (H, X+, X-, ...).
    ``casimir`` is a list of ``(coefficient, [names...])`` words.
    """

    ambient_dim: int
    basis: List[Tuple[str, Matrix]]
    k_generator: Optional[Matrix] = None
    cartan: List[Matrix] = field(default_factory=list)
    pos_root_vectors: List[Matrix] = field(default_factory=list)
    neg_root_vectors: List[Matrix] = field(default_factory=list)
    elements: Dict[str, Matrix] = field(default_factory=dict)
    casimir: List[Tuple[GaussianRational, List[str]]] = field(default_factory=list)
    name: str = "custom"
    structure_constants: Dict[Tuple[int, int], List[GaussianRational]] = field(default_factory=dict, init=False)

    def __post_init__(self):
        mats = [m for _, m in self.basis]
        for m in mats:
            if m.n != self.ambient_dim:
                raise ValueError(f"basis matrix of size {m.n}, ambient dimension {self.ambient_dim}")
        if mats and dense_rank([m.flatten() for m in mats]) != len(mats):
            raise ValueError("basis matrices are linearly dependent")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                coeffs = coordinates_in(mats, bracket(mats[i], mats[j]))
                if coeffs is None:
                    raise ValueError(f"[{self.basis[i][0]}, {self.basis[j][0]}] leaves the span of the basis")
                self.structure_constants[(i, j)] = coeffs
        for name, m in self.basis:
            self.elements.setdefault(name, m)
        for c1 in self.cartan:
            for c2 in self.cartan:
                if not bracket(c1, c2).is_zero():
                    raise ValueError("Cartan elements do not commute")
        extra = [self.k_generator] if self.k_generator is not None else []
        for m in extra + self.cartan + self.pos_root_vectors + self.neg_root_vectors:
            if mats and coordinates_in(mats, m) is None:
                raise ValueError("torus/Cartan/root element outside the complexified algebra")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def basis_matrices(self) -> List[Matrix]:
        return [m for _, m in self.basis]

    def element(self, name: str) -> Matrix:
        try:
            return self.elements[name]
        except KeyError:
            raise KeyError(f"unknown Lie algebra element {name!r}; known: {sorted(self.elements)}") from None

    def bracket_from_constants(self, i: int, j: int) -> Matrix:
        if i == j:
            return Matrix.zero(self.ambient_dim)
        if i > j:
            return -self.bracket_from_constants(j, i)
        out = Matrix.zero(self.ambient_dim)
        for c, (_, m) in zip(self.structure_constants[(i, j)], self.basis):
            out = out + m.scale(c)
        return out


def adjoint_embedding(lie: LieAlgebra, coordinate_basis: Sequence[Matrix]) -> LieAlgebra:
    """The algebra acting on R^d = g through ad, in the given coordinates.

    ``coordinate_basis`` holds E_1..E_d with X_m = sum_j m_j E_j.  Each element
    Y becomes the d x d matrix of m -> coordinates of [Y, X_m].
    """
    E = list(coordinate_basis)
    d = len(E)
    if d == 0 or dense_rank([e.flatten() for e in E]) != d:
        raise ValueError("coordinate identification is not invertible")

    def ad(Y: Matrix) -> Matrix:
        cols = []
        for e in E:
            c = coordinates_in(E, bracket(Y, e))
            if c is None:
                raise ValueError("[Y, X_m] leaves the coordinate space")
            cols.append(c)
        return Matrix([[cols[j][i] for j in range(d)] for i in range(d)])

    return LieAlgebra(
        ambient_dim=d,
        basis=[(name, ad(m)) for name, m in lie.basis],
        k_generator=ad(lie.k_generator) if lie.k_generator is not None else None,
        cartan=[ad(m) for m in lie.cartan],
        pos_root_vectors=[ad(m) for m in lie.pos_root_vectors],
        neg_root_vectors=[ad(m) for m in lie.neg_root_vectors],
        elements={name: ad(m) for name, m in lie.elements.items()},
        casimir=list(lie.casimir),
        name=lie.name + "_adjoint",
    )


# --- presets -------------------------------------------------------------------

A1 = Matrix([[0, 1], [0, 0]])
A2 = Matrix([[0, 0], [1, 0]])
A3 = Matrix([[1, 0], [0, -1]])
H_STD = A1 - A2
X_PLUS_STD = A1 + A2 - A3.scale(I)
X_MINUS_STD = A1 + A2 + A3.scale(I)

# X_m = [[m2, m1+m3], [m1-m3, -m2]]
ADJOINT_COORDINATES = (
    Matrix([[0, 1], [1, 0]]),
    Matrix([[1, 0], [0, -1]]),
    Matrix([[0, 1], [-1, 0]]),
)

# 4 * (ef + fe + h^2/2) with e = X+/2, f = X-/2, h = -iH
SL2_CASIMIR = [(ONE, ["X+", "X-"]), (ONE, ["X-", "X+"]), (GaussianRational(-2), ["H", "H"])]


def sl2_standard() -> LieAlgebra:
    return LieAlgebra(
        ambient_dim=2,
        basis=[("a1", A1), ("a2", A2), ("a3", A3)],
        k_generator=H_STD,
        cartan=[H_STD],
        pos_root_vectors=[X_PLUS_STD],
        neg_root_vectors=[X_MINUS_STD],
        elements={"H": H_STD, "X+": X_PLUS_STD, "X-": X_MINUS_STD},
        casimir=list(SL2_CASIMIR),
        name="sl2_standard",
    )


def sl2_adjoint() -> LieAlgebra:
    lie = adjoint_embedding(sl2_standard(), ADJOINT_COORDINATES)
    lie.name = "sl2_adjoint"
    return lie


PRESETS = {"sl2_standard": sl2_standard, "sl2_adjoint": sl2_adjoint}


def preset(name: str) -> LieAlgebra:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
