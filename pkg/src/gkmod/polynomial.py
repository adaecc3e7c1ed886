"""Multivariate polynomials over Q(i) and the graded-lex monomial order."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, Sequence, Tuple

from .gaussian import ONE, ZERO, GaussianRational, ScalarLike

Exponents = Tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class MonomialOrder:
    """Graded lexicographic order with a configurable variable ranking.

    ``ranking`` lists variable indices from most to least significant; the
    default ``(0, 1, ..., n-1)`` ranks m1 highest.  Every monomial has a
    global integer index, increasing with the order, that does not depend on
    any degree bound.
    """

    def __init__(self, n: int, ranking: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("ambient dimension must be non-negative")
        ranking = tuple(range(n)) if ranking is None else tuple(ranking)
        if sorted(ranking) != list(range(n)):
            raise ValueError(f"ranking {ranking} is not a permutation of 0..{n - 1}")
        self.n = n
        self.ranking = ranking
        self._index: Dict[Exponents, int] = {}
        self._by_degree: Dict[int, list] = {}

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.n, self.ranking) == (other.n, other.ranking)

    def __hash__(self):
        return hash((self.n, self.ranking))

    def __repr__(self):
        return f"MonomialOrder(n={self.n}, ranking={self.ranking})"

    def key(self, e: Exponents):
        return (sum(e), tuple(e[r] for r in self.ranking))

    def index(self, e: Exponents) -> int:
        idx = self._index.get(e)
        if idx is None:
            idx = self._compute_index(e)
            self._index[e] = idx
        return idx

    def _compute_index(self, e: Exponents) -> int:
        n = self.n
        d = sum(e)
        idx = comb(n + d - 1, n) if d > 0 else 0
        ranked = [e[r] for r in self.ranking]
        rem = d
        for j in range(n - 1):
            free = n - j - 1
            for v in range(ranked[j]):
                idx += comb(rem - v + free - 1, free - 1)
            rem -= ranked[j]
        return idx

    def monomials_of_degree(self, d: int) -> list:
        """All exponent vectors of total degree d, ascending in the order."""
        mons = self._by_degree.get(d)
        if mons is None:
            mons = sorted(_compositions(d, self.n), key=self.key)
            self._by_degree[d] = mons
        return mons

    def monomial(self, index: int) -> Exponents:
        d = 0
        while comb(self.n + d, self.n) <= index:
            d += 1
        start = comb(self.n + d - 1, self.n) if d > 0 else 0
        return self.monomials_of_degree(d)[index - start]

    def count_up_to(self, D: int) -> int:
        """Number of monomials of degree <= D (one past the largest index)."""
        return comb(self.n + D, self.n)


def _compositions(d: int, n: int) -> Iterator[Exponents]:
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def default_order(n: int) -> MonomialOrder:
    return MonomialOrder(n)


class Polynomial:
    """A finitely supported map exponent-vector -> GaussianRational.

    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Dict[Exponents, GaussianRational] | None = None, *, _clean=False):
        self.n = n
        if terms is None:
            terms = {}
        elif not _clean:
            cleaned = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise DimensionMismatch(f"exponent {e} has length {len(e)}, expected {n}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = GaussianRational.coerce(c)
                if not c.is_zero():
                    cleaned[e] = c
            terms = cleaned
        self.terms = terms
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {}, _clean=True)

    @classmethod
    def constant(cls, n: int, c: ScalarLike) -> "Polynomial":
        c = GaussianRational.coerce(c)
        return cls(n, {} if c.is_zero() else {(0,) * n: c}, _clean=True)

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): ONE}, _clean=True)

    @classmethod
    def monomial(cls, e: Exponents, c: ScalarLike = 1) -> "Polynomial":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def r_squared(cls, n: int) -> "Polynomial":
        terms = {}
        for i in range(n):
            e = [0] * n
            e[i] = 2
            terms[tuple(e)] = ONE
        return cls(n, terms, _clean=True)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> float:
        """Total degree; ``float('-inf')`` for the zero polynomial."""
        if not self.terms:
            return float("-inf")
        return max(sum(e) for e in self.terms)

    def coefficient(self, e: Exponents) -> GaussianRational:
        return self.terms.get(tuple(e), ZERO)

    def leading_monomial(self, order: MonomialOrder) -> Exponents:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial(self.n, {e: c for e, c in self.terms.items() if sum(e) == d}, _clean=True)

    def homogeneous_degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def truncate(self, D: int) -> "Polynomial":
        """Drop every term of degree > D."""
        return Polynomial(self.n, {e: c for e, c in self.terms.items() if sum(e) <= D}, _clean=True)

    def is_homogeneous(self) -> bool:
        return len(self.homogeneous_degrees()) <= 1

    # arithmetic
    def _check(self, other: "Polynomial"):
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.n, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c: ScalarLike) -> "Polynomial":
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return Polynomial.zero(self.n)
        if c == ONE:
            return self
        return Polynomial(self.n, {e: c * v for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out: Dict[Exponents, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                s = out.get(e)
                out[e] = v if s is None else s + v
        return Polynomial(self.n, {e: c for e, c in out.items() if not c.is_zero()}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        c = GaussianRational.coerce(other)
        return self.scale(c.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return Polynomial(self.n, out, _clean=True)

    def substitute_linear(self, matrix) -> "Polynomial":
        """Return p(A m) for an n x n matrix A given as rows of scalars."""
        n = self.n
        forms = []
        for i in range(n):
            forms.append(Polynomial(n, {tuple(1 if j == k else 0 for j in range(n)): matrix[i][k]
                                        for k in range(n)}))
        powers = [[Polynomial.constant(n, 1)] for _ in range(n)]
        result = Polynomial.zero(n)
        for e, c in self.terms.items():
            term = Polynomial.constant(n, c)
            for i, k in enumerate(e):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * forms[i])
                if k:
                    term = term * powers[i][k]
            result = result + term
        return result

    def evaluate(self, point: Sequence) -> GaussianRational:
        """Exact evaluation at a point with Q(i) coordinates."""
        point = [GaussianRational.coerce(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def evaluate_numeric(self, points):
        """Vectorized float evaluation at an (N, n) array of real points."""
        import numpy as np

        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        out = np.zeros(pts.shape[0], dtype=complex)
        for e, c in self.terms.items():
            v = np.full(pts.shape[0], complex(c))
            for i, k in enumerate(e):
                if k:
                    v = v * pts[:, i] ** k
            out += v
        return out

    # comparison and display
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == Polynomial.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or default_order(self.n)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(f"m{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif c == ONE:
                parts.append(mon)
            elif c == -ONE:
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        """Term list ``[[exponents, {"re":..,"im":..}], ...]`` in descending order."""
        return [[list(e), c.to_json()] for e, c in self.sorted_terms()]


def poly_arith(a: Polynomial, b: Polynomial | ScalarLike, op: str) -> Polynomial:
    """Dispatch helper: ``op`` in {"add", "sub", "mul", "scale"}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, Polynomial):
            raise TypeError("mul expects two polynomials; use scale for scalars")
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def polynomial_from_json(data, n: int) -> Polynomial:
    """Accept either an expression string or a term list ``[[exps, coeff], ...]``."""
    from .gaussian import parse_scalar

    if isinstance(data, str):
        return parse_polynomial(data, n)
    if isinstance(data, (int,)) and not isinstance(data, bool):
        return Polynomial.constant(n, data)
    if not isinstance(data, list):
        raise ValueError(f"polynomial must be a string or a term list, got {type(data).__name__}")
    terms: Dict[Exponents, GaussianRational] = {}
    for item in data:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise ValueError(f"bad polynomial term {item!r}")
        e = tuple(int(x) for x in item[0])
        if len(e) != n:
            raise DimensionMismatch(f"term exponents {list(e)} do not match ambient dimension {n}")
        terms[e] = terms.get(e, ZERO) + parse_scalar(item[1])
    return Polynomial(n, terms)


# --- expression parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(m\d+)|(r2|q\+|q-)|(i)|([-+*/^()]))")


def parse_polynomial(text: str, n: int) -> Polynomial:
    """Parse an expression such as ``"m1^2 - 1/2*i*m2 + (m1+i*m2)^3"``.

    Variables are ``m1..mn``; ``i`` is the imaginary unit; ``r2`` is
    m1^2+...+mn^2 and ``q+``/``q-`` are m1 +/- i*m2.  Division is allowed by
    constants only.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        tokens.append(next((k, v) for k, v in enumerate(m.groups()) if v is not None))
        pos = m.end()
    parser = _Parser(tokens, n, text)
    result = parser.expr()
    if parser.pos != len(tokens):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return result


class _Parser:
    def __init__(self, tokens, n, text):
        self.tokens = tokens
        self.n = n
        self.text = text
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, msg):
        raise ValueError(f"{msg} in polynomial {self.text!r}")

    def expr(self) -> Polynomial:
        kind, val = self.peek()
        if kind == 4 and val in "+-":
            self.take()
            result = self.term()
            if val == "-":
                result = -result
        else:
            result = self.term()
        while True:
            kind, val = self.peek()
            if kind == 4 and val in "+-":
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self) -> Polynomial:
        result = self.power()
        while True:
            kind, val = self.peek()
            if kind == 4 and val == "*":
                self.take()
                result = result * self.power()
            elif kind == 4 and val == "/":
                self.take()
                d = self.power()
                if d.degree() > 0 or d.is_zero():
                    self.fail("division by a non-constant or zero")
                result = result / d.terms[(0,) * self.n]
            elif kind in (0, 1, 2, 3) or (kind == 4 and val == "("):
                result = result * self.power()
            else:
                return result

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val = self.peek()
        if kind == 4 and val == "^":
            self.take()
            kind, val = self.take()
            if kind != 0:
                self.fail("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        n = self.n
        if kind == 0:
            return Polynomial.constant(n, int(val))
        if kind == 1:
            i = int(val[1:]) - 1
            if not 0 <= i < n:
                self.fail(f"variable {val} out of range for ambient dimension {n}")
            return Polynomial.variable(n, i)
        if kind == 2:
            if val == "r2":
                return Polynomial.r_squared(n)
            if n < 2:
                self.fail("q+/q- need at least two variables")
            sign = 1 if val == "q+" else -1
            return Polynomial.variable(n, 0) + Polynomial.variable(n, 1).scale(GaussianRational(0, sign))
        if kind == 3:
            return Polynomial.constant(n, GaussianRational(0, 1))
        if kind == 4 and val == "(":
            inner = self.expr()
            k, v = self.take()
            if v != ")":
                self.fail("missing ')'")
            return inner
        if kind == 4 and val == "-":
            return -self.power()
        self.fail(f"unexpected token {val!r}")
