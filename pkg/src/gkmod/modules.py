"""Truncated cyclic submodules, reducing chains and highest-weight quotients.

A generated module is grown word length by word length.  After J rounds the
engine holds the exact (untruncated) span S_J of all word images of length
at most J applied to the seeds; the reported space is S_J intersected with
the polynomials of degree <= D.  Because the monomial order is graded, that
intersection is read off from the echelon rows whose pivot has degree <= D.
Every vector in it is an exact element of the generated module, so the space
is an inner approximation of W intersected with degree <= D.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import kernel
from .gaussian import GaussianRational
from .isotypic import isotypic_components, isotypic_decompose, weight_of
from .lie import LieAlgebra, Matrix
from .linalg import EchelonBuilder, GradedSubspace, TruncationMismatch, poly_to_row, subspace_intersection
from .operators import DPI_PRIME, DRHO, apply_op
from .polynomial import Polynomial
from .variety import Variety

log = logging.getLogger(__name__)

DEFAULT_L_MAX = 12
DEFAULT_L_STAB = 3


class InclusionViolation(RuntimeError):
    pass


class NotAWeightVector(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """An exact generator of the span: word (labels, applied right to left) on a seed component."""

    seed_index: Optional[int]
    word: Tuple[str, ...]
    image: Polynomial

    def describe(self) -> str:
        seed = "p" if self.seed_index is None else f"P({self.seed_index})p"
        return "*".join(self.word + (seed,)) if self.word else seed


def module_generators(lie: LieAlgebra) -> List[Tuple[str, Matrix]]:
    """Generators used for closure: the root/Cartan basis when it spans g_C, else the real basis.

    Both span the same complex Lie algebra, so the generated spans agree; the
    root basis keeps word images weight-homogeneous and sparse.
    """
    named = {id(m): name for name, m in lie.elements.items()}
    root = lie.cartan + lie.pos_root_vectors + lie.neg_root_vectors
    if len(root) == lie.dim and root:
        from .linalg import dense_rank

        if dense_rank([m.flatten() for m in root]) == lie.dim:
            out = []
            for m in root:
                name = named.get(id(m)) or next((k for k, v in lie.elements.items() if v == m), "Y")
                out.append((name, m))
            return out
    return list(lie.basis)


class _Closure:
    """Frontier-based growth of the untruncated span of word images."""

    def __init__(self, seeds: Sequence[Witness], gens, V: Variety, tag: str):
        self.V = V
        self.gens = list(gens)
        self.tag = tag
        self.builder = EchelonBuilder(V.order)
        self.witnesses: List[Witness] = []
        self.frontier: List[Witness] = []
        self.rounds = 0
        self.words_applied = 0
        for w in seeds:
            if self.builder.add(w.image):
                self.witnesses.append(w)
                self.frontier.append(w)

    @property
    def closed(self) -> bool:
        return not self.frontier

    def step(self):
        new = []
        for w in self.frontier:
            for name, X in self.gens:
                image = apply_op(X, self.tag, w.image, self.V)
                self.words_applied += 1
                if image.is_zero():
                    continue
                if self.builder.add(image):
                    nw = Witness(w.seed_index, (name,) + w.word, image)
                    self.witnesses.append(nw)
                    new.append(nw)
        self.frontier = new
        self.rounds += 1

    def space(self, D: int | None) -> GradedSubspace:
        return self.builder.freeze(D)

    def dim_up_to(self, D: int) -> int:
        return self.builder.dim_up_to(D)


@dataclass
class SubmoduleHandle:
    seed: Polynomial
    D: int
    L_stab: int
    L_max: int
    words_applied: int
    space: GradedSubspace
    stabilized: bool
    rounds: int = 0
    closed: bool = False
    dims_history: List[int] = field(default_factory=list)
    witnesses: List[Witness] = field(default_factory=list, repr=False)
    _closure: Optional[_Closure] = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    def extend(self, rounds: int) -> "SubmoduleHandle":
        """Continue generation for ``rounds`` further rounds (in place)."""
        c = self._closure
        for _ in range(rounds):
            if c.closed:
                break
            c.step()
            self.dims_history.append(c.dim_up_to(self.D))
        self._sync()
        return self

    def _sync(self):
        c = self._closure
        self.space = c.space(self.D)
        self.rounds = c.rounds
        self.words_applied = c.words_applied
        self.closed = c.closed
        self.witnesses = list(c.witnesses)

    def untruncated_span(self) -> GradedSubspace:
        return self._closure.space(None)

    def summary(self) -> dict:
        return {
            "seed": str(self.seed),
            "D": self.D,
            "L_max": self.L_max,
            "L_stab": self.L_stab,
            "rounds": self.rounds,
            "words_applied": self.words_applied,
            "dim": self.dim,
            "stabilized": self.stabilized,
            "closed": self.closed,
            "dims_history": list(self.dims_history),
        }


def k_cyclic_span(p: Polynomial, lie: LieAlgebra, V: Variety | None = None, D: int | None = None) -> GradedSubspace:
    """Span of the K-orbit of p: the span of its nonzero isotypic components."""
    V = V if V is not None else Variety(p.n)
    if D is not None and p.degree() > D:
        raise ValueError(f"seed of degree {p.degree()} exceeds bound {D}")
    comps = isotypic_components(V.normal_form(p), lie, V)
    return GradedSubspace(V.order, D, comps.values())


def _seed_witnesses(p: Polynomial, lie: LieAlgebra, V: Variety, k_span: bool) -> List[Witness]:
    p = V.normal_form(p)
    if p.is_zero():
        return []
    if k_span and lie.k_generator is not None:
        return [Witness(n, (), c) for n, c in isotypic_components(p, lie, V).items()]
    return [Witness(None, (), p)]


def _run(closure: _Closure, D: int, L_max: int, L_stab: int) -> Tuple[bool, List[int]]:
    history = [closure.dim_up_to(D)]
    unchanged = 0
    while not closure.closed and closure.rounds < L_max:
        closure.step()
        history.append(closure.dim_up_to(D))
        unchanged = unchanged + 1 if history[-1] == history[-2] else 0
        log.debug("round %d: dim<=%d = %d, frontier %d", closure.rounds, D, history[-1], len(closure.frontier))
        if unchanged >= L_stab:
            break
    return closure.closed or unchanged >= L_stab, history


def generate_from_seeds(seeds: Sequence[Witness], lie: LieAlgebra, V: Variety, D: int,
                        L_max: int = DEFAULT_L_MAX, L_stab: int = DEFAULT_L_STAB, tag: str = DPI_PRIME,
                        generators=None, seed_poly: Polynomial | None = None) -> SubmoduleHandle:
    gens = generators if generators is not None else module_generators(lie)
    closure = _Closure(seeds, gens, V, tag)
    stabilized, history = _run(closure, D, L_max, L_stab)
    seed_poly = seed_poly if seed_poly is not None else (seeds[0].image if seeds else Polynomial.zero(V.ambient_dim))
    h = SubmoduleHandle(seed=seed_poly, D=D, L_stab=L_stab, L_max=L_max, words_applied=0,
                        space=closure.space(D), stabilized=stabilized, dims_history=history, _closure=closure)
    h._sync()
    return h


def generate_submodule(p: Polynomial, lie: LieAlgebra, V: Variety | None = None, D: int = 4,
                       L_max: int = DEFAULT_L_MAX, L_stab: int = DEFAULT_L_STAB, tag: str = DPI_PRIME,
                       k_span: bool = True, generators=None) -> SubmoduleHandle:
    """Inner model of W_p within degree <= D (see module docstring)."""
    V = V if V is not None else Variety(p.n)
    if p.degree() > D:
        raise ValueError(f"seed of degree {p.degree()} exceeds bound {D}")
    seeds = _seed_witnesses(p, lie, V, k_span)
    return generate_from_seeds(seeds, lie, V, D, L_max, L_stab, tag, generators, seed_poly=p)


def generate_drho_module(p: Polynomial, lie: LieAlgebra, V: Variety | None = None,
                         D: int | None = None) -> GradedSubspace:
    """Exact closure of span{p} under drho of the algebra (degree preserving)."""
    V = V if V is not None else Variety(p.n)
    if V.is_affine_space and not p.is_homogeneous():
        raise ValueError("generate_drho_module needs a homogeneous polynomial on R^n")
    p = V.normal_form(p)
    D = D if D is not None else (int(p.degree()) if not p.is_zero() else 0)
    closure = _Closure([Witness(None, (), p)] if not p.is_zero() else [], module_generators(lie), V, DRHO)
    while not closure.closed:
        closure.step()
    return closure.space(D)


@dataclass
class ReducingChain:
    seeds: List[Polynomial]
    handles: List[SubmoduleHandle]
    labels: List[str] = field(default_factory=list)

    @property
    def dims(self) -> List[int]:
        return [h.dim for h in self.handles]

    def inclusions(self) -> List[bool]:
        return [self.handles[i].space.contains(self.handles[i + 1].space) for i in range(len(self.handles) - 1)]


def build_reducing_chain(p: Polynomial, ops: Sequence, lie: LieAlgebra, V: Variety | None = None, D: int = 4,
                         L_max: int = DEFAULT_L_MAX, L_stab: int = DEFAULT_L_STAB,
                         extra_rounds: int = 4) -> ReducingChain:
    """Chain W_p, W_{X p}, W_{Y X p}, ... with verified inclusions.

    ``ops`` are matrices or (label, matrix) pairs; ops[0] is applied first.
    A child seed is a length-one word on its parent seed, so the parent needs
    one more round than the child for the inclusion to hold in the model;
    parents are extended until it does.
    """
    V = V if V is not None else Variety(p.n)
    seeds = [V.normal_form(p)]
    labels = ["p"]
    for op in ops:
        name, X = op if isinstance(op, tuple) else ("X", op)
        seeds.append(apply_op(X, DPI_PRIME, seeds[-1], V))
        labels.append(f"{name}*{labels[-1]}" if labels[-1] != "p" else f"{name}*p")
    for s in seeds:
        if s.degree() > D:
            raise ValueError(f"chain seed {s} exceeds the degree bound {D}")
    handles = [generate_submodule(s, lie, V, D, L_max, L_stab) for s in seeds]
    for i in range(len(handles) - 2, -1, -1):
        parent, child = handles[i], handles[i + 1]
        need = child.rounds + 1 - parent.rounds
        if need > 0:
            parent.extend(need)
        tries = 0
        while not parent.space.contains(child.space):
            if parent.closed or tries >= extra_rounds:
                raise InclusionViolation(f"handle {i + 1} is not contained in handle {i} at D={D}")
            parent.extend(1)
            tries += 1
    chain = ReducingChain(seeds, handles, labels)
    if not all(chain.inclusions()):
        raise InclusionViolation("reducing chain inclusions failed after extension")
    return chain


def subquotient_isotypic_dims(A: SubmoduleHandle, B: SubmoduleHandle, lie: LieAlgebra,
                              V: Variety | None = None, require_stabilized: bool = True) -> Dict[int, int]:
    """dim A(n) - dim B(n) for every isotypic index n."""
    if A.D != B.D:
        raise TruncationMismatch(f"handles truncated at different degrees {A.D} and {B.D}")
    if require_stabilized and not (A.stabilized and B.stabilized):
        raise ValueError("subquotient dims need stabilized handles")
    if not A.space.contains(B.space):
        raise InclusionViolation("B is not contained in A")
    V = V if V is not None else Variety(A.space.ambient_dim)
    da = {n: s.dim for n, s in isotypic_decompose(A.space, lie, V).items()}
    db = {n: s.dim for n, s in isotypic_decompose(B.space, lie, V).items()}
    return {n: da.get(n, 0) - db.get(n, 0) for n in sorted(set(da) | set(db))}


@dataclass
class DirectSumReport:
    D: Optional[int]
    dims: List[int]
    target_dim: int
    pairwise_zero: bool
    pairwise_dims: Dict[Tuple[int, int], int]
    spanning: bool
    direct: bool
    all_stabilized: bool

    @property
    def ok(self) -> bool:
        return self.pairwise_zero and self.spanning and self.direct and self.all_stabilized

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "dims": self.dims,
            "target_dim": self.target_dim,
            "pairwise_zero": self.pairwise_zero,
            "pairwise_intersection_dims": {f"{i},{j}": d for (i, j), d in sorted(self.pairwise_dims.items())},
            "spanning": self.spanning,
            "direct": self.direct,
            "all_stabilized": self.all_stabilized,
        }


def direct_sum_check(handles: Sequence[SubmoduleHandle], target: GradedSubspace) -> DirectSumReport:
    Ds = {h.D for h in handles}
    if len(Ds) > 1:
        raise TruncationMismatch(f"handles use different degree bounds {sorted(Ds)}")
    if Ds and target.max_degree not in Ds:
        raise TruncationMismatch(f"target bound {target.max_degree} differs from handle bound {Ds.pop()}")
    spaces = [h.space for h in handles]
    pair = {}
    for i in range(len(spaces)):
        for j in range(i + 1, len(spaces)):
            pair[(i, j)] = subspace_intersection(spaces[i], spaces[j]).dim
    total = EchelonBuilder(target.order)
    for s in spaces:
        for den, ent in s._rows.values():
            kernel.insert_row(den, dict(ent), total.rows)
    sum_space = total.freeze(target.max_degree)
    dims = [s.dim for s in spaces]
    spanning = sum_space.contains(target) and target.contains(sum_space)
    return DirectSumReport(
        D=target.max_degree, dims=dims, target_dim=target.dim,
        pairwise_zero=all(d == 0 for d in pair.values()), pairwise_dims=pair,
        spanning=spanning, direct=sum(dims) == sum_space.dim,
        all_stabilized=all(h.stabilized for h in handles))


@dataclass
class HighestWeightReport:
    weight: Tuple[GaussianRational, ...]
    D: int
    nplus_images_contained: bool
    nminus_span_holds: bool
    quotient_dims: Dict[int, int]
    casimir_scalar: Optional[GaussianRational]
    casimir_scalar_action: Optional[bool]
    stabilized: bool
    dims: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.nplus_images_contained and self.nminus_span_holds and self.stabilized
                and self.casimir_scalar_action is not False)

    def to_json(self) -> dict:
        return {
            "weight": [w.to_json() for w in self.weight],
            "D": self.D,
            "nplus_images_contained": self.nplus_images_contained,
            "nminus_span_holds": self.nminus_span_holds,
            "quotient_dims": {str(k): v for k, v in sorted(self.quotient_dims.items())},
            "casimir_scalar": None if self.casimir_scalar is None else self.casimir_scalar.to_json(),
            "casimir_scalar_action": self.casimir_scalar_action,
            "stabilized": self.stabilized,
            "dims": dict(self.dims),
        }


def highest_weight_check(p: Polynomial, lie: LieAlgebra, V: Variety | None = None, D: int = 4,
                         casimir=None, L_max: int = DEFAULT_L_MAX, L_stab: int = DEFAULT_L_STAB) -> HighestWeightReport:
    """Checks on V_p = U(g) p and its quotient by V_{n+,p} = sum_X U(g) X p.

    ``casimir`` is a list of (coefficient, [element names]) words; each word
    is applied right to left through dpi'.
    """
    V = V if V is not None else Variety(p.n)
    if not lie.cartan or not lie.pos_root_vectors or not lie.neg_root_vectors:
        raise ValueError("highest_weight_check needs Cartan and root vector data")
    p = V.normal_form(p)
    weight = weight_of(p, lie, V)
    if weight is None:
        raise NotAWeightVector(f"{p} is not a weight vector for the Cartan subalgebra")
    gens = module_generators(lie)

    vp = generate_submodule(p, lie, V, D, L_max, L_stab, k_span=False)
    J = vp.rounds
    nplus_seeds = []
    for X in lie.pos_root_vectors:
        img = apply_op(X, DPI_PRIME, p, V)
        if not img.is_zero():
            nplus_seeds.append(Witness(None, ("X+",), img))
    vn = generate_from_seeds(nplus_seeds, lie, V, D, L_max, L_stab, seed_poly=p)
    if vn.rounds < J:
        vn.extend(J - vn.rounds)
    # (b) positive root images lie in V_{n+,p}
    nplus_ok = all(vn.untruncated_span().contains(w.image) for w in nplus_seeds)
    # (c) n- words on p plus V_{n+,p} recover V_p within degree <= D
    neg = [(f"N{i}", X) for i, X in enumerate(lie.neg_root_vectors)]
    nminus = _Closure([Witness(None, (), p)], neg, V, DPI_PRIME)
    while not nminus.closed and nminus.rounds < J:
        nminus.step()
    combined = vn._closure.builder
    merged = EchelonBuilder(V.order)
    merged.rows = dict(combined.rows)
    for den, ent in nminus.builder.rows.values():
        kernel.insert_row(den, dict(ent), merged.rows)
    merged_D = merged.freeze(D)
    nminus_ok = merged_D.contains(vp.space) and vp.space.contains(merged_D)
    # (d) weight dims of the quotient, via the complement
    if not vp.space.contains(vn.space):
        raise InclusionViolation("V_{n+,p} is not contained in V_p at truncation")
    quotient = {}
    if lie.k_generator is not None:
        a = {n: s.dim for n, s in isotypic_decompose(vp.space, lie, V).items()}
        b = {n: s.dim for n, s in isotypic_decompose(vn.space, lie, V).items()}
        quotient = {n: a.get(n, 0) - b.get(n, 0) for n in sorted(set(a) | set(b)) if a.get(n, 0) - b.get(n, 0)}
    # (e) Casimir acts on V_p / V_{n+,p} by one scalar
    scalar, scalar_ok = None, None
    if casimir:
        def omega(v: Polynomial) -> Polynomial:
            out = Polynomial.zero(v.n)
            for c, names in casimir:
                w = v
                for name in reversed(list(names)):
                    w = apply_op(lie.element(name), DPI_PRIME, w, V)
                out = out + w.scale(c)
            return out

        vn.extend(1)
        b = vn._closure.builder
        rp = b.reduce(p)
        ro = b.reduce(omega(p))
        if rp.is_zero():
            scalar_ok = ro.is_zero()
        else:
            lead = next(iter(rp.terms))
            scalar = ro.coefficient(lead) / rp.terms[lead]
            scalar_ok = ro == rp.scale(scalar)
            if scalar_ok:
                for w in vp.witnesses:
                    if not b.reduce(omega(w.image) - w.image.scale(scalar)).is_zero():
                        scalar_ok = False
                        break
    return HighestWeightReport(
        weight=weight, D=D, nplus_images_contained=nplus_ok, nminus_span_holds=nminus_ok,
        quotient_dims=quotient, casimir_scalar=scalar, casimir_scalar_action=scalar_ok,
        stabilized=vp.stabilized and vn.stabilized,
        dims={"V_p": vp.dim, "V_nplus": vn.dim, "quotient": vp.dim - vn.dim})
