"""Task kinds executed by the batch front end.

Each task returns a :class:`TaskResult` whose ``result`` is JSON-ready and
deterministic for a fixed config and RNG seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List

from .approximation import (certify, lemma1_probe, sup_norm_upper, tail_sigma, term_norm_asymptotic,
                            term_norm_bound)
from .closed_forms import FIELDS, compare_with_fields
from .config import JobConfig, ConfigValidationError, group_condition, parse_group_matrix
from .gaussian import GaussianRational
from .isotypic import (candidate_indices, full_truncation, isotypic_dims, projector_identities_check,
                       weight_of, weight_space)
from .lie import GroupElement, Matrix, bracket, coordinates_in, sl2_standard
from .linalg import subspace_from
from .modules import (InclusionViolation, build_reducing_chain, direct_sum_check, generate_drho_module,
                      generate_submodule, highest_weight_check)
from .operators import (DPI_PRIME, ad_equivariance_check, apply_dpi_prime, apply_drho, apply_op,
                        check_hom_identity, unit_grid)
from .polynomial import Polynomial, parse_polynomial
from .variety import Variety

EQUIVARIANCE_TOL = 1e-10


@dataclass
class TaskResult:
    name: str
    kind: str
    passed: bool
    result: Dict[str, Any]
    truncation: Dict[str, Any] = field(default_factory=dict)
    error: str | None = None
    markdown: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "verdict": "pass" if self.passed else "fail",
               "truncation": self.truncation, "result": self.result}
        if self.error is not None:
            out["verdict"] = "error"
            out["error"] = self.error
        return out


def fmt(x: float) -> str:
    if x == math.inf:
        return "inf"
    return f"{x:.12e}"


def _md_table(header: List[str], rows: List[List[Any]]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return lines


def _limits(t: dict, D_default: int = 6):
    return t.get("D", D_default), t.get("L_max", 12), t.get("L_stab", 3)


# --- individual tasks ---------------------------------------------------------

def _random_group_element(rng: random.Random, n: int) -> GroupElement:
    """Product of two elementary unipotents and a diagonal det-one scaling, all rational."""
    m = Matrix.identity(n)
    for _ in range(2):
        i, j = rng.sample(range(n), 2)
        e = [[0] * n for _ in range(n)]
        e[i][j] = Fraction(rng.randint(-3, 3), rng.randint(2, 6))
        m = m @ (Matrix.identity(n) + Matrix(e))
    a = Fraction(rng.randint(3, 6), rng.randint(3, 6))
    diag = [1] * n
    diag[0], diag[-1] = a, 1 / a
    return GroupElement.from_matrix(m @ Matrix.diag(*diag))


def task_verify_operators(cfg: JobConfig, t: dict, rng: random.Random) -> TaskResult:
    D = t.get("D", 6)
    lie, V = cfg.lie, cfg.variety
    out: Dict[str, Any] = {}
    ok = True
    if lie.name in FIELDS and V.is_affine_space:
        golden = compare_with_fields(lie, FIELDS[lie.name](), D)
        out["closed_forms"] = golden
        ok &= all(g["drho_matches"] and g["dpi_prime_matches"] for g in golden.values())
    mons = [Polynomial.monomial(e) for e in V.monomial_basis(min(D, 3))]
    leibniz = all(apply_drho(X, V.ring_mul(p, q), V) ==
                  V.normal_form(apply_drho(X, p, V) * q + p * apply_drho(X, q, V))
                  for _, X in lie.basis for p in mons[:6] for q in mons[:6])
    kills_constants = all(apply_drho(X, Polynomial.constant(cfg.n, 1), V).is_zero() for _, X in lie.basis)
    out["leibniz"] = leibniz
    out["drho_kills_constants"] = kills_constants
    ok &= leibniz and kills_constants
    if V.is_affine_space:
        shift_ok = True
        for _, X in lie.basis:
            for d in range(D + 1):
                for e in V.order.monomials_of_degree(d):
                    img = apply_dpi_prime(X, Polynomial.monomial(e))
                    if not img.homogeneous_degrees() <= {d, d + 2}:
                        shift_ok = False
        out["degree_shift_l_l_plus_2"] = shift_ok
        ok &= shift_ok
        pairs = t.get("equivariance_pairs", 10)
        grid = unit_grid(cfg.n, 5)
        residuals = []
        seed = parse_polynomial(t["seed"], cfg.n) if "seed" in t else Polynomial.constant(cfg.n, 1)
        for _ in range(pairs):
            g = _random_group_element(rng, cfg.n)
            X = Matrix.zero(cfg.n)
            for _, b in lie.basis:
                X = X + b.scale(Fraction(rng.randint(-4, 4), rng.randint(1, 4)))
            residuals.append(ad_equivariance_check(g, X, seed, grid))
        worst = max(residuals, default=0.0)
        out["equivariance"] = {"pairs": pairs, "grid_points": len(grid), "max_residual": fmt(worst),
                               "tolerance": fmt(EQUIVARIANCE_TOL)}
        ok &= worst <= EQUIVARIANCE_TOL
    return TaskResult("", "verify_operators", ok, out, {"D": D})


def task_commutators(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D = t.get("D", 6)
    tag = t.get("tag", DPI_PRIME)
    lie, V = cfg.lie, cfg.variety
    table = {}
    ok = True
    names = [n for n, _ in lie.basis]
    for i, (a, X) in enumerate(lie.basis):
        for b, Y in lie.basis[i:]:
            res = check_hom_identity(X, Y, D, V, tag)
            table[f"[{a},{b}]"] = res
            ok &= res
    rel = {}
    if {"X+", "X-", "H"} <= set(lie.elements):
        Xp, Xm, H = (lie.element(k) for k in ("X+", "X-", "H"))
        rel["[X+,X-] = -4i H"] = bracket(Xp, Xm) == H.scale(GaussianRational(0, -4))
        rel["[H,X+] = 2i X+"] = bracket(H, Xp) == Xp.scale(GaussianRational(0, 2))
        rel["hom identity (X+, X-)"] = check_hom_identity(Xp, Xm, D, V, tag)
        ok &= all(rel.values())
    structure = {}
    for (i, j), coeffs in sorted(lie.structure_constants.items()):
        structure[f"[{names[i]},{names[j]}]"] = [c.to_json() for c in coeffs]
    md = _md_table(["pair", "homomorphism identity"], [[k, v] for k, v in table.items()])
    return TaskResult("", "commutators", ok, {"tag": tag, "pairs": table, "relations": rel,
                                              "structure_constants": structure}, {"D": D}, markdown=md)


def task_vkl_table(cfg: JobConfig, t: dict, rng) -> TaskResult:
    k_max = t.get("k_max", 6)
    lie = cfg.lie
    if lie.ambient_dim != 3:
        raise ConfigValidationError("tasks/vkl_table", "needs a Lie algebra acting on R^3")
    V = Variety(3)
    pG = parse_polynomial(t["seed"], 3) if "seed" in t else parse_polynomial("-m1^2-m2^2+m3^2", 3)
    qm = parse_polynomial("q-", 3)
    rows = []
    ok = True
    invariant = all(apply_drho(X, pG).is_zero() for _, X in lie.basis)
    ok &= invariant
    for k in range(k_max + 1):
        spaces = []
        for l in range(k // 2 + 1):
            p = pG ** l * qm ** (k - 2 * l)
            S = generate_drho_module(p, lie, V)
            hw = all(apply_drho(X, p).is_zero() for X in lie.pos_root_vectors)
            expected = 2 * (k - 2 * l) + 1
            rows.append({"k": k, "l": l, "dim": S.dim, "expected": expected, "highest_weight_vector": hw})
            ok &= S.dim == expected and hw
            spaces.append(S)
        total = subspace_from([b for S in spaces for b in S.basis], k, n=3)
        full = (k + 1) * (k + 2) // 2
        direct = total.dim == full == sum(S.dim for S in spaces)
        rows.append({"k": k, "l": "sum", "dim": total.dim, "expected": full, "direct": direct})
        ok &= direct
    md = _md_table(["k", "l", "dim", "expected"], [[r["k"], r["l"], r["dim"], r["expected"]] for r in rows])
    return TaskResult("", "vkl_table", ok, {"invariant_killed": invariant, "rows": rows}, {"k_max": k_max},
                      markdown=md)


def task_submodule(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D, L_max, L_stab = _limits(t)
    seed = cfg.poly(t.get("seed", 1), "seed")
    h = generate_submodule(seed, cfg.lie, cfg.variety, D, L_max, L_stab, tag=t.get("tag", DPI_PRIME))
    res = h.summary()
    if cfg.lie.k_generator is not None:
        res["isotypic_dims"] = {str(k): v for k, v in isotypic_dims(h.space, cfg.lie, cfg.variety).items()}
    res["witness_words"] = [w.describe() for w in h.witnesses[:50]]
    return TaskResult("", "submodule", h.stabilized, res, {"D": D, "L_max": L_max, "stabilized": h.stabilized})


def task_reducing_chain(cfg: JobConfig, t: dict, rng: random.Random) -> TaskResult:
    D, L_max, L_stab = _limits(t)
    seed = cfg.poly(t.get("seed", 1), "seed")
    lie = cfg.lie
    chains_ops = []
    if "ops" in t:
        chains_ops.append([(n, lie.element(n)) for n in t["ops"]])
    for _ in range(t.get("random_chains", 0)):
        length = t.get("chain_length", 3)
        chains_ops.append([rng.choice(lie.basis) for _ in range(length)])
    if not chains_ops:
        chains_ops.append([])
    chains, ok, stab = [], True, True
    for ops in chains_ops:
        try:
            ch = build_reducing_chain(seed, ops, lie, cfg.variety, D, L_max, L_stab)
            inc = ch.inclusions()
            chains.append({"labels": ch.labels, "dims": ch.dims, "inclusions": inc,
                           "stabilized": [h.stabilized for h in ch.handles]})
            ok &= all(inc)
            stab &= all(h.stabilized for h in ch.handles)
        except (InclusionViolation, ValueError) as exc:
            chains.append({"labels": [n for n, _ in ops], "error": str(exc)})
            ok = False
    md = _md_table(["chain", "dims", "inclusions"],
                   [[" > ".join(c.get("labels", [])), c.get("dims", "-"), c.get("inclusions", c.get("error"))]
                    for c in chains])
    return TaskResult("", "reducing_chain", ok, {"chains": chains},
                      {"D": D, "L_max": L_max, "stabilized": stab}, markdown=md)


def _direct_sum(cfg: JobConfig, seeds: List[Polynomial], D, L_max, L_stab, require) -> TaskResult:
    handles = [generate_submodule(s, cfg.lie, cfg.variety, D, L_max, L_stab) for s in seeds]
    rep = direct_sum_check(handles, full_truncation(cfg.variety, D))
    flags = {"spanning": rep.spanning, "pairwise_zero": rep.pairwise_zero, "direct": rep.direct,
             "stabilized": rep.all_stabilized}
    ok = all(flags[r] for r in require)
    res = rep.to_json()
    res["seeds"] = [str(s) for s in seeds]
    res["handles"] = [h.summary() for h in handles]
    res["required"] = list(require)
    md = _md_table(["seed", "dim", "rounds", "stabilized"],
                   [[str(s), h.dim, h.rounds, h.stabilized] for s, h in zip(seeds, handles)])
    md.append("")
    md.append(f"sum of dims {sum(rep.dims)}, target dim {rep.target_dim}, spanning {rep.spanning}, "
              f"pairwise zero {rep.pairwise_zero}, direct {rep.direct}")
    return TaskResult("", "direct_sum", ok, res, {"D": D, "L_max": L_max, "stabilized": rep.all_stabilized},
                      markdown=md)


ALL_REQUIREMENTS = ["spanning", "pairwise_zero", "direct", "stabilized"]


def task_direct_sum(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D, L_max, L_stab = _limits(t)
    if "seeds" not in t:
        raise ConfigValidationError("tasks/direct_sum/seeds", "seeds are required")
    seeds = [cfg.poly(s, f"seeds/{i}") for i, s in enumerate(t["seeds"])]
    return _direct_sum(cfg, seeds, D, L_max, L_stab, t.get("require", ALL_REQUIREMENTS))


def task_verify_example1(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D, L_max, L_stab = _limits(t)
    local = cfg
    if cfg.lie.name != "sl2_standard" or not cfg.variety.is_affine_space:
        local = JobConfig(Variety(2), sl2_standard(), [])
    seeds = [parse_polynomial(s, 2) for s in ("1", "r2", "q+", "q-")]
    r = _direct_sum(local, seeds, D, L_max, L_stab, ALL_REQUIREMENTS)
    r.kind = "verify_example1"
    return r


def _indices(cfg: JobConfig, t: dict, D: int) -> List[int]:
    if "indices" in t:
        return list(t["indices"])
    if "index_range" in t:
        a, b = t["index_range"]
        return list(range(a, b + 1))
    return candidate_indices(cfg.lie, D)


def task_isotypic_table(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D = t.get("D", 6)
    idx = _indices(cfg, t, D)
    full = full_truncation(cfg.variety, D)
    dims = isotypic_dims(full, cfg.lie, cfg.variety)
    identities = projector_identities_check(idx, D, cfg.lie, cfg.variety)
    complete = sum(dims.values()) == full.dim
    covered = set(dims) <= set(idx)
    res = {"indices": idx, "dims": {str(k): v for k, v in dims.items()}, "total": sum(dims.values()),
           "truncation_dim": full.dim, "projector_identities": identities, "complete": complete,
           "indices_cover_occurring": covered}
    md = _md_table(["index", "dim"], [[k, v] for k, v in dims.items()])
    return TaskResult("", "isotypic_table", identities and complete, res, {"D": D}, markdown=md)


def task_weight_table(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D = t.get("D", 6)
    lie, V = cfg.lie, cfg.variety
    if not lie.cartan:
        raise ConfigValidationError("lie/cartan", "weight_table needs Cartan data")
    if "weights" in t:
        weights = [tuple(GaussianRational.coerce(x) if not isinstance(x, (dict, str)) else cfg_scalar(x)
                         for x in w) for w in t["weights"]]
    else:
        if len(lie.cartan) != 1:
            raise ConfigValidationError("tasks/weights", "explicit weights needed for a Cartan of rank > 1")
        weights = [(GaussianRational(0, n),) for n in _indices(cfg, t, D)]
    rows, total = [], 0
    ladder_ok = True
    roots = [(E, _root_value(lie.cartan, E)) for E in lie.pos_root_vectors + lie.neg_root_vectors]
    for w in weights:
        S = weight_space(list(w), lie, V, D)
        total += S.dim
        for b in S.basis:
            for E, alpha in roots:
                if alpha is None:
                    continue
                img = apply_dpi_prime(E, b, V)
                if img.is_zero():
                    continue
                got = weight_of(img, lie, V)
                if got != tuple(a + c for a, c in zip(w, alpha)):
                    ladder_ok = False
        rows.append({"weight": [x.to_json() for x in w], "dim": S.dim})
    full = full_truncation(V, D).dim
    compact = all(V.normal_form(apply_drho(H, Polynomial.r_squared(cfg.n))).is_zero() for H in lie.cartan)
    complete = (total == full) if compact and "weights" not in t else None
    ok = ladder_ok and complete is not False
    md = _md_table(["weight", "dim"], [[" ".join(str(cfg_scalar(x)) for x in r["weight"]), r["dim"]] for r in rows])
    return TaskResult("", "weight_table", ok, {"rows": rows, "total": total, "truncation_dim": full,
                                               "complete": complete, "weight_ladder": ladder_ok}, {"D": D},
                      markdown=md)


def cfg_scalar(x):
    from .gaussian import parse_scalar

    return parse_scalar(x)


def _root_value(cartan: List[Matrix], E: Matrix):
    vals = []
    for H in cartan:
        br = bracket(H, E)
        c = coordinates_in([E], br)
        if c is None:
            return None
        vals.append(c[0])
    return tuple(vals)


def task_highest_weight(cfg: JobConfig, t: dict, rng) -> TaskResult:
    D, L_max, L_stab = _limits(t)
    seed = cfg.poly(t.get("seed", 1), "seed")
    cas = t.get("casimir", True)
    if cas is True:
        casimir = cfg.lie.casimir or None
    elif cas is False:
        casimir = None
    else:
        from .config import parse_casimir

        casimir = parse_casimir(cas, cfg.lie, "tasks/casimir")
    rep = highest_weight_check(seed, cfg.lie, cfg.variety, D, casimir, L_max, L_stab)
    return TaskResult("", "highest_weight", rep.ok, rep.to_json(),
                      {"D": D, "L_max": L_max, "stabilized": rep.stabilized})


def task_approx_certificate(cfg: JobConfig, t: dict, rng: random.Random) -> TaskResult:
    if "g" not in t:
        raise ConfigValidationError("tasks/approx_certificate/g", "group element g is required")
    n = cfg.n
    try:
        g = GroupElement.from_matrix(parse_group_matrix(t["g"], n, "g"), group_condition(cfg))
    except ValueError as exc:
        raise ConfigValidationError("tasks/approx_certificate/g", str(exc)) from None
    p = cfg.poly(t.get("seed", 1), "seed")
    ks = t.get("k", list(range(1, 9)))
    ks = [ks] if isinstance(ks, int) else list(ks)
    budget = t.get("budget", 4096)
    certs = [certify(g, p, k, cfg.variety, budget, seed=rng.randrange(2 ** 31)) for k in ks]
    sound = all(c.sound for c in certs if c.valid)
    tails = [c.tail for c in certs]
    decreasing = all(b < a for a, b in zip(tails, tails[1:]) if a > 0)
    from .operators import rho_substitute

    C = sup_norm_upper(rho_substitute(g, p, cfg.variety), Fraction(1, 2))
    kap = certs[0].kappa if certs else Fraction(0)
    term_rows, ratio_ok = [], True
    if 0 < kap:
        for l in range(5, 31):
            b = term_norm_bound(l, kap, C)
            a = term_norm_asymptotic(l, kap, C)
            ratio = b / a
            ratio_ok &= 1 / 3 <= ratio <= 3
            term_rows.append({"l": l, "bound": fmt(b), "asymptotic": fmt(a), "ratio": f"{ratio:.6f}"})
    ok = sound and decreasing and ratio_ok
    res = {"certificates": [c.to_json() for c in certs], "sound": sound, "tail_strictly_decreasing": decreasing,
           "term_norm": term_rows, "term_norm_within_factor_3": ratio_ok,
           "advisory": any(c.advisory for c in certs)}
    md = _md_table(["k", "kappa", "tail", "empirical_sup", "advisory"],
                   [[c.k, c.kappa, fmt(c.tail), fmt(c.empirical_sup), c.advisory] for c in certs])
    return TaskResult("", "approx_certificate", ok, res, {"k": ks, "budget": budget}, markdown=md)


def task_lemma1_probe(cfg: JobConfig, t: dict, rng) -> TaskResult:
    from .gaussian import parse_rational

    kap = parse_rational(t.get("kappa", "1/8"))
    rho = parse_rational(t.get("rho", "1/4"))
    l_max = t.get("l_max", 40)
    rows = lemma1_probe(kap, rho, l_max, grid=t.get("grid", 20001))
    bounded = all(r.ok for r in rows)
    monotone = all(b.bound <= a.bound for a, b in zip(rows, rows[1:]))
    last = rows[-1].bound if rows else 1.0
    res = {"kappa": str(kap), "rho": str(rho), "lambda": str(rho / abs(kap) - 1), "l_max": l_max,
           "rows": [{"l": r.l, "grid_sup": fmt(r.grid_sup), "bound": fmt(r.bound), "ok": r.ok} for r in rows],
           "defect_below_bound": bounded, "bound_monotone": monotone,
           "bound_at_l_max": fmt(last), "bound_below_1e-12_at_l_max": last < 1e-12,
           "max_grid_sup_at_l_max": fmt(rows[-1].grid_sup) if rows else None}
    md = _md_table(["l", "grid sup", "tail_sigma"], [[r.l, fmt(r.grid_sup), fmt(r.bound)] for r in rows])
    return TaskResult("", "lemma1_probe", bounded and monotone, res, {"l_max": l_max}, markdown=md)


DISPATCH: Dict[str, Callable] = {
    "verify_operators": task_verify_operators,
    "commutators": task_commutators,
    "vkl_table": task_vkl_table,
    "submodule": task_submodule,
    "reducing_chain": task_reducing_chain,
    "direct_sum": task_direct_sum,
    "isotypic_table": task_isotypic_table,
    "weight_table": task_weight_table,
    "highest_weight": task_highest_weight,
    "approx_certificate": task_approx_certificate,
    "lemma1_probe": task_lemma1_probe,
    "verify_example1": task_verify_example1,
}


def run_task(cfg: JobConfig, index: int, seed_rng: int) -> TaskResult:
    t = cfg.tasks[index]
    kind = t["kind"]
    name = t.get("name", f"{index:02d}_{kind}")
    rng = random.Random(seed_rng * 1_000_003 + index)
    try:
        r = DISPATCH[kind](cfg, t, rng)
    except ConfigValidationError:
        raise
    except Exception as exc:  # task-level failure, reported rather than raised
        return TaskResult(name, kind, False, {}, error=f"{type(exc).__name__}: {exc}")
    r.name = name
    return r
