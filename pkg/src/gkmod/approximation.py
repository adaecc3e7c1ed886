"""Truncated group action pi_k(g), kappa constants and certified tail bounds.

Floats appear only in this module.  Every float that is used as an upper
bound is nudged upward with ``math.nextafter`` after each rounding step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import gammainc
from scipy.stats import qmc

from .gaussian import GaussianRational
from .lie import GroupElement, Matrix
from .operators import rho_substitute
from .polynomial import Polynomial
from .variety import Variety

C_SAFETY = 2.0
KAPPA_VALID = Fraction(1, 4)


def _up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, math.inf)
    return x


def _real_entries(m: Matrix) -> List[List[Fraction]]:
    rows = []
    for r in m.rows:
        if any(a.im != 0 for a in r):
            raise ValueError("kappa is defined for real matrices only")
        rows.append([a.re for a in r])
    return rows


def kappa(g_matrix) -> Fraction:
    """max_i |g_ii^2 - 1| + max_{k != i} g_ki^2 + max_{k, i<j} |g_ki g_kj|, exactly."""
    m = g_matrix if isinstance(g_matrix, Matrix) else Matrix(g_matrix)
    a = _real_entries(m)
    n = len(a)
    diag = max(abs(a[i][i] ** 2 - 1) for i in range(n))
    off = max((a[k][i] ** 2 for k in range(n) for i in range(n) if k != i), default=Fraction(0))
    cross = max((abs(a[k][i] * a[k][j]) for k in range(n) for i in range(n) for j in range(i + 1, n)),
                default=Fraction(0))
    return diag + off + cross


def kappa_gershgorin(g_matrix) -> Fraction:
    """Row-sum bound on |(g m)^2 - m^2| / m^2, via the symmetric matrix g^T g - I."""
    m = g_matrix if isinstance(g_matrix, Matrix) else Matrix(g_matrix)
    a = _real_entries(m)
    n = len(a)
    best = Fraction(0)
    for i in range(n):
        s = Fraction(0)
        for j in range(n):
            v = sum(a[k][i] * a[k][j] for k in range(n)) - (1 if i == j else 0)
            s += abs(v)
        best = max(best, s)
    return best


def kappa_certified(g: GroupElement) -> Fraction:
    """A kappa for g^{-1} that is a valid bound: the larger of the two estimates."""
    return max(kappa(g.inverse), kappa_gershgorin(g.inverse))


def tail_sigma(l: int, lam) -> float:
    """(l/lam)^l e^{-l} / l!, rounded upward; l = 0 gives 1."""
    if l < 0:
        raise ValueError("l must be non-negative")
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if l == 0:
        return 1.0
    exact = (Fraction(l) / lam) ** l / math.factorial(l)
    try:
        head = _up(float(exact))
        val = _up(head * _up(math.exp(-l)))
        if head != math.inf and val > 0.0:
            return val
    except OverflowError:
        pass
    a, b = l * math.log(l / float(lam)), math.lgamma(l + 1)
    log_val = a - l - b
    # margin covers the cancellation between the three large terms
    slack = 16 * (abs(a) + l + abs(b)) * 2.0 ** -52
    return _up(math.exp(log_val + slack), 4)


def sup_norm_upper(p: Polynomial, sigma) -> float:
    """Sum over terms of |c| * sup_r r^d e^{-sigma r^2}: an upper bound for sup |p| e^{-sigma m^2}."""
    sigma = float(Fraction(sigma))
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    total = 0.0
    for e, c in p.terms.items():
        d = sum(e)
        mag = _up(math.sqrt(_up(float(c.norm()))))
        if d == 0:
            factor = 1.0
        else:
            factor = _up(_up((d / (2 * sigma)) ** (d / 2)) * _up(math.exp(-d / 2)))
        total = _up(total + _up(mag * factor))
    return total


def _radius(p: Polynomial, sigma: float, level: float) -> float:
    """Smallest radius beyond which the termwise envelope stays below ``level``."""
    coeffs = [(sum(e), abs(complex(c))) for e, c in p.terms.items()]
    dmax = max(d for d, _ in coeffs)
    r = max(1.0, math.sqrt(dmax / (2 * sigma)))

    def env(x):
        return sum(a * x ** d for d, a in coeffs) * math.exp(-sigma * x * x)

    while env(r) > level:
        r *= 1.1
    return r


def _points_on(V: Variety, box: np.ndarray) -> np.ndarray:
    """Lift samples of the free coordinates onto V by solving for the eliminated variable."""
    if V.ideal_generator is None:
        return box
    v = V._lead_var
    gen = V.ideal_generator
    deg = max(e[v] for e in gen.terms)
    out = []
    for row in box:
        coeffs = np.zeros(deg + 1, dtype=complex)
        for e, c in gen.terms.items():
            val = complex(c)
            for j, k in enumerate(e):
                if j != v and k:
                    val *= row[j] ** k
            coeffs[deg - e[v]] += val
        for root in np.roots(coeffs):
            if abs(root.imag) < 1e-12:
                pt = row.copy()
                pt[v] = root.real
                out.append(pt)
    return np.array(out).reshape(-1, V.ambient_dim)


def sample_points(V: Variety, radius: float, budget: int, seed: int = 0) -> np.ndarray:
    """Quasi-random points of V inside the box [-radius, radius]^n."""
    n = V.ambient_dim
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    box = (sampler.random(budget) * 2 - 1) * radius
    return _points_on(V, box)


def sup_norm_sample(p: Polynomial, sigma, V: Variety | None = None, budget: int = 2048,
                    seed: int = 0) -> float:
    """Sampled lower estimate of sup_M |p(m)| e^{-sigma m^2}."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if p.is_zero():
        return 0.0
    V = V if V is not None else Variety(p.n)
    sigma = float(Fraction(sigma))
    probe = sample_points(V, max(1.0, math.sqrt(p.degree() / (2 * sigma))), min(budget, 256), seed)
    best = _weighted_max(p, sigma, probe)
    R = _radius(p, sigma, 1e-3 * best if best > 0 else 1e-12)
    pts = sample_points(V, R, budget, seed + 1)
    return max(best, _weighted_max(p, sigma, pts))


def _weighted_max(p: Polynomial, sigma: float, pts: np.ndarray) -> float:
    if len(pts) == 0:
        return 0.0
    vals = np.abs(p.evaluate_numeric(pts)) * np.exp(-sigma * np.sum(pts ** 2, axis=1))
    return float(vals.max())


def pi_k(g: GroupElement, p: Polynomial, k: int, V: Variety | None = None) -> Polynomial:
    """Polynomial part of rho(g)p * sum_{j<=k} (r^2 - rho(g) r^2)^j / j!."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = p.n
    r2 = Polynomial.r_squared(n)
    head = rho_substitute(g, p, V)
    delta = r2 - rho_substitute(g, r2, V)
    total = Polynomial.constant(n, 1)
    power = Polynomial.constant(n, 1)
    for j in range(1, k + 1):
        power = power * delta
        if V is not None:
            power = V.normal_form(power)
        total = total + power.scale(GaussianRational(Fraction(1, math.factorial(j))))
    out = head * total
    return V.normal_form(out) if V is not None else out


def truncation_error_at(g: GroupElement, p: Polynomial, k: int, pts: np.ndarray) -> np.ndarray:
    """|pi(g)phi - pi_k(g)phi| at the given points."""
    n = p.n
    ginv = g.inverse.to_complex().real
    mapped = pts @ ginv.T
    exact = p.evaluate_numeric(mapped) * np.exp(-np.sum(mapped ** 2, axis=1))
    approx = pi_k(g, p, k).evaluate_numeric(pts) * np.exp(-np.sum(pts ** 2, axis=1))
    return np.abs(exact - approx)


@dataclass
class ApproxCertificate:
    g: GroupElement
    kappa: Fraction
    k: int
    C_upper: float
    tail: float
    empirical_sup: float
    kappa_g: Fraction = Fraction(0)
    kappa_ginv_formula: Fraction = Fraction(0)
    lam: Optional[Fraction] = None
    advisory: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.advisory

    @property
    def sound(self) -> bool:
        return self.empirical_sup <= self.tail

    def to_json(self) -> dict:
        return {
            "g": self.g.matrix.to_json(),
            "k": self.k,
            "kappa": _frac_str(self.kappa),
            "kappa_g": _frac_str(self.kappa_g),
            "kappa_ginv_formula": _frac_str(self.kappa_ginv_formula),
            "lambda": None if self.lam is None else _frac_str(self.lam),
            "C_upper": _fmt(self.C_upper),
            "tail": _fmt(self.tail),
            "empirical_sup": _fmt(self.empirical_sup),
            "advisory": self.advisory,
            "sound": self.sound,
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt(x: float) -> str:
    return "inf" if x == math.inf else f"{x:.12e}"


def tail_bound(k: int, kap: Fraction, C_upper: float) -> float:
    """Bound on ||pi(g)phi - pi_{k-1}(g)phi|| from C * Sigma_{k, 1/(2 kappa) - 1}."""
    if kap == 0:
        return 0.0 if k >= 1 else C_upper
    if kap >= Fraction(1, 2):
        return math.inf
    lam = 1 / (2 * kap) - 1
    return _up(C_upper * tail_sigma(k, lam))


def certify(g: GroupElement, p: Polynomial, k: int, V: Variety | None = None, budget: int = 4096,
            seed: int = 0) -> ApproxCertificate:
    """Certificate for the error of pi_{k-1}(g) on phi = p exp(-r^2)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    V = V if V is not None else Variety(p.n)
    kap_formula = kappa(g.inverse)
    kap = kappa_certified(g)
    C_upper = _up(C_SAFETY * sup_norm_upper(rho_substitute(g, p, V), Fraction(1, 2)))
    tail = tail_bound(k, kap, C_upper)
    lam = (1 / (2 * kap) - 1) if 0 < kap < Fraction(1, 2) else None
    notes = []
    advisory = kap > KAPPA_VALID
    if advisory:
        notes.append(f"kappa = {kap} exceeds 1/4; bound is advisory")
    if kap != kap_formula:
        notes.append(f"matrix-entry kappa {kap_formula} replaced by row-sum bound {kap}")
    emp = 0.0
    if not p.is_zero() and kap != 0:
        R = 1.5 * _radius(rho_substitute(g, p, V), 0.5, 1e-14)
        pts = sample_points(V, R, budget, seed)
        if len(pts):
            emp = float(truncation_error_at(g, p, k - 1, pts).max())
    return ApproxCertificate(g=g, kappa=kap, k=k, C_upper=C_upper, tail=tail, empirical_sup=emp,
                             kappa_g=kappa(g.matrix), kappa_ginv_formula=kap_formula, lam=lam,
                             advisory=advisory, notes=notes)


def term_norm_bound(l: int, kap, C: float) -> float:
    """kappa^l / l! * C * (2l)^l e^{-l}: bound on the l-th series term."""
    kap = Fraction(kap)
    if l == 0:
        return C
    exact = kap ** l * Fraction(2 * l) ** l / math.factorial(l)
    return _up(_up(float(exact)) * _up(math.exp(-l)) * C)


def term_norm_asymptotic(l: int, kap, C: float) -> float:
    return (2 * float(kap)) ** l * C / math.sqrt(l)


def term_norm_sample(g: GroupElement, p: Polynomial, l: int, pts: np.ndarray) -> float:
    """Sampled sup of |rho(g)p (r^2 - rho(g)r^2)^l / l! e^{-r^2}|."""
    n = p.n
    r2 = Polynomial.r_squared(n)
    delta = r2 - rho_substitute(g, r2)
    term = rho_substitute(g, p) * delta ** l
    vals = np.abs(term.evaluate_numeric(pts)) * np.exp(-np.sum(pts ** 2, axis=1)) / math.factorial(l)
    return float(vals.max())


def truncation_defect(l: int, kap: float, rho: float, y: np.ndarray) -> np.ndarray:
    """|e^{-rho y} (e^{kap y} - sum_{j<l} (kap y)^j / j!)| for y = x^2 >= 0."""
    if kap > 0:
        # e^{x} - partial sum = e^{x} * P(l, x) with P the regularized lower gamma
        return np.exp((kap - rho) * y) * gammainc(l, kap * y)
    import mpmath

    out = []
    for yy in y:
        x = mpmath.mpf(kap) * yy
        partial = mpmath.fsum(x ** j / mpmath.factorial(j) for j in range(l))
        out.append(float(abs(mpmath.exp(-rho * yy) * (mpmath.exp(x) - partial))))
    return np.array(out)


@dataclass
class Lemma1Row:
    l: int
    grid_sup: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.grid_sup <= self.bound + 1e-9


def lemma1_probe(kap, rho, l_max: int, y_max: float | None = None, grid: int = 20001) -> List[Lemma1Row]:
    """Grid sup of the truncation defect against tail_sigma(l, rho/|kap| - 1)."""
    kap, rho = Fraction(kap), Fraction(rho)
    if kap == 0 or rho <= 0:
        raise ValueError("need kappa != 0 and rho > 0")
    lam = rho / abs(kap) - 1
    if lam <= 0:
        raise ValueError("rho/|kappa| must exceed 1")
    if y_max is None:
        # the defect envelope peaks near y = l / (|kap| lam)
        y_max = 4.0 * (l_max + 10) / (float(abs(kap)) * float(lam))
    y = np.linspace(0.0, y_max, grid)
    rows = []
    for l in range(1, l_max + 1):
        d = truncation_defect(l, float(kap), float(rho), y)
        rows.append(Lemma1Row(l, float(d.max()), tail_sigma(l, lam)))
    return rows
