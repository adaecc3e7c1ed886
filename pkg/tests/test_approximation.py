"""kappa, tail bounds, sup norms, truncated actions and certificates."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize_scalar

from gkmod.approximation import (certify, kappa, kappa_certified, kappa_gershgorin, lemma1_probe, pi_k,
                                 sample_points, sup_norm_sample, sup_norm_upper, tail_bound, tail_sigma,
                                 term_norm_asymptotic, term_norm_bound, term_norm_sample, truncation_defect,
                                 truncation_error_at)
from gkmod.lie import GroupElement, Matrix
from gkmod.polynomial import Polynomial, parse_polynomial
from gkmod.variety import Variety, hyperboloid

ONE2 = Polynomial.constant(2, 1)
UNIPOTENT = GroupElement.from_matrix([[1, Fraction(1, 10)], [0, 1]])


@pytest.mark.parametrize("m, expected", [
    (Matrix.identity(2), Fraction(0)),
    (Matrix.diag(2, Fraction(1, 2)), Fraction(3)),
    (Matrix([[1, Fraction(1, 2)], [0, 1]]), Fraction(3, 4)),
])
def test_kappa_examples(m, expected):
    assert kappa(m) == expected


def test_kappa_of_unipotent_inverse():
    assert kappa(UNIPOTENT.inverse) == Fraction(11, 100)
    assert kappa_certified(UNIPOTENT) == Fraction(11, 100)


entries = st.builds(Fraction, st.integers(-3, 3), st.integers(4, 12))


@given(st.lists(entries, min_size=4, max_size=4), st.lists(st.floats(-3, 3), min_size=2, max_size=2))
def test_gershgorin_kappa_bounds_the_quadratic_form(e, x):
    g = Matrix([[1 + e[0], e[1]], [e[2], 1 + e[3]]])
    a = [[float(v.re) for v in row] for row in g.rows]
    x = np.array(x)
    gx = np.array(a) @ x
    assert abs(gx @ gx - x @ x) <= float(kappa_gershgorin(g)) * (x @ x) + 1e-12


def _oracle_tail(l, lam):
    res = minimize_scalar(lambda y: -(y ** l) * math.exp(-lam * y) / math.factorial(l), bounds=(0, 10 * (l + 1)),
                          method="bounded", options={"xatol": 1e-12})
    return -res.fun


def test_tail_sigma_examples():
    assert tail_sigma(0, 3) == 1.0
    assert tail_sigma(1, 1) == pytest.approx(math.exp(-1), rel=1e-14)
    assert tail_sigma(4, 2) == pytest.approx(0.012213, rel=5e-4)


@given(st.integers(1, 30), st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3)]))
def test_tail_sigma_matches_maximization(l, lam):
    val = tail_sigma(l, lam)
    oracle = _oracle_tail(l, float(lam))
    assert val >= oracle
    assert val == pytest.approx(oracle, rel=1e-7)


def test_tail_sigma_large_l_uses_log_domain():
    l = 2000
    with mpmath.workdps(80):
        expected = mpmath.power(mpmath.mpf(l), l) * mpmath.exp(-l) / mpmath.factorial(l)
    assert tail_sigma(l, 1) >= float(expected)
    assert tail_sigma(l, 1) == pytest.approx(float(expected), rel=1e-9)


@pytest.mark.parametrize("lam", [1, 2, 5])
def test_tail_sigma_monotone_beyond_lambda(lam):
    vals = [tail_sigma(l, lam) for l in range(lam, 60)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_tail_sigma_errors():
    with pytest.raises(ValueError):
        tail_sigma(-1, 1)
    with pytest.raises(ValueError):
        tail_sigma(2, 0)


def test_sup_norm_upper_examples():
    assert sup_norm_upper(ONE2, Fraction(1, 2)) == pytest.approx(1.0)
    assert sup_norm_upper(parse_polynomial("m1^2", 2), Fraction(1, 2)) == pytest.approx(2 * math.exp(-1), rel=1e-14)
    assert sup_norm_upper(parse_polynomial("q+", 2), Fraction(1, 2)) == pytest.approx(2 * math.exp(-0.5), rel=1e-14)


@given(st.sampled_from(["m1^2", "q+^3", "m1*m2 - 3", "i*m2^4 + m1"]))
def test_sampled_sup_below_upper_bound(text):
    p = parse_polynomial(text, 2)
    assert sup_norm_sample(p, Fraction(1, 2), budget=1024) <= sup_norm_upper(p, Fraction(1, 2))


def test_sampled_sup_converges_from_below():
    p = parse_polynomial("m1^2", 2)
    vals = [sup_norm_sample(p, Fraction(1, 2), budget=b) for b in (64, 1024, 16384)]
    assert all(v <= 2 * math.exp(-1) + 1e-12 for v in vals)
    assert vals[-1] == pytest.approx(2 * math.exp(-1), rel=1e-2)
    assert sup_norm_sample(Polynomial.zero(2), Fraction(1, 2)) == 0.0


def test_sample_points_on_hyperboloid():
    V = hyperboloid(1)
    pts = sample_points(V, 3.0, 256, seed=1)
    assert len(pts) > 0
    resid = -pts[:, 0] ** 2 - pts[:, 1] ** 2 + pts[:, 2] ** 2 - 1
    assert np.max(np.abs(resid)) < 1e-9


def test_pi_k_examples():
    g = GroupElement.from_matrix(Matrix.diag(2, Fraction(1, 2)))
    p = parse_polynomial("m1 + 2*m2^2", 2)
    assert pi_k(GroupElement.from_matrix(Matrix.identity(2)), p, 5) == p
    from gkmod.operators import rho_substitute

    assert pi_k(g, p, 0) == rho_substitute(g, p)
    assert pi_k(g, ONE2, 1) == parse_polynomial("1 + 3/4*m1^2 - 3*m2^2", 2)


def test_pi_k_errors_decrease_pointwise_near_origin():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.4, 1.4, size=(200, 2))
    p = parse_polynomial("m1 - m2^2 + 1", 2)
    errs = [truncation_error_at(UNIPOTENT, p, k, pts) for k in range(7)]
    for a, b in zip(errs, errs[1:]):
        assert np.all(b <= a + 1e-15)


def test_certificates_sound_and_decreasing():
    certs = [certify(UNIPOTENT, ONE2, k, budget=2048, seed=k) for k in range(1, 9)]
    assert all(c.valid and c.sound for c in certs)
    tails = [c.tail for c in certs]
    assert all(b < a for a, b in zip(tails, tails[1:]))
    assert certs[0].kappa == Fraction(11, 100)


def test_certificate_identity_and_advisory():
    c = certify(GroupElement.from_matrix(Matrix.identity(2)), ONE2, 3)
    assert c.tail == 0.0 and c.empirical_sup == 0.0
    big = certify(GroupElement.from_matrix(Matrix.diag(2, Fraction(1, 2))), ONE2, 2, budget=256)
    assert big.advisory and not big.valid
    assert big.tail == math.inf
    j = c.to_json()
    assert j["kappa"] == "0/1" and j["sound"] is True


def test_tail_bound_limits():
    assert tail_bound(3, Fraction(0), 5.0) == 0.0
    assert tail_bound(3, Fraction(1, 2), 5.0) == math.inf


def test_term_norm_bound_tracks_asymptotic():
    kap, C = Fraction(11, 100), 2.0
    for l in range(5, 31):
        ratio = term_norm_bound(l, kap, C) / term_norm_asymptotic(l, kap, C)
        assert 1 / 3 <= ratio <= 3
        # Stirling: ratio -> 1/sqrt(2 pi)
        assert ratio == pytest.approx(1 / math.sqrt(2 * math.pi), rel=0.02)


def test_term_norm_bound_dominates_samples():
    from gkmod.operators import rho_substitute

    C = sup_norm_upper(rho_substitute(UNIPOTENT, ONE2), Fraction(1, 2))
    pts = sample_points(Variety(2), 12.0, 4096, seed=2)
    kap = kappa_certified(UNIPOTENT)
    for l in range(1, 12):
        assert term_norm_sample(UNIPOTENT, ONE2, l, pts) <= term_norm_bound(l, kap, 2 * C)


def test_truncation_defect_negative_kappa_matches_mpmath():
    y = np.linspace(0, 50, 11)
    d = truncation_defect(3, -0.125, 0.25, y)
    for yy, v in zip(y, d):
        x = -0.125 * yy
        ref = abs(math.exp(-0.25 * yy) * (math.exp(x) - (1 + x + x * x / 2)))
        assert v == pytest.approx(ref, rel=1e-9, abs=1e-300)


def test_lemma1_probe_ratio_two():
    rows = lemma1_probe(Fraction(1, 8), Fraction(1, 4), 40, grid=4001)
    assert all(r.ok for r in rows)
    assert all(b.bound < a.bound for a, b in zip(rows, rows[1:]))


def test_lemma1_probe_errors():
    with pytest.raises(ValueError):
        lemma1_probe(0, 1, 3)
    with pytest.raises(ValueError):
        lemma1_probe(Fraction(1, 2), Fraction(1, 2), 3)
