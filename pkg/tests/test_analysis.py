import math

import numpy as np
import pytest
from hypothesis import assume, example, given
from hypothesis import strategies as st

from wgconv.analysis import (ConstraintError, Dense, Discrete, Inconclusive, PowerSum, TermOverflow,
                             build_log_periodic, cd_functions, check_cm, check_pd, classify_orbit, compute_cd,
                             derivative_factors, lemma1_residual, orbit_cd, prop3_transform, solve_p, verify_eq2)
from wgconv.analysis import powersum as ps_mod
from wgconv.core import (Dirac, Empirical, LogPeriodic, MixtureOfStable, Pseudostable, RngStream, SymmetricStable,
                         UnsupportedRepresentation, Verdict)
from wgconv.densities import eval_cf
from wgconv.stattests import cf_distance

unit = st.floats(1e-3, 1 - 1e-3)


# --- solve_p --------------------------------------------------------------------


def bisect_oracle(a, b):
    lo, hi = 1e-9, 1.0
    while a**hi + b**hi > 1:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if a**mid + b**mid > 1:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_solve_p_examples():
    assert abs(solve_p(0.5, 0.5) - 1) < 1e-12
    assert abs(solve_p(2**-0.5, 2**-0.5) - 2) < 1e-12
    p = solve_p(0.9, 0.5)
    assert p == pytest.approx(bisect_oracle(0.9, 0.5), abs=1e-12)
    assert p == pytest.approx(2.2465, abs=5e-4)
    assert abs(0.9**p + 0.5**p - 1) < 1e-12


@given(unit, unit)
def test_solve_p_residual(a, b):
    p = solve_p(a, b)
    assert p > 0
    assert abs(a**p + b**p - 1) < 1e-12


@pytest.mark.parametrize("a,b", [(0, 0.5), (1, 0.5), (0.5, 1.2), (-0.1, 0.3)])
def test_solve_p_rejects(a, b):
    with pytest.raises(ValueError):
        solve_p(a, b)


@given(unit, unit, st.integers(0, 30), st.floats(1e-3, 10))
def test_lemma1_identity(a, b, n, t):
    assert lemma1_residual(a, b, n, t) < 1e-10


# --- classify_orbit ------------------------------------------------------------------


def test_classify_examples():
    r = classify_orbit(0.3, 0.3)
    assert isinstance(r, Discrete) and r.c == pytest.approx(1 / 0.3, rel=1e-12)
    r = classify_orbit(0.25, 0.5)
    assert isinstance(r, Discrete) and r.c == pytest.approx(2.0, rel=1e-12)
    assert isinstance(classify_orbit(0.5, 1 / 3, depth=40), Dense)
    assert isinstance(classify_orbit(0.5, 1 / 3, depth=2), Inconclusive)


@given(st.integers(1, 12), st.integers(1, 12), st.floats(1.05, 3))
def test_classify_commensurable(i, j, c):
    # a = c^-i, b = c^-j generate the group {c0^k} with c0 = c^gcd(i, j)
    r = classify_orbit(c**-i, c**-j)
    assert isinstance(r, Discrete)
    assert r.c == pytest.approx(c ** math.gcd(i, j), rel=1e-9)


# --- log-periodic ------------------------------------------------------------------


def test_log_periodic_eps0():
    spec, a, b = build_log_periodic(1.5, 0.0)
    t = np.linspace(-4, 4, 33)
    np.testing.assert_array_equal(eval_cf(spec, t), eval_cf(SymmetricStable(1.0, 1.5), t))


@pytest.mark.parametrize("p,eps", [(1.0, 0.1), (2.0, 0.05), (0.7, 0.3)])
def test_log_periodic_semistable(p, eps):
    spec, a, b = build_log_periodic(p, eps)
    assert a == b == pytest.approx(2 ** (-1 / p))
    t = np.geomspace(0.01, 100, 1000)
    assert np.max(np.abs(eval_cf(spec, t) - eval_cf(spec, a * t) * eval_cf(spec, b * t))) < 1e-12


def test_log_periodic_higher_i():
    spec, a, b = build_log_periodic(1.0, 0.2, i=2)
    assert spec.p == pytest.approx(0.5)
    assert abs(a**spec.p + b**spec.p - 1) < 1e-12
    t = np.geomspace(0.01, 100, 200)
    assert np.max(np.abs(eval_cf(spec, t) - eval_cf(spec, a * t) * eval_cf(spec, b * t))) < 1e-12


# --- compute_cd / verify_eq2 ------------------------------------------------------------


def test_compute_cd_examples():
    cd = compute_cd(1, 1, 1, 2, 1.0, 1.0, 1.0)
    assert cd.c == pytest.approx(math.sqrt(2), rel=1e-15)
    assert cd.d == pytest.approx(2 - math.sqrt(2), rel=1e-14)
    cd = compute_cd(3, 4, 1.5, 1.5, 1.0, 2.0, 0.7)
    assert cd.d == 0.0
    assert cd.c == pytest.approx((3**1.5 + 4**1.5) ** (1 / 1.5), rel=1e-14)


def test_compute_cd_rejects_q_below_p():
    with pytest.raises(ConstraintError):
        compute_cd(1, 1, 2.0, 1.0, 1, 1, 1)
    assert issubclass(ConstraintError, ValueError)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(0.2, 2), st.floats(0, 2), st.integers(-20, 20))
def test_compute_cd_homogeneous(r, s, p, dq, k):
    assume(max(r, s) > 1e-6)
    q = p + dq
    lam = 2.0**k
    base = compute_cd(r, s, p, q, 1.0, 1.3, 0.8)
    scaled = compute_cd(lam * r, lam * s, p, q, 1.0, 1.3, 0.8)
    assert scaled.c == lam * base.c
    assert scaled.d == lam * base.d


@given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.2, 2), st.floats(0, 2), st.floats(0.05, 50))
def test_compute_cd_homogeneous_general(r, s, p, dq, lam):
    q = p + dq
    base = compute_cd(r, s, p, q, 1.0, 1.3, 0.8)
    scaled = compute_cd(lam * r, lam * s, p, q, 1.0, 1.3, 0.8)
    assert scaled.c == pytest.approx(lam * base.c, rel=1e-13)
    assert scaled.d == pytest.approx(lam * base.d, rel=1e-12, abs=1e-12 * lam * base.c)


def _pairs(n, seed):
    g = np.random.default_rng(seed)
    return [tuple(x) for x in g.uniform(0.05, 3, (n, 2))]


@pytest.mark.parametrize("C,D,q,p,B", [(1, 1, 2, 1, 1), (0.5, 2, 3, 1.5, 0.7), (1, 1, 1.5, 0.5, 2.0)])
def test_verify_eq2_pseudostable(C, D, q, p, B):
    phi, psi = Pseudostable(C, D, q, p), SymmetricStable(B, p)
    c_fun, d_fun = cd_functions(p, q, C, D, B)
    rep = verify_eq2(phi, psi, c_fun, d_fun, _pairs(50, 1), np.linspace(0, 3, 100))
    assert rep.verdict is Verdict.PASS
    assert rep.details["max_residual"] < 1e-12


def test_verify_eq2_stable_d0():
    phi = SymmetricStable(1.7, 1.2)
    c_fun = lambda r, s: (r**1.2 + s**1.2) ** (1 / 1.2)
    rep = verify_eq2(phi, phi, c_fun, lambda r, s: 0.0, _pairs(20, 2), np.linspace(0, 5, 100))
    assert rep.details["max_residual"] < 1e-12


def test_verify_eq2_log_periodic_orbit():
    spec, a, b = build_log_periodic(1.0, 0.1)
    pairs = [(x * a, x * b) for x in np.geomspace(0.1, 10, 25)]
    c_fun, d_fun = orbit_cd(a, b)
    # c(r, s) = x on the orbit: phi(x a t) phi(x b t) = phi(x t)
    rep = verify_eq2(spec, spec, c_fun, d_fun, pairs, np.geomspace(0.01, 100, 200))
    assert rep.details["max_residual"] < 1e-12


def test_verify_eq2_detects_wrong_cd():
    phi, psi = Pseudostable(1, 1, 2, 1), SymmetricStable(1, 1)
    c_fun, _ = cd_functions(1, 2, 1, 1, 1)
    rep = verify_eq2(phi, psi, c_fun, lambda r, s: 0.0, _pairs(5, 3), np.linspace(0, 3, 50))
    assert rep.verdict is Verdict.VIOLATION
    assert rep.witness["residual"] > 1e-3


def test_verify_eq2_empirical_band():
    spec = MixtureOfStable(2.0, Empirical(np.ones(10_000)))
    rep = verify_eq2(spec, spec, lambda r, s: math.hypot(r, s), lambda r, s: 0.0, [(1, 1)], np.linspace(0, 2, 20))
    assert rep.resolution["tol"] == pytest.approx(4 / 100)
    assert rep.verdict is Verdict.PASS


# --- PowerSum ----------------------------------------------------------------------------


terms_st = st.lists(st.tuples(st.floats(-5, 5), st.floats(-3, 4)), max_size=8)


@given(terms_st)
@example([(3.600414370470689e-16, 0.0), (1.0, 0.0), (3.00001, 0.0)])
def test_powersum_canonical(terms):
    ps = PowerSum(terms)
    e = list(ps.exponents)
    assert all(b - a > ps_mod.EXPONENT_TOL for a, b in zip(e, e[1:]))
    assert all(c != 0 for c in ps.coefs)
    assert PowerSum(reversed(terms)) == PowerSum(ps.terms)


@given(terms_st, st.floats(0.1, 10))
def test_powersum_derivative_matches_fd(terms, t):
    ps = PowerSum(terms)
    d = ps.derivative()
    h = 1e-5 * t
    fd = (ps(t + h) - ps(t - h)) / (2 * h)
    scale = max(1.0, ps.magnitude(np.array([t - h, t, t + h])).max() / t)
    assert abs(d(t) - fd) <= 1e-6 * scale


@given(terms_st, terms_st, st.floats(0.1, 10))
def test_powersum_algebra(x, y, t):
    a, b = PowerSum(x), PowerSum(y)
    tol = 1e-9 * (1 + a.magnitude(t) * (1 + b.magnitude(t)) + b.magnitude(t))
    assert abs((a + b)(t) - (a(t) + b(t))) <= tol
    assert abs((a * b)(t) - a(t) * b(t)) <= tol
    assert abs((a - a)(t)) == 0


def test_powersum_limits():
    assert PowerSum([(2.0, -0.5), (1.0, 1.0)]).limit_at_zero() == math.inf
    assert PowerSum([(-3.0, 0.0)]).limit_at_zero() == -3.0
    assert PowerSum([(1.0, 0.5)]).limit_at_zero() == 0.0
    assert PowerSum().sign_at_zero() == 0


def test_powersum_overflow(monkeypatch):
    monkeypatch.setattr(ps_mod, "MAX_TERMS", 3)
    with pytest.raises(TermOverflow):
        PowerSum([(1.0, float(k)) for k in range(5)])


# --- check_cm -------------------------------------------------------------------------------


def test_cm_pure_exponential():
    rep = check_cm(0.0, 1.0, 1.5, M=12)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert "no violation up to order 12" in rep.details["reason"]
    assert rep.details["signs_at_zero"] == [(-1) ** m for m in range(1, 13)]


def test_cm_alpha_1_5():
    rep = check_cm(1.0, 1.0, 1.5)
    assert rep.verdict is Verdict.VIOLATION
    assert rep.witness["order"] == 2 and rep.witness["t"] == "0+" and rep.witness["limit"] == -math.inf


def test_cm_alpha_3_5():
    rep = check_cm(1.0, 1.0, 3.5)
    assert rep.verdict is Verdict.VIOLATION
    assert rep.witness["order"] == 4 and rep.witness["t"] == "0+" and rep.witness["limit"] == -math.inf


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cm_pattern_by_interval(k):
    # alpha in (2k-1, 2k) forces g^(2k)(0+) = -inf
    rep = check_cm(1.0, 1.0, 2 * k - 0.5, M=2 * k + 2)
    assert rep.witness["order"] == 2 * k


def test_cm_factors_match_numeric_derivatives():
    C, D, alpha = 0.8, 1.1, 2.3
    g = lambda t: math.exp(-C * t**alpha - D * t)
    t0, h = 0.7, 1e-3
    facs = dict(derivative_factors(C, D, alpha, 3))
    d1 = (g(t0 + h) - g(t0 - h)) / (2 * h)
    d2 = (g(t0 + h) - 2 * g(t0) + g(t0 - h)) / h**2
    assert facs[1](t0) * g(t0) == pytest.approx(d1, rel=1e-5)
    assert facs[2](t0) * g(t0) == pytest.approx(d2, rel=1e-4)


def test_cm_rejects_bad_args():
    with pytest.raises(ValueError):
        check_cm(1, 1, 1.0)
    with pytest.raises(ValueError):
        check_cm(1, 1, 2.0, M=1)


def test_cm_json():
    rep = check_cm(1.0, 1.0, 1.5)
    assert '"-inf"' in rep.to_json()


# --- check_pd ---------------------------------------------------------------------------------


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
def test_pd_symmetric_stable(p):
    assert check_pd(SymmetricStable(1.0, p), rng=RngStream(0)).verdict is Verdict.PASS


def test_pd_pseudostable_pass():
    assert check_pd(Pseudostable(1, 1, 1.5, 1), rng=RngStream(0)).verdict is Verdict.PASS


def test_pd_pseudostable_violation():
    rep = check_pd(Pseudostable(1, 1, 3, 2), rng=RngStream(0))
    assert rep.verdict is Verdict.VIOLATION
    assert rep.witness["test"] == "gram" and rep.witness["eigenvalue"] < -1e-9
    nodes = np.array(rep.witness["nodes"])
    G = eval_cf(Pseudostable(1, 1, 3, 2), nodes[:, None] - nodes[None, :])
    assert np.linalg.eigvalsh(G)[0] == pytest.approx(rep.witness["eigenvalue"], rel=1e-8)
    # the Fourier test fires independently
    assert all(r["value"] < -1e-6 for r in rep.details["fourier"])


def test_pd_fourier_only():
    rep = check_pd(Pseudostable(1, 1, 3, 2), nodesets=0)
    assert rep.verdict is Verdict.VIOLATION and rep.witness["test"] == "fourier"


def test_pd_mixture_passes():
    rep = check_pd(MixtureOfStable(1.5, Empirical([0.5, 1.0, 2.0])), npoints=2**12, nodesets=16)
    assert rep.verdict is Verdict.PASS


@given(st.floats(0.1, 2.0), st.floats(0.2, 5), st.integers(0, 1000))
def test_pd_never_rejects_stable(p, A, seed):
    rep = check_pd(SymmetricStable(A, p), npoints=2**12, nodesets=8, rng=RngStream(seed))
    assert rep.verdict is Verdict.PASS


# --- prop3_transform ----------------------------------------------------------------------------


def test_prop3_dirac_case():
    spec, draw = prop3_transform(1.0, 1.0, 2.0, 2.0, 0.5)
    assert spec == Pseudostable(1.0, 1.0, 1.0, 1.0)
    t = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(eval_cf(spec, t), np.exp(-2 * t), rtol=1e-15)
    assert cf_distance(draw(100_000, RngStream(1)), spec, t).inside(3)


def test_prop3_gaussian_cauchy_case():
    spec, draw = prop3_transform(1.0, 1.0, 2.0, 1.0, 0.5)
    assert spec == Pseudostable(1.0, 1.0, 1.0, 0.5)
    assert cf_distance(draw(100_000, RngStream(2)), spec, [0.5, 1.0, 2.0]).inside(3)


def test_prop3_boundaries():
    for alpha in (1.0, 0.0, 1.5):
        with pytest.raises(ValueError):
            prop3_transform(1, 1, 2, 1, alpha)
    spec, _ = prop3_transform(1, 1, 2, 1, 1 - 1e-9)
    assert spec.q == pytest.approx(2) and spec.p == pytest.approx(1)
    with pytest.raises(ConstraintError):
        prop3_transform(1, 1, 1, 2, 0.5)


def test_prop3_needs_user_law_for_large_q():
    with pytest.raises(UnsupportedRepresentation):
        prop3_transform(1, 1, 3, 2, 0.5)
    spec, draw = prop3_transform(1, 1, 3, 2, 0.5, radial=Dirac(1.0), b=2.0)
    assert draw(10, RngStream(0)).shape == (10,)


def test_prop3_user_law_matches_subordination():
    # with Q = 1 and b = 2 the draw has CF exp(-|t|^(2 alpha))
    _, draw = prop3_transform(1, 1, 3, 2, 0.6, radial=Dirac(1.0), b=2.0)
    assert cf_distance(draw(100_000, RngStream(3)), SymmetricStable(1.0, 1.2), [0.5, 1, 2]).inside(3)


def test_log_periodic_spec_type():
    spec, _, _ = build_log_periodic(1.0, 0.1)
    assert isinstance(spec, LogPeriodic) and spec.c == pytest.approx(2.0)


@pytest.mark.parametrize("q,p", [(3.0, 2.0), (5.0, 1.0)])
def test_pd_fourier_witness_matches_quadrature(q, p):
    from scipy.integrate import quad

    rep = check_pd(Pseudostable(1, 1, q, p), nodesets=0)
    w = rep.details["fourier"][0]
    # oracle: f(x) = (1/pi) int_0^inf cos(x t) phi(t) dt by QAWO quadrature
    f = quad(lambda t: np.exp(-t**q - t**p), 0, 20, weight="cos", wvar=w["x"], limit=500)[0] / np.pi
    assert f < 0
    assert w["value"] == pytest.approx(f / w["peak"], rel=1e-4)
