import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from wgconv import stattests as stt
from wgconv.core import RngStream, SymmetricStable, Verdict
from wgconv.samplers import sym_stable

N = 100_000


# --- KS --------------------------------------------------------------------------


def test_ks_identical():
    x = np.random.default_rng(0).normal(size=1000)
    D, p = stt.ks_two_sample(x, x)
    assert D == 0.0 and p == 1.0


# only scipy's statistic is used; its p-value path warns on one-point samples
@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=60),
       st.lists(st.floats(-100, 100), min_size=1, max_size=60))
def test_ks_statistic_matches_scipy(x, y):
    D, _ = stt.ks_two_sample(x, y)
    assert D == pytest.approx(stats.ks_2samp(x, y, method="asymp").statistic, abs=1e-12)


def test_ks_pvalue_matches_scipy_asymptotic():
    g = np.random.default_rng(1)
    x, y = g.normal(size=5000), g.normal(0.03, size=5000)
    D, p = stt.ks_two_sample(x, y)
    ref = stats.ks_2samp(x, y, method="asymp")
    assert D == pytest.approx(ref.statistic, abs=1e-15)
    # scipy's "asymp" uses a finite-n correction; ours is the plain Kolmogorov limit
    assert p == pytest.approx(stats.kstwobign.sf(np.sqrt(2500) * D), rel=1e-12)
    assert p == pytest.approx(ref.pvalue, rel=5e-2)


def test_ks_detects_shift():
    g = np.random.default_rng(2)
    assert stt.ks_two_sample(g.normal(size=N), g.normal(0.05, size=N))[1] < 1e-6


def test_ks_null_multi_seed():
    crit = stt.ks_critical(N, N)
    assert crit == pytest.approx(1.63 * np.sqrt(2 / N), rel=1e-2)
    ok = 0
    for seed in range(20):
        g = RngStream(seed).generator()
        ok += stt.ks_two_sample(g.normal(size=N), g.normal(size=N))[0] < crit
    assert ok >= 18


def test_ks_one_sample_matches_scipy():
    x = np.random.default_rng(3).normal(size=2000)
    D, p = stt.ks_one_sample(x, stats.norm.cdf)
    ref = stats.kstest(x, "norm", method="exact")
    assert D == pytest.approx(ref.statistic, abs=1e-14)
    assert p == pytest.approx(ref.pvalue, rel=1e-6)


def test_ks_rejects_empty():
    with pytest.raises(ValueError):
        stt.ks_two_sample([], [1.0])
    with pytest.raises(ValueError):
        stt.ks_one_sample([], stats.norm.cdf)


def test_grid_cdf():
    xs = np.linspace(0, 2, 21)
    F = stt.grid_cdf(xs, np.full(21, 7.0))
    np.testing.assert_allclose(F(np.array([0.0, 0.5, 2.0, 3.0])), [0, 0.25, 1, 1], atol=1e-15)


# --- CF distance --------------------------------------------------------------------


def test_cf_distance_point_mass():
    d = stt.cf_distance(np.zeros(10), SymmetricStable(1.0, 1.0), [0.0, 1.0])
    np.testing.assert_allclose(d.empirical, [1, 1])
    np.testing.assert_allclose(d.deviation, [0, 1 - np.exp(-1)])
    assert d.sigma.tolist() == [0.0, 0.0]
    assert d.z[0] == 0 and d.z[1] == np.inf
    assert not d.inside(3)


def test_cf_distance_empty_grid():
    d = stt.cf_distance(np.ones(3), SymmetricStable(1.0, 1.0), [])
    assert d.t.size == 0 and d.max_deviation == 0.0 and d.inside()
    with pytest.raises(ValueError):
        stt.cf_distance([], SymmetricStable(1.0, 1.0), [1.0])


def test_cf_distance_cauchy():
    x = sym_stable(1.0, N, RngStream(4))
    d = stt.cf_distance(x, SymmetricStable(1.0, 1.0), np.linspace(0, 3, 13))
    assert d.inside(3.5)
    assert d.max_deviation < 5e-3


def test_gaussian_reference_variance_two():
    assert stt.gaussian_reference() == SymmetricStable(1.0, 2.0)
    x = sym_stable(2.0, N, RngStream(5))
    assert abs(x.var() - 2) < 3 * np.sqrt(2 * 4 / N)


# --- named identities --------------------------------------------------------------------


@pytest.mark.parametrize("alpha,n", [(2.0, 3), (1.0, 3), (2.0, 1), (1.5, 2)])
def test_remark3_single(alpha, n):
    rep = stt.test_remark3(alpha, n, 50_000, RngStream(11))
    assert rep.verdict is Verdict.PASS
    assert rep.details["threshold"] == pytest.approx(stt.ks_critical(50_000, 50_000))


@pytest.mark.parametrize("alpha,p", [(2.0, 0.5), (1.0, 0.5), (1.0, 1.0), (1.6, 0.9)])
def test_theorem3_single(alpha, p):
    rep = stt.test_theorem3(alpha, p, 1.5, 50_000, RngStream(12))
    assert rep.verdict is Verdict.PASS


def test_theorem3_rejects():
    with pytest.raises(ValueError):
        stt.test_theorem3(2.0, 1.5, 1.0, 10, 0)
    with pytest.raises(ValueError):
        stt.test_theorem3(2.0, 0.5, -1.0, 10, 0)
    with pytest.raises(ValueError):
        stt.test_remark3(2.5, 3, 10, 0)


def test_identity_detects_wrong_scale(monkeypatch):
    # dropping the 2^(1/alpha) factor must be caught
    orig = stt.weakly_stable_radial
    calls = []

    def fake(alpha, n, N, rng):
        calls.append(1)
        x = orig(alpha, n, N, rng)
        return x / 2 ** (1 / alpha) if len(calls) == 3 else x

    monkeypatch.setattr(stt, "weakly_stable_radial", fake)
    assert stt.test_remark3(2.0, 3, N, RngStream(13)).verdict is Verdict.VIOLATION


def test_multi_seed_csv_and_pass():
    res = stt.run_multi_seed("theorem3", seeds=range(4), required=3, alpha=2.0, p=0.5, a=1.0, N=5000)
    lines = res.to_csv().splitlines()
    assert lines[0] == "test,seed,N,statistic,p_value,threshold,pass"
    assert len(lines) == 5
    assert lines[1].startswith("theorem3,0,5000,")
    assert res.n_pass == sum(int(line[-1]) for line in lines[1:])
    assert res.passed == (res.n_pass >= 3)


def test_reports_deterministic():
    a = stt.test_theorem3(1.0, 0.5, 1.0, 2000, RngStream(3, (2,)))
    b = stt.test_theorem3(1.0, 0.5, 1.0, 2000, RngStream(3, (2,)))
    assert a.to_json() == b.to_json()
    assert a.details["seed"] == {"seed": 3, "path": [2]}
