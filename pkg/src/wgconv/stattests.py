"""KS and characteristic-function tests, and named distributional identities
checked by simulation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import kstwo, kstwobign

from .core import CheckReport, RngStream, SymmetricStable, Verdict, as_stream
from .densities import eval_cf
from .samplers import positive_stable, sphere_points, sym_stable, weakly_stable_radial

LEVEL = 0.01
SEEDS = 20
SEEDS_REQUIRED = 18


def ks_two_sample(x, y) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    n, m = x.size, y.size
    if n == 0 or m == 0:
        raise ValueError("KS test needs non-empty samples")
    pooled = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, pooled, side="right") / n
    cdf_y = np.searchsorted(y, pooled, side="right") / m
    D = float(np.max(np.abs(cdf_x - cdf_y)))
    en = n * m / (n + m)
    return D, float(kstwobign.sf(np.sqrt(en) * D))


def ks_one_sample(x, cdf) -> tuple[float, float]:
    """One-sample KS against a vectorised CDF (p-value from the exact null law)."""
    x = np.sort(np.asarray(x, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("KS test needs a non-empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    D = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return D, float(kstwo.sf(D, n))


def ks_critical(n: int, m: int | None = None, level: float = LEVEL) -> float:
    """Asymptotic critical value of D; 1.63 sqrt(2/N) at 1% for equal sizes."""
    en = n if m is None else n * m / (n + m)
    return float(kstwobign.isf(level) / np.sqrt(en))


def grid_cdf(xs, fs):
    """CDF callable from a tabulated density (trapezoid, renormalised)."""
    xs = np.asarray(xs, dtype=float)
    fs = np.asarray(fs, dtype=float)
    c = np.concatenate([[0.0], np.cumsum(0.5 * (fs[1:] + fs[:-1]) * np.diff(xs))])
    c /= c[-1]
    return lambda x: np.interp(x, xs, c)


@dataclass(frozen=True, eq=False)
class CFDistance:
    t: np.ndarray
    empirical: np.ndarray
    target: np.ndarray
    sigma: np.ndarray

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.empirical - self.target)

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviation, initial=0.0))

    @property
    def z(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.sigma > 0, self.deviation / self.sigma, np.where(self.deviation > 0, np.inf, 0.0))

    def inside(self, k: float = 3.0) -> bool:
        return bool(np.all(self.deviation <= k * self.sigma + 1e-15))


def cf_distance(samples, spec, t_grid) -> CFDistance:
    """Empirical cosine transform vs ``eval_cf(spec)`` with per-point CLT sigma."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("cf_distance needs samples")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    emp = np.empty(t.size)
    sig = np.empty(t.size)
    for i, ti in enumerate(t):
        c = np.cos(ti * x)
        emp[i] = c.mean()
        sig[i] = c.std() / np.sqrt(x.size)
    target = np.asarray(eval_cf(spec, t), dtype=float).reshape(t.shape) if t.size else np.empty(0)
    return CFDistance(t, emp, target, sig)


# ---------------------------------------------------------------------------
# Named identities
# ---------------------------------------------------------------------------


def _ks_report(name, params, N, seed, x, y) -> CheckReport:
    D, pv = ks_two_sample(x, y)
    crit = ks_critical(len(x), len(y))
    info = {"test": name, **params, "N": N, "seed": seed, "statistic": D, "p_value": pv,
            "threshold": crit, "level": LEVEL}
    if pv >= LEVEL:
        return CheckReport(Verdict.PASS, resolution={"N": N, "level": LEVEL}, details=info)
    return CheckReport(Verdict.VIOLATION, witness=info, resolution={"N": N, "level": LEVEL}, details=info)


def test_remark3(alpha: float, n: int, N: int, rng: RngStream | int) -> CheckReport:
    """``||X U + X' U'||`` against ``2^(1/alpha) |X''|`` for X with density f_{alpha,n}."""
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    rng = as_stream(rng)
    x1 = weakly_stable_radial(alpha, n, N, rng.child(0))
    x2 = weakly_stable_radial(alpha, n, N, rng.child(1))
    u1 = sphere_points(n, N, rng.child(2))
    u2 = sphere_points(n, N, rng.child(3))
    y = np.linalg.norm(x1[:, None] * u1 + x2[:, None] * u2, axis=1)
    ref = 2 ** (1 / alpha) * weakly_stable_radial(alpha, n, N, rng.child(4))
    return _ks_report("remark3", {"alpha": alpha, "n": n}, N, _seed_of(rng), y, ref)


def test_theorem3(alpha: float, p: float, a: float, N: int, rng: RngStream | int) -> CheckReport:
    """``X_alpha * a * theta_p^(1/alpha)`` against ``a * X_{alpha p}``."""
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if alpha * p > 2:
        raise ValueError("alpha * p must not exceed 2")
    if not a > 0:
        raise ValueError("a must be positive")
    rng = as_stream(rng)
    lhs = sym_stable(alpha, N, rng.child(0)) * a * positive_stable(p, N, rng.child(1)) ** (1 / alpha)
    rhs = a * sym_stable(alpha * p, N, rng.child(2))
    return _ks_report("theorem3", {"alpha": alpha, "p": p, "a": a}, N, _seed_of(rng), lhs, rhs)


def _seed_of(rng: RngStream) -> dict | int:
    return rng.seed if not rng.path else {"seed": rng.seed, "path": list(rng.path)}


# keep pytest from collecting these when imported into test modules
test_remark3.__test__ = False
test_theorem3.__test__ = False

NAMED_TESTS = {
    "remark3": test_remark3,
    "theorem3": test_theorem3,
}


@dataclass(frozen=True)
class MultiSeedResult:
    name: str
    reports: tuple
    required: int = SEEDS_REQUIRED

    @property
    def n_pass(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def passed(self) -> bool:
        return self.n_pass >= self.required

    def to_csv(self) -> str:
        """One row per (test, seed)."""
        lines = ["test,seed,N,statistic,p_value,threshold,pass"]
        for r in self.reports:
            d = r.details
            lines.append(",".join([
                self.name, str(d["seed"]), str(d["N"]),
                *(format(d[k], ".17g") for k in ("statistic", "p_value", "threshold")),
                str(int(r.passed)),
            ]))
        return "\n".join(lines) + "\n"


def run_multi_seed(name: str, seeds=range(SEEDS), required: int = SEEDS_REQUIRED, **params) -> MultiSeedResult:
    """Run a named identity test once per seed; passes when >= ``required`` seeds pass."""
    fn = NAMED_TESTS[name]
    reports = tuple(fn(rng=RngStream(int(s)), **params) for s in seeds)
    return MultiSeedResult(name, reports, required)


def gaussian_reference() -> SymmetricStable:
    """CF of the module's Gaussian convention (variance 2)."""
    return SymmetricStable(1.0, 2.0)
