"""Seeded samplers for the random objects of the weak-convolution setting.

Conventions used everywhere:

* ``theta_p`` (0 < p < 1) is the positive p-stable variable with Laplace
  transform ``E exp(-t theta_p) = exp(-t^p)``; ``theta_1`` is the constant 1.
* symmetric p-stable draws have characteristic function exactly
  ``exp(-|t|^p)``, built as ``G * sqrt(2 theta_{p/2})`` with ``G`` standard
  normal. For p = 2 this is a Gaussian with variance 2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Dirac,
    Empirical,
    GeneralizedGamma,
    GridDensity,
    RngStream,
    SignedEmpirical,
    WeaklyStableRadial,
    as_stream,
)


def _check_count(N):
    if int(N) != N or N < 1:
        raise ValueError(f"sample count must be a positive integer, got {N!r}")
    return int(N)


@dataclass(frozen=True, eq=False)
class SphereSample:
    n: int
    points: np.ndarray


def sphere_points(n: int, N: int, rng: RngStream | int) -> np.ndarray:
    if int(n) != n or n < 1:
        raise ValueError("sphere dimension n must be >= 1")
    N = _check_count(N)
    g = as_stream(rng).generator().standard_normal((N, int(n)))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # a zero Gaussian vector has probability 0; redraw is unnecessary in practice
    return g / norms


def sample_sphere(n: int, N: int, rng: RngStream | int) -> SphereSample:
    """N i.i.d. uniform points on the unit sphere S_{n-1} in R^n."""
    pts = sphere_points(n, N, rng)
    pts.setflags(write=False)
    return SphereSample(int(n), pts)


def kanter_log_A(u, p: float):
    """Log of Kanter's function ``A(u)`` on (0, pi).

    ``theta_p = (A(U) / E)^((1-p)/p)`` for U uniform on (0, pi) and E standard
    exponential; the same function drives Zolotarev's integral for the
    density and distribution function of theta_p.
    """
    u = np.asarray(u, dtype=float)
    return (p * np.log(np.sin(p * u)) + (1 - p) * np.log(np.sin((1 - p) * u)) - np.log(np.sin(u))) / (1 - p)


def kanter_A(u, p: float):
    return np.exp(kanter_log_A(u, p))


def positive_stable(p: float, N: int, rng: RngStream | int) -> np.ndarray:
    """Array version of :func:`sample_positive_stable`."""
    if not 0 < p <= 1:
        raise ValueError(f"positive stable index must lie in (0, 1], got {p!r}")
    N = _check_count(N)
    if p == 1:
        return np.ones(N)
    gen = as_stream(rng).generator()
    u = np.pi * (1.0 - gen.random(N))  # (0, pi]
    u = np.minimum(u, np.nextafter(np.pi, 0))
    e = gen.standard_exponential(N)
    log_theta = (1 - p) / p * (kanter_log_A(u, p) - np.log(e))
    return np.exp(log_theta)


def sample_positive_stable(p: float, N: int, rng: RngStream | int) -> Empirical:
    """Draws of theta_p by Kanter's representation (exact, rejection free)."""
    return Empirical(positive_stable(p, N, rng))


def sym_stable(p: float, N: int, rng: RngStream | int) -> np.ndarray:
    if not 0 < p <= 2:
        raise ValueError(f"stable index must lie in (0, 2], got {p!r}")
    N = _check_count(N)
    rng = as_stream(rng)
    g = rng.child(0).generator().standard_normal(N)
    if p == 2:
        return np.sqrt(2.0) * g
    return g * np.sqrt(2.0 * positive_stable(p / 2, N, rng.child(1)))


def sample_sym_stable(p: float, N: int, rng: RngStream | int) -> SignedEmpirical:
    """Symmetric p-stable draws with CF ``exp(-|t|^p)``."""
    return SignedEmpirical(sym_stable(p, N, rng))


def gen_gamma(lam: float, p: float, a: float, N: int, rng: RngStream | int) -> np.ndarray:
    if not (lam > 0 and p > 0 and a > 0):
        raise ValueError("generalized Gamma parameters must be positive")
    N = _check_count(N)
    # X^a / lam ~ Gamma(p/a, 1)
    g = as_stream(rng).generator().standard_gamma(p / a, N)
    return (lam * g) ** (1.0 / a)


def sample_gen_gamma(lam: float, p: float, a: float, N: int, rng: RngStream | int) -> Empirical:
    """Draws with density ``a/(Gamma(p/a) lam^(p/a)) x^(p-1) exp(-x^a/lam)``."""
    return Empirical(gen_gamma(lam, p, a, N, rng))


def weakly_stable_radial(alpha: float, n: int, N: int, rng: RngStream | int) -> np.ndarray:
    if not 0 < alpha <= 2:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha!r}")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    rng = as_stream(rng)
    r = gen_gamma(2.0, n, 2.0, N, rng.child(0))
    if alpha == 2:
        return r
    return r * np.sqrt(radial_mixing_scale(alpha) * positive_stable(alpha / 2, N, rng.child(1)))


def radial_mixing_scale(alpha: float) -> float:
    """``c(alpha) = 2^(2/alpha - 1)``: the radial law mixes chi_n with ``c theta_{alpha/2}``.

    ``c theta_{alpha/2}`` has Laplace transform ``exp(-2^(1 - alpha/2) t^(alpha/2))``;
    c = 2 at alpha = 1 (the Cauchy-type closed form) and c = 1 at alpha = 2
    (the chi law itself), so the family is continuous in alpha. Margins of
    ``U^n theta_alpha^n`` have CF ``exp(-2^(1-alpha) |t|^alpha)``.
    """
    return 2.0 ** (2.0 / alpha - 1.0)


def sample_weakly_stable_radial(alpha: float, n: int, N: int, rng: RngStream | int) -> Empirical:
    """Draws of theta_alpha^n = Gamma_n * sqrt(c(alpha) theta_{alpha/2}), see
    :func:`radial_mixing_scale`; ``U^n * theta_alpha^n`` is rotationally
    invariant alpha-stable."""
    return Empirical(weakly_stable_radial(alpha, n, N, rng))


def draw_radial(law, N: int, rng: RngStream | int) -> np.ndarray:
    """N draws from any radial law representation.

    An Empirical law holding exactly N samples is shuffled rather than
    resampled, so sampled laws pass through chained operations without
    adding bootstrap noise.
    """
    N = _check_count(N)
    rng = as_stream(rng)
    if isinstance(law, Dirac):
        return np.full(N, law.a)
    if isinstance(law, Empirical):
        if law.samples.size == N:
            return rng.generator().permutation(law.samples)
        return rng.generator().choice(law.samples, size=N, replace=True)
    if isinstance(law, GridDensity):
        cdf = law.cdf()
        cdf = cdf / cdf[-1]
        u = rng.generator().random(N)
        return np.interp(u, cdf, law.xs)
    if isinstance(law, GeneralizedGamma):
        return gen_gamma(law.lam, law.p, law.a, N, rng)
    if isinstance(law, WeaklyStableRadial):
        return weakly_stable_radial(law.alpha, law.n, N, rng)
    raise TypeError(f"not a radial law: {law!r}")


SAMPLERS = {
    "positive-stable": sample_positive_stable,
    "sym-stable": sample_sym_stable,
    "gen-gamma": sample_gen_gamma,
    "weakly-stable-radial": sample_weakly_stable_radial,
}
