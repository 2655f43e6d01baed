"""Closed-form and quadrature densities, plus characteristic-function evaluation.

The radial density of the omega_n-weakly alpha-stable law is the scale mixture

    f_{alpha,n}(r) = int f_{2,n}(r / sqrt(s)) s^{-1/2} g(s) ds

where ``g`` is the density of ``S = 2 theta_{alpha/2}``. Rather than tabulate
``g`` we substitute Zolotarev's integral for it and change variables to the
exponential variable of Kanter's representation, which leaves a smooth double
integral over ``u in (0, pi)`` (adaptive) and ``w = log E`` (trapezoid, which
converges geometrically for this integrand).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, quad_vec
from scipy.special import gammainc, gammaln

from .core import (
    CheckReport,
    Dirac,
    Empirical,
    GeneralizedGamma,
    GridDensity,
    LogPeriodic,
    MixtureOfStable,
    Pseudostable,
    SincProduct,
    SymmetricStable,
    UnsupportedRepresentation,
    Verdict,
    WeaklyStableRadial,
)
from .samplers import kanter_log_A, radial_mixing_scale

INNER_TOL = 1e-8
OUTER_TOL = 1e-6
NORM_TOL = 1e-4

# large S comes from u near pi; breakpoints keep the adaptive rule from skipping it
_U_BREAKS = tuple(np.pi - np.pi * 10.0 ** -np.arange(1, 15))


def _w_grid(a: float):
    # log S moves at rate (1-a)/a in w; keep its increment per step near 0.1
    step = 0.1 * min(1.0, max(0.2, a / (1 - a)))
    w = np.arange(-42.0, 3.8 + step / 2, step)
    return w, step * np.exp(w - np.exp(w))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _xlogy_pow(r, k):
    # r^k with 0^0 = 1, returned in log space
    r = np.asarray(r, dtype=float)
    if k == 0:
        return np.zeros_like(r)
    with np.errstate(divide="ignore"):
        return k * np.log(r)


def density_f2n(n: int, r):
    """Density of the Euclidean norm of a standard Gaussian vector in R^n."""
    r = np.asarray(r, dtype=float)
    logc = math.log(2.0) - (n / 2) * math.log(2.0) - gammaln(n / 2)
    out = np.exp(logc + _xlogy_pow(r, n - 1) - r**2 / 2)
    return np.where(r < 0, 0.0, out)


def density_f1n(n: int, r):
    """Radial density of the omega_n-weakly strictly Cauchy law."""
    r = np.asarray(r, dtype=float)
    logc = (2 - n) * math.log(2.0) + gammaln(n) - 2 * gammaln(n / 2)
    out = np.exp(logc + _xlogy_pow(r, n - 1) - (n + 1) / 2 * np.log1p(r**2))
    return np.where(r < 0, 0.0, out)


def gen_gamma_pdf(lam: float, p: float, a: float, x):
    x = np.asarray(x, dtype=float)
    logc = math.log(a) - gammaln(p / a) - (p / a) * math.log(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(logc + (p - 1) * np.log(x) - x**a / lam)
    return np.where(x > 0, out, 0.0)


def gen_gamma_cdf(lam: float, p: float, a: float, x):
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return gammainc(p / a, x**a / lam)


# ---------------------------------------------------------------------------
# Positive stable theta_p (Laplace transform exp(-t^p))
# ---------------------------------------------------------------------------


def positive_stable_cdf(x, p: float, tol: float = INNER_TOL):
    """Zolotarev: ``P(theta_p <= x) = (1/pi) int_0^pi exp(-A(u) x^{-p/(1-p)}) du``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if p == 1:
        return (x >= 1).astype(float)
    out = np.zeros_like(x)
    pos = x > 0
    if not pos.any():
        return out
    vals = []
    for logk in -p / (1 - p) * np.log(x[pos]):
        v, _ = quad_vec(lambda u: np.exp(-np.exp(kanter_log_A(u, p) + logk)), 0.0, np.pi,
                        epsabs=tol, epsrel=tol)
        vals.append(v)
    out[pos] = np.array(vals) / np.pi
    return out


def positive_stable_pdf(x, p: float, tol: float = INNER_TOL):
    """Density of theta_p, 0 < p < 1.

    Zolotarev's integral in the bulk; the convergent large-x series where the
    integrand would concentrate near u = pi.
    """
    if not 0 < p < 1:
        raise ValueError("positive stable density needs 0 < p < 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    xs_ = x ** (-p)
    series = (x > 0) & (xs_ < 0.05)
    if series.any():
        xx = x[series]
        acc = np.zeros_like(xx)
        for k in range(1, 40):
            term = math.exp(gammaln(p * k + 1) - gammaln(k + 1)) * math.sin(math.pi * p * k)
            acc += (-1) ** (k + 1) * term * xx ** (-p * k - 1)
        out[series] = acc / np.pi
    bulk = (x > 0) & ~series
    if bulk.any():
        xb = x[bulk]
        logk = -p / (1 - p) * np.log(xb)
        logA0 = p / (1 - p) * math.log(p) + math.log(1 - p)  # A(0+), the minimum of A
        k = np.exp(logk)
        A0 = math.exp(logA0)
        val = np.empty_like(xb)
        for i, ki in enumerate(k):
            val[i], _ = quad_vec(
                lambda u: np.exp(kanter_log_A(u, p) - (np.exp(kanter_log_A(u, p)) - A0) * ki),
                0.0, np.pi, epsabs=0, epsrel=tol,
            )
        with np.errstate(divide="ignore"):
            logf = (
                math.log(p / (1 - p) / math.pi)
                - np.log(xb) / (1 - p)
                - math.exp(logA0) * k
                + np.log(val)
            )
        out[bulk] = np.exp(logf)
    return out


# ---------------------------------------------------------------------------
# omega_n-weakly alpha-stable radial law
# ---------------------------------------------------------------------------


def _subordinated_expectation(alpha: float, h, tol: float = OUTER_TOL):
    """``E h(S)`` for ``S = c(alpha) theta_{alpha/2}``, vectorised over h's output.

    ``h`` receives ``log S`` as a 1-d array over the w-grid and must return an
    array of shape ``(m, len(w))``. Returns (values, u_error, w_error).
    """
    a = alpha / 2
    w, weight = _w_grid(a)
    log_c = math.log(radial_mixing_scale(alpha))

    def per_u(u):
        log_s = log_c + (1 - a) / a * (kanter_log_A(u, a) - w)
        vals = h(log_s)
        full = vals @ weight
        coarse = vals[:, ::2] @ (2 * weight[::2])
        return np.concatenate([full, full - coarse]) / np.pi

    res, err = quad_vec(per_u, 0.0, np.pi, epsabs=tol * 1e-2, epsrel=tol, norm="max",
                        limit=4000, points=_U_BREAKS)
    m = res.size // 2
    return res[:m], float(err), float(np.max(np.abs(res[m:]), initial=0.0))


def _radial_mixture(alpha: float, n: int, r, kind: str):
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if alpha == 2:
        if kind == "pdf":
            return density_f2n(n, r), 0.0, 0.0
        return gammainc(n / 2, np.maximum(r, 0) ** 2 / 2), 0.0, 0.0
    rr = r[:, None]

    if kind == "pdf":
        def h(log_s):
            inv_sqrt = np.exp(-0.5 * log_s)
            return density_f2n(n, rr * inv_sqrt) * inv_sqrt
    else:
        def h(log_s):
            inv_sqrt = np.exp(-0.5 * log_s)
            return gammainc(n / 2, (rr * inv_sqrt) ** 2 / 2)

    return _subordinated_expectation(alpha, h)


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Tabulated density; ``tail_mass`` is the probability beyond the grid."""

    xs: np.ndarray
    fs: np.ndarray
    total: float
    tail_mass: float = 0.0
    report: CheckReport | None = None

    @property
    def truncated(self) -> bool:
        return abs(self.total - 1.0) > NORM_TOL

    def to_law(self) -> GridDensity:
        fs = self.fs / self.total
        return GridDensity(self.xs, fs)

    def to_csv(self, header=("x", "f")) -> str:
        return rows_to_csv(header, zip(self.xs, self.fs))


def density_falphan(alpha: float, n: int, r_grid) -> DensityGrid:
    """Radial density of the omega_n-weakly strictly alpha-stable law on a grid."""
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    xs = np.asarray(r_grid, dtype=float)
    if xs.ndim != 1 or np.any(np.diff(xs) <= 0) or xs[0] < 0:
        raise ValueError("r_grid must be increasing and nonnegative")
    fs, u_err, w_err = _radial_mixture(alpha, int(n), xs, "pdf")
    fs = np.maximum(fs, 0.0)
    total = float(np.trapezoid(fs, xs))
    tail = float(1.0 - cdf_falphan(alpha, n, xs[-1])[0]) + float(cdf_falphan(alpha, n, xs[0])[0])
    achieved = max(u_err, w_err)
    resolution = {"u_error": u_err, "w_error": w_err, "tolerance": OUTER_TOL}
    if achieved > OUTER_TOL:
        report = CheckReport(Verdict.INCONCLUSIVE, resolution=resolution)
    else:
        report = CheckReport(Verdict.PASS, resolution=resolution)
    return DensityGrid(xs, fs, total, tail, report)


def cdf_falphan(alpha: float, n: int, r):
    vals, _, _ = _radial_mixture(alpha, int(n), r, "cdf")
    return np.clip(vals, 0.0, 1.0)


def pdf_falphan(alpha: float, n: int, r):
    vals, _, _ = _radial_mixture(alpha, int(n), r, "pdf")
    return np.maximum(vals, 0.0)


# ---------------------------------------------------------------------------
# Characteristic functions
# ---------------------------------------------------------------------------


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def sinc_product(alpha: float, beta: float, t, Jmax: int):
    """``prod_{j=0..Jmax} sinc(beta alpha^j t)`` and the tail bound
    ``sum_{j>Jmax} (beta alpha^j t)^2 / 6``."""
    t = np.asarray(t, dtype=float)
    scales = beta * alpha ** np.arange(Jmax + 1)
    val = np.prod(_sinc(np.multiply.outer(t, scales)), axis=-1)
    bound = (beta * t) ** 2 * alpha ** (2 * (Jmax + 1)) / (6 * (1 - alpha**2))
    return val, bound


def eval_cf(spec, t):
    """Evaluate a real even characteristic function at ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    at = np.abs(t)
    if isinstance(spec, SymmetricStable):
        out = np.exp(-spec.A * at**spec.p)
    elif isinstance(spec, Pseudostable):
        out = np.exp(-spec.C * at**spec.q - spec.D * at**spec.p)
    elif isinstance(spec, SincProduct):
        out, _ = sinc_product(spec.alpha, spec.beta, at, spec.Jmax)
    elif isinstance(spec, MixtureOfStable):
        out = _eval_mixture(spec.p, spec.radial, at)
    elif isinstance(spec, LogPeriodic):
        with np.errstate(divide="ignore", invalid="ignore"):
            H = spec.A * (1 + spec.eps * np.cos(2 * np.pi * np.log(at) / math.log(spec.c)))
            out = np.where(at == 0, 1.0, np.exp(-(at**spec.p) * H))
    else:
        raise TypeError(f"not a CharFnSpec: {spec!r}")
    return out if out.ndim else float(out)


def cf_truncation_bound(spec, t):
    """Reported truncation error of :func:`eval_cf` (nonzero only for SincProduct)."""
    t = np.asarray(t, dtype=float)
    if isinstance(spec, SincProduct):
        return sinc_product(spec.alpha, spec.beta, t, spec.Jmax)[1]
    return np.zeros_like(t)


def _eval_mixture(p, radial, at):
    flat = np.ravel(at)
    if isinstance(radial, Dirac):
        out = np.exp(-((flat * radial.a) ** p))
    elif isinstance(radial, Empirical):
        s = radial.samples
        out = np.empty_like(flat)
        for i, ti in enumerate(flat):
            out[i] = np.mean(np.exp(-((ti * s) ** p)))
    elif isinstance(radial, GridDensity):
        w = radial.fs
        out = np.array([np.trapezoid(np.exp(-((ti * radial.xs) ** p)) * w, radial.xs) for ti in flat])
    elif isinstance(radial, GeneralizedGamma):
        lam, pp, a = radial.lam, radial.p, radial.a
        out = np.array([
            quad(lambda x: math.exp(-((ti * x) ** p)) * gen_gamma_pdf(lam, pp, a, x), 0, np.inf,
                 epsabs=1e-12, limit=200)[0]
            for ti in flat
        ])
    elif isinstance(radial, WeaklyStableRadial):
        raise UnsupportedRepresentation(
            "tabulate WeaklyStableRadial with density_falphan(...).to_law() before mixing"
        )
    else:
        raise TypeError(f"not a radial law: {radial!r}")
    # a probability law integrates 1 exactly at t = 0
    out = np.where(flat == 0, 1.0, out)
    return out.reshape(np.shape(at))


# ---------------------------------------------------------------------------
# CSV helper shared with the CLI
# ---------------------------------------------------------------------------


def fmt(x) -> str:
    return format(float(x), ".17g")


def rows_to_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
