"""Functional equations ``f(t) = f(at) + f(bt)`` and ``phi(rt) phi(st) =
phi(c t) psi(d t)``: root solving, orbit classification, log-periodic
semi-stable solutions, the (c, d) coefficients of pseudostable solutions and
residual checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from ..core import (CheckReport, Empirical, LogPeriodic, MixtureOfStable, Pseudostable, RngStream,
                    UnsupportedRepresentation, Verdict, as_stream)
from ..densities import eval_cf
from ..samplers import draw_radial, positive_stable, sym_stable

ORBIT_TOL = 1e-12


class ConstraintError(ValueError):
    """Parameters violate a necessary condition (e.g. q >= p for real d)."""


def solve_p(a: float, b: float) -> float:
    """The unique p > 0 with ``a^p + b^p = 1`` for a, b in (0, 1)."""
    if not (0 < a < 1 and 0 < b < 1):
        raise ValueError(f"a and b must lie in (0, 1), got {(a, b)!r}")
    if a == b:
        return math.log(2.0) / -math.log(a)
    la, lb = math.log(a), math.log(b)

    def g(p):
        return math.exp(p * la) + math.exp(p * lb) - 1.0

    # g is strictly decreasing from g(0) = 1 towards -1
    hi = 1.0
    while g(hi) > 0:
        hi *= 2.0
    lo = hi / 2.0
    while g(lo) < 0:
        lo /= 2.0
    root = brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(root)


def lemma1_residual(a: float, b: float, n: int, t: float, p: float | None = None) -> float:
    """``|sum_k C(n,k) f(a^k b^(n-k) t) - f(t)|`` for ``f(t) = t^p``, relative to f(t)."""
    if p is None:
        p = solve_p(a, b)
    k = np.arange(n + 1)
    logbinom = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    # f(a^k b^(n-k) t) / f(t) = a^(kp) b^((n-k)p)
    terms = np.exp(logbinom + k * p * math.log(a) + (n - k) * p * math.log(b))
    return float(abs(math.fsum(terms) - 1.0))


# ---------------------------------------------------------------------------
# Orbits {a^i b^j}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Discrete:
    """The group generated by a, b is ``{c^j : j in Z}``."""

    c: float
    ratio: Fraction


@dataclass(frozen=True)
class Dense:
    """No rational ``m/k`` with ``k`` below the resolution bound matches ``ln a / ln b``."""

    depth: int
    max_denominator: int


@dataclass(frozen=True)
class Inconclusive:
    depth: int
    tol: float


def classify_orbit(a: float, b: float, depth: int = 40, tol: float = ORBIT_TOL):
    """Decide numerically whether ``ln a / ln b`` is rational.

    Expands the ratio as a continued fraction. A convergent with denominator
    at most ``tol^(-1/3)`` matching to ``tol`` gives :class:`Discrete`. Any
    irrational has convergents within ``1/k^2`` of it, so larger denominators
    could match by accident; passing the bound without a match gives
    :class:`Dense`. Running out of ``depth`` first gives :class:`Inconclusive`.
    Dense is numerical evidence, not a proof.
    """
    if not (0 < a < 1 and 0 < b < 1):
        raise ValueError("a and b must lie in (0, 1)")
    la, lb = math.log(a), math.log(b)
    x = la / lb
    q_bound = int(round(tol ** (-1.0 / 3.0)))
    h_prev, h = 0, 1  # numerators, seeded for the recurrence
    k_prev, k = 1, 0
    rem = x
    for _ in range(depth):
        digit = math.floor(rem)
        h_prev, h = h, digit * h + h_prev
        k_prev, k = k, digit * k + k_prev
        if abs(x - h / k) <= tol * max(1.0, x):
            m, kk = h, k  # ln a / ln b = m / kk in lowest terms
            return Discrete(math.exp(abs(la) / m), Fraction(m, kk))
        if k > q_bound:
            return Dense(depth, q_bound)
        frac = rem - digit
        if frac <= 0:
            break
        rem = 1.0 / frac
    return Inconclusive(depth, tol)


# ---------------------------------------------------------------------------
# Log-periodic semi-stable CF
# ---------------------------------------------------------------------------


def build_log_periodic(p: float, eps: float, i: int = 1, A: float = 1.0):
    """Semi-stable CF ``exp(-|t|^p' H(t))`` with ``H(t) = A (1 + eps cos(2 pi ln t / ln c))``.

    ``c = 2^(1/p)`` and ``a = b = c^(-i)``, so H is invariant under both
    scalings. The exponent ``p'`` is the root of ``a^p' + b^p' = 1``; it equals
    ``p`` for ``i = 1`` and ``p / i`` otherwise. Returns ``(spec, a, b)``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    if int(i) != i or i < 1:
        raise ValueError("i must be a positive integer")
    c = 2.0 ** (1.0 / p)
    a = b = 2.0 ** (-i / p)
    p_eff = p if i == 1 else solve_p(a, b)
    return LogPeriodic(A, eps, p_eff, c), a, b


# ---------------------------------------------------------------------------
# Pseudostable coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CDCoefficients:
    c: float
    d: float
    B: float


def _norm(u, v, q):
    if q == 2:
        return math.hypot(u, v)
    return (u**q + v**q) ** (1.0 / q)


def compute_cd(r: float, s: float, p: float, q: float, C: float, D: float, B: float) -> CDCoefficients:
    """``c = ||(r,s)||_q`` and ``d = [(D/B)(r^p + s^p - c^p)]^(1/p)``.

    ``B`` is the scale of ``psi = exp(-B |t|^p)``; with it the pair
    ``(exp(-C|t|^q - D|t|^p), psi)`` solves the two-scale equation. Both
    outputs are degree-1 homogeneous in (r, s). ``C`` only fixes the
    q-part and does not enter c or d.
    """
    if q < p:
        raise ConstraintError(
            f"q={q} < p={p}: d^p = (D/B)(||.||_p^p - ||.||_q^p) would be negative; q >= p is necessary"
        )
    if r < 0 or s < 0 or (r == 0 and s == 0):
        raise ValueError("(r, s) must be nonnegative and not both zero")
    if not (B > 0 and D >= 0 and C >= 0):
        raise ValueError("B must be positive, C and D nonnegative")
    m = max(r, s)
    u, v = r / m, s / m
    c_unit = _norm(u, v, q)
    if q == p:
        d_unit = 0.0
    else:
        gap = u**p + v**p - c_unit**p
        d_unit = ((D / B) * max(gap, 0.0)) ** (1.0 / p)
    return CDCoefficients(m * c_unit, m * d_unit, B)


def cd_functions(p: float, q: float, C: float, D: float, B: float):
    """The pair of callables ``(c(r, s), d(r, s))`` used by :func:`verify_eq2`."""
    def c_fun(r, s):
        return compute_cd(r, s, p, q, C, D, B).c

    def d_fun(r, s):
        return compute_cd(r, s, p, q, C, D, B).d

    return c_fun, d_fun


def orbit_cd(a: float, b: float):
    """``(c, d)`` on the ray ``{(x a, x b)}`` where a semi-stable solution has d = 0."""
    def c_fun(r, s):
        return r / a

    def d_fun(r, s):
        return 0.0

    return c_fun, d_fun


def _is_empirical(spec) -> bool:
    return isinstance(spec, MixtureOfStable) and isinstance(spec.radial, Empirical)


def verify_eq2(phi, psi, c_fun, d_fun, pairs, t_grid, tol: float | None = None) -> CheckReport:
    """Max residual of ``phi(rt) phi(st) - phi(c t) psi(d t)`` over pairs x grid.

    PASS below ``tol``: 1e-10 for analytic specs; for empirical mixtures a
    Monte Carlo band ``4 / sqrt(N)`` unless given.
    """
    t = np.asarray(t_grid, dtype=float)
    if tol is None:
        tol = 1e-10
        for spec in (phi, psi):
            if _is_empirical(spec):
                tol = max(tol, 4.0 / math.sqrt(spec.radial.samples.size))
    worst = 0.0
    where = None
    for r, s in pairs:
        c, d = c_fun(r, s), d_fun(r, s)
        lhs = eval_cf(phi, r * t) * eval_cf(phi, s * t)
        rhs = eval_cf(phi, c * t) * eval_cf(psi, d * t)
        res = np.abs(np.asarray(lhs) - np.asarray(rhs))
        j = int(np.argmax(res))
        if res[j] > worst or where is None:
            worst = float(res[j])
            where = {"r": float(r), "s": float(s), "c": float(c), "d": float(d), "t": float(t[j])}
    resolution = {"pairs": len(pairs), "grid_points": int(t.size), "tol": tol}
    details = {"max_residual": worst}
    if worst < tol:
        return CheckReport(Verdict.PASS, resolution=resolution, details=details)
    return CheckReport(Verdict.VIOLATION, witness={"residual": worst, **where}, resolution=resolution,
                       details=details)


# ---------------------------------------------------------------------------
# Subordination of pseudostable solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubordinatedSampler:
    """Draws ``X_b * theta_alpha^(1/b) * Q^(1/alpha)``.

    ``X_b`` has CF ``exp(-|t|^b)`` and ``Q`` is the mixing variable of the
    original CF, ``phi(t) = E exp(-|t Q|^b)``. Then the draw has CF
    ``phi(|t|^alpha)`` evaluated as ``exp(-C|t|^(q alpha) - D|t|^(p alpha))``.
    """

    alpha: float
    b: float
    draw_Q: object  # callable (N, RngStream) -> ndarray

    def __call__(self, N: int, rng: RngStream | int) -> np.ndarray:
        rng = as_stream(rng)
        x = sym_stable(self.b, N, rng.child(0))
        th = positive_stable(self.alpha, N, rng.child(1))
        Q = np.asarray(self.draw_Q(N, rng.child(2)), dtype=float)
        return x * th ** (1.0 / self.b) * Q ** (1.0 / self.alpha)


def pseudostable_mixing(C: float, D: float, q: float, p: float):
    """``(b, draw_Q)`` with ``exp(-C|t|^q - D|t|^p) = E exp(-|t Q|^b)``, or None.

    Closed forms exist for ``q == p`` (a point mass) and for ``q, p <= 2``
    (Gaussian base: ``Q^2 = C^(2/q) theta_{q/2} + D^(2/p) theta_{p/2}``).
    """
    if q == p:
        a = (C + D) ** (1.0 / p)
        return p, lambda N, rng: np.full(N, a)
    if q <= 2 and p <= 2:
        def draw(N, rng):
            rng = as_stream(rng)
            s = C ** (2.0 / q) * positive_stable(q / 2, N, rng.child(0))
            s = s + D ** (2.0 / p) * positive_stable(p / 2, N, rng.child(1))
            return np.sqrt(s)
        return 2.0, draw
    return None


def prop3_transform(C: float, D: float, q: float, p: float, alpha: float, radial=None, b: float | None = None):
    """``Pseudostable(C, D, q alpha, p alpha)`` and a sampler realizing it.

    ``radial``/``b`` override the mixing law ``Q`` and base index; they are
    required when no closed-form mixing law is known (e.g. q > 2).
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if q < p:
        raise ConstraintError(f"q={q} < p={p}: q >= p is necessary")
    spec = Pseudostable(C, D, q * alpha, p * alpha)
    if radial is not None:
        if b is None:
            raise ValueError("a user-supplied mixing law needs its base index b")
        return spec, SubordinatedSampler(alpha, b, lambda N, rng: draw_radial(radial, N, rng))
    mixing = pseudostable_mixing(C, D, q, p)
    if mixing is None:
        raise UnsupportedRepresentation(
            f"no closed-form mixing law for q={q}, p={p}; pass radial= and b="
        )
    return spec, SubordinatedSampler(alpha, *mixing)
