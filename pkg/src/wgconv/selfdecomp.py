"""Self-decomposable fixed points ``Y = beta * sum_j alpha^j X_j``.

With X_j uniform on [-1, 1] the law of W = Y / beta satisfies
``W = X + alpha W'``, so its CDF F solves the fixed-point equation
``F(w) = (1/2) int_{-1}^{1} F((w - x) / alpha) dx`` and, differentiating,
the delay relation ``2 F'(w) = F((w + 1) / alpha) - F((w - 1) / alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CheckReport, RngStream, SignedEmpirical, Verdict, as_stream
from .densities import rows_to_csv, sinc_product
from .core import default_jmax
from .samplers import sphere_points

RESIDUAL_TOL = 1e-3
SWEEP_TOL = 1e-8


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def parse_base(base) -> tuple[str, int]:
    """``"uniform_pm1"``, ``"sphere_margin:n"`` or ``("sphere_margin", n)``."""
    if isinstance(base, tuple):
        name, n = base
        return str(name), int(n)
    name, _, arg = str(base).partition(":")
    if name == "uniform_pm1":
        return name, 3
    if name == "sphere_margin":
        return name, int(arg or 3)
    raise ValueError(f"unknown base {base!r}")


def _base_draw(base, N: int, rng: RngStream) -> np.ndarray:
    name, n = parse_base(base)
    if name == "uniform_pm1":
        return rng.generator().uniform(-1.0, 1.0, N)
    if name == "sphere_margin":
        return sphere_points(n, N, rng)[:, 0]
    raise ValueError(f"unknown base {base!r}")


def truncation_index(alpha: float, beta: float, eps_tail: float) -> int:
    """Smallest J >= 0 with ``alpha^J <= eps_tail (1 - alpha) / beta``; then
    the dropped tail ``beta alpha^(J+1) / (1 - alpha)`` is below eps_tail."""
    x = eps_tail * (1 - alpha) / beta
    if x >= 1:
        return 0
    return int(math.ceil(math.log(x) / math.log(alpha)))


def sample_fixed_point(alpha: float, beta: float = 1.0, base="uniform_pm1", N: int = 100_000,
                       eps_tail: float = 1e-12, rng: RngStream | int = 0,
                       Q: Callable[[int, RngStream], np.ndarray] | None = None) -> SignedEmpirical:
    """Draw the truncated series ``beta sum_{j<=J} alpha^j X_j (Q_j)``.

    Term j uses substream ``child(j)``; an optional ``Q(N, rng)`` multiplies
    every term with an independent draw from ``child(j, 1)``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not beta > 0:
        raise ValueError("beta must be positive")
    rng = as_stream(rng)
    J = truncation_index(alpha, beta, eps_tail)
    y = np.zeros(int(N))
    # Horner from the smallest term keeps the rounding of the tail small
    for j in range(J, -1, -1):
        x = _base_draw(base, int(N), rng.child(j))
        if Q is not None:
            x = x * np.asarray(Q(int(N), rng.child(j, 1)), dtype=float)
        y = x + alpha * y
    return SignedEmpirical(beta * y)


def cf_fixed_point(alpha: float, beta: float, t, Jmax: int | None = None):
    """``prod_{j<=Jmax} sinc(beta alpha^j t)`` and its truncation bound."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if Jmax is None:
        Jmax = default_jmax(alpha)
    val, bound = sinc_product(alpha, beta, t, Jmax)
    if np.ndim(val) == 0:
        return float(val), float(bound)
    return val, bound


# ---------------------------------------------------------------------------
# CDF of the fixed point
# ---------------------------------------------------------------------------


class _PiecewiseLinear:
    """F linear between grid nodes, 0 left of the grid and 1 right of it."""

    def __init__(self, w, F):
        self.w, self.F = w, F
        self.h = w[1] - w[0]
        self.cum = np.concatenate([[0.0], np.cumsum(0.5 * self.h * (F[1:] + F[:-1]))])

    def __call__(self, y):
        return np.interp(y, self.w, self.F, left=0.0, right=1.0)

    def integral(self, y):
        """``int_{-inf}^{y} F``."""
        w, F, h = self.w, self.F, self.h
        y = np.asarray(y, dtype=float)
        i = np.clip(np.floor((y - w[0]) / h).astype(int), 0, w.size - 2)
        d = np.clip(y - w[i], 0.0, h)
        inside = self.cum[i] + F[i] * d + (F[i + 1] - F[i]) * d * d / (2 * h)
        out = np.where(y <= w[0], 0.0, inside)
        return np.where(y >= w[-1], self.cum[-1] + (y - w[-1]), out)


@dataclass(frozen=True, eq=False)
class GSolution:
    alpha: float
    beta: float
    w: np.ndarray
    F: np.ndarray
    iterations: int
    last_sweep: float

    @property
    def u(self) -> np.ndarray:
        return self.beta * self.w

    @property
    def G(self) -> np.ndarray:
        return self.F

    def __call__(self, u):
        """``G(u) = F(u / beta)``."""
        return np.interp(np.asarray(u, dtype=float) / self.beta, self.w, self.F, left=0.0, right=1.0)

    def density_w(self) -> np.ndarray:
        """Central-difference ``F'`` (one-sided at the ends)."""
        return np.gradient(self.F, self.w)

    def to_csv(self) -> str:
        return rows_to_csv(("u", "G"), zip(self.u, self.G))


def _sweep(alpha, op: _PiecewiseLinear):
    w = op.w
    return 0.5 * alpha * (op.integral((w + 1) / alpha) - op.integral((w - 1) / alpha))


def delay_residuals(sol: GSolution) -> dict:
    """Sup residuals of ``k F'(w) = F((w+1)/alpha) - F((w-1)/alpha)`` for k = 2 and k = 1.

    ``ratio`` is the median of RHS / F' where F' is not small, ~2 for the exact
    solution.
    """
    w, a = sol.w, sol.alpha
    op = _PiecewiseLinear(w, sol.F)
    dF = sol.density_w()
    rhs = op((w + 1) / a) - op((w - 1) / a)
    inner = slice(1, -1)
    r2 = float(np.max(np.abs(2 * dF[inner] - rhs[inner])))
    r1 = float(np.max(np.abs(dF[inner] - rhs[inner])))
    big = dF > 1e-3 * dF.max()
    ratio = float(np.median(rhs[big] / dF[big]))
    return {"residual_factor2": r2, "residual_factor1": r1, "rhs_over_derivative": ratio}


def solve_G(alpha: float, beta: float = 1.0, grid_size: int = 4001, iters: int = 200,
            sweep_tol: float = SWEEP_TOL, residual_tol: float = RESIDUAL_TOL) -> tuple[GSolution, CheckReport]:
    """Fixed-point iteration for the CDF of ``Y`` on ``[-beta/(1-alpha), beta/(1-alpha)]``.

    Starts from the unit step at 0 (value 1/2 there) and stops after ``iters``
    sweeps or once successive sweeps differ by less than ``sweep_tol`` in sup
    norm. The report is INCONCLUSIVE without convergence, VIOLATION if the
    factor-2 delay residual exceeds ``residual_tol``, PASS otherwise.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not beta > 0:
        raise ValueError("beta must be positive")
    if grid_size < 5:
        raise ValueError("grid_size must be at least 5")
    if grid_size % 2 == 0:
        grid_size += 1  # keep w = 0 on the grid
    L = 1.0 / (1.0 - alpha)
    w = np.linspace(-L, L, grid_size)
    w[grid_size // 2] = 0.0
    F = np.where(w > 0, 1.0, 0.0)
    F[grid_size // 2] = 0.5
    dist = math.inf
    k = 0
    for k in range(1, iters + 1):
        new = _sweep(alpha, _PiecewiseLinear(w, F))
        # the operator commutes with w -> -w, F -> 1 - F; symmetrize away rounding
        new = 0.5 * (new + 1.0 - new[::-1])
        dist = float(np.max(np.abs(new - F)))
        F = new
        if dist < sweep_tol:
            break
    sol = GSolution(alpha, beta, w, F, k, dist)
    res = delay_residuals(sol)
    mid = grid_size // 2
    dF = sol.density_w()
    details = {
        **res,
        "G0": float(F[mid]),
        "Fprime0": float(dF[mid]),
        "symmetry": float(np.max(np.abs(F + F[::-1] - 1.0))),
        "iterations": k,
        "last_sweep": dist,
    }
    resolution = {"grid_size": grid_size, "h": float(w[1] - w[0]), "iters": iters, "sweep_tol": sweep_tol,
                  "residual_tol": residual_tol}
    if dist >= sweep_tol:
        details["reason"] = f"not converged after {iters} sweeps (last sup-distance {dist:.3g})"
        return sol, CheckReport(Verdict.INCONCLUSIVE, resolution=resolution, details=details)
    if res["residual_factor2"] >= residual_tol:
        i = int(np.argmax(np.abs(2 * dF[1:-1] - (_PiecewiseLinear(w, F)((w + 1) / alpha)
                                                 - _PiecewiseLinear(w, F)((w - 1) / alpha))[1:-1]))) + 1
        witness = {"w": float(w[i]), "residual": res["residual_factor2"]}
        return sol, CheckReport(Verdict.VIOLATION, witness=witness, resolution=resolution, details=details)
    return sol, CheckReport(Verdict.PASS, resolution=resolution, details=details)
