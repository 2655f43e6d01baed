"""Complete-monotonicity screening of ``g(t) = exp(-C t^alpha - D t)``.

With ``w(t) = C t^alpha + D t`` the derivatives are ``g^(m) = (h_m - w^(m)) g``
where ``h_1 = 0`` and ``h_{m+1} = h_m' - w' (h_m - w^(m))``. Every ``h_m`` is a
finite power sum, so the sign of ``g^(m)`` near 0+ is read off exactly from the
smallest exponent; a grid scan covers t away from 0.
"""
from __future__ import annotations

import numpy as np

from ..core import CheckReport, Verdict
from .powersum import PowerSum, TermOverflow

DEFAULT_GRID = np.geomspace(1e-6, 1e2, 400)
SIGN_RTOL = 1e-9


def derivative_factors(C: float, D: float, alpha: float, M: int):
    """Yield ``(m, h_m - w^(m))`` for m = 1..M as power sums."""
    w = PowerSum([(C, alpha), (D, 1.0)])
    w1 = w.derivative()
    h = PowerSum()
    wm = w
    for m in range(1, M + 1):
        wm = wm.derivative()
        factor = h - wm
        yield m, factor
        h = h.derivative() - w1 * factor


def check_cm(C: float, D: float, alpha: float, M: int = 12, t_grid=None) -> CheckReport:
    """Search for a sign violation of ``(-1)^m g^(m)`` for m <= M.

    Two passes. The 0+ pass reads the sign of every order from its smallest
    exponent; this is exact, so its first offending order is the reported
    witness. Only when 0+ is clean does the grid pass decide. Grid hits are
    always listed under ``details["grid_violations"]``.

    Without a violation the verdict is INCONCLUSIVE: finitely many orders
    never certify complete monotonicity.
    """
    if not alpha > 1:
        raise ValueError("check_cm needs alpha > 1")
    if M < 2:
        raise ValueError("M must be >= 2")
    if C < 0 or D < 0:
        raise ValueError("C and D must be nonnegative")
    grid = DEFAULT_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    resolution = {"max_order": M, "grid_min": float(grid.min()), "grid_max": float(grid.max()),
                  "grid_points": int(grid.size), "sign_rtol": SIGN_RTOL}
    zero_hit = None
    grid_hits = []
    signs = []
    try:
        for m, factor in derivative_factors(C, D, alpha, M):
            want = 1 if m % 2 == 0 else -1
            s0 = factor.sign_at_zero()
            signs.append(s0)
            if s0 == -want and zero_hit is None:
                c0, e0 = factor.terms[0]
                zero_hit = {"order": m, "t": "0+", "limit": factor.limit_at_zero(),
                            "leading_coef": c0, "leading_exponent": e0, "required_sign": want}
            vals = factor(grid)
            bad = np.nonzero(want * vals < -SIGN_RTOL * factor.magnitude(grid))[0]
            if bad.size:
                i = int(bad[0])
                grid_hits.append({"order": m, "t": float(grid[i]), "value": float(vals[i]),
                                  "required_sign": want})
    except TermOverflow as exc:
        resolution["overflow"] = str(exc)
    details = {"signs_at_zero": signs, "grid_violations": grid_hits}
    if zero_hit is not None:
        return CheckReport(Verdict.VIOLATION, witness=zero_hit, resolution=resolution, details=details)
    if grid_hits:
        return CheckReport(Verdict.VIOLATION, witness=grid_hits[0], resolution=resolution, details=details)
    if "overflow" in resolution:
        details["reason"] = f"term cap reached after order {len(signs)}"
    else:
        details["reason"] = f"no violation up to order {M}"
    return CheckReport(Verdict.INCONCLUSIVE, resolution=resolution, details=details)
