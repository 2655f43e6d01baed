"""Finite sums ``sum c_i t^{e_i}`` with real exponents, closed under the
operations needed to differentiate ``exp(-w(t))`` symbolically."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

EXPONENT_TOL = 1e-12
MAX_TERMS = 100_000


class TermOverflow(RuntimeError):
    pass


class PowerSum:
    """Canonical form: exponents strictly increasing, merged within
    ``EXPONENT_TOL``, zero coefficients dropped."""

    __slots__ = ("exponents", "coefs")

    def __init__(self, terms: Iterable[tuple[float, float]] = ()):
        # full sort plus fsum keeps the result independent of input order
        pairs = sorted((float(e), float(c)) for c, e in terms)
        exps: list[float] = []
        groups: list[list[float]] = []
        for e, c in pairs:
            if exps and abs(e - exps[-1]) <= EXPONENT_TOL:
                groups[-1].append(c)
            else:
                exps.append(e)
                groups.append([c])
        coefs = [math.fsum(g) for g in groups]
        keep = [i for i, c in enumerate(coefs) if c != 0.0]
        if len(keep) > MAX_TERMS:
            raise TermOverflow(f"{len(keep)} terms exceeds cap {MAX_TERMS}")
        self.exponents = tuple(exps[i] for i in keep)
        self.coefs = tuple(coefs[i] for i in keep)

    @classmethod
    def monomial(cls, coef: float, exponent: float) -> "PowerSum":
        return cls([(coef, exponent)])

    @property
    def terms(self) -> list[tuple[float, float]]:
        """``[(coef, exponent), ...]`` in increasing exponent order."""
        return list(zip(self.coefs, self.exponents))

    def __len__(self):
        return len(self.coefs)

    def __bool__(self):
        return bool(self.coefs)

    def __eq__(self, other):
        return isinstance(other, PowerSum) and self.terms == other.terms

    def __repr__(self):
        if not self:
            return "PowerSum(0)"
        return "PowerSum(" + " + ".join(f"{c:g}*t^{e:g}" for c, e in self.terms) + ")"

    def __add__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(self.terms + other.terms)

    def __neg__(self) -> "PowerSum":
        return PowerSum((-c, e) for c, e in self.terms)

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        return self + (-other)

    def __mul__(self, other) -> "PowerSum":
        if isinstance(other, PowerSum):
            if len(self) * len(other) > MAX_TERMS * 10:
                raise TermOverflow("product too large")
            return PowerSum((c1 * c2, e1 + e2) for c1, e1 in self.terms for c2, e2 in other.terms)
        return PowerSum((other * c, e) for c, e in self.terms)

    __rmul__ = __mul__

    def derivative(self) -> "PowerSum":
        return PowerSum((c * e, e - 1.0) for c, e in self.terms if e != 0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, e in self.terms:
            out = out + c * t**e
        return out if out.ndim else float(out)

    def magnitude(self, t):
        """``sum |c_i| t^{e_i}``, the scale for cancellation-aware sign tests."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, e in self.terms:
            out = out + abs(c) * t**e
        return out

    def limit_at_zero(self) -> float:
        """``lim_{t -> 0+}``: governed by the smallest exponent."""
        if not self:
            return 0.0
        c, e = self.terms[0]
        if e < 0:
            return math.copysign(math.inf, c)
        if e == 0:
            return c
        return 0.0

    def sign_at_zero(self) -> int:
        """Sign of the sum for all small enough t > 0 (0 for the zero sum)."""
        if not self:
            return 0
        return 1 if self.coefs[0] > 0 else -1
