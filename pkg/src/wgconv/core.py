"""Domain types shared by every module: laws, characteristic-function specs,
check reports, seeded streams, and the rescaling / scale-mixture operators.

All types are immutable values. Sampling always goes through an explicit
:class:`RngStream`, so every random result is a function of its inputs.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

GRID_NORM_TOL = 1e-6


class UnsupportedRepresentation(TypeError):
    """Operation cannot act on this law representation without sampling."""


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RngStream:
    """Seeded stream addressed by ``(seed, path)``.

    Equal ``(seed, path)`` always yields the same generator state; children
    derived with :meth:`child` are independent for Monte Carlo purposes
    (numpy ``SeedSequence`` spawn keys).
    """

    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "path", tuple(int(i) for i in self.path))

    def child(self, *idx: int) -> "RngStream":
        return RngStream(self.seed, self.path + tuple(idx))

    def spawn(self, n: int) -> list["RngStream"]:
        return [self.child(i) for i in range(n)]

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))


def as_stream(rng: RngStream | int) -> RngStream:
    return rng if isinstance(rng, RngStream) else RngStream(int(rng))


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{name}: sample list must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: samples must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dirac:
    """Point mass at ``a >= 0`` (radial)."""

    a: float

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError("Dirac location on [0, inf) must be nonnegative")
        object.__setattr__(self, "a", float(self.a))


@dataclass(frozen=True, eq=False)
class Empirical:
    """Empirical radial law: uniform weight on nonnegative samples."""

    samples: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.samples, "Empirical")
        if np.any(arr < 0):
            raise ValueError("Empirical radial samples must be >= 0")
        object.__setattr__(self, "samples", arr)

    def __eq__(self, other):
        return type(other) is Empirical and np.array_equal(self.samples, other.samples)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Density tabulated on an increasing grid, normalised by trapezoid rule."""

    xs: np.ndarray
    fs: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        fs = np.array(self.fs, dtype=float)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise ValueError("GridDensity needs matching 1-d xs, fs with >= 2 points")
        if np.any(np.diff(xs) <= 0) or xs[0] < 0:
            raise ValueError("GridDensity grid must be increasing and nonnegative")
        if np.any(fs < 0):
            raise ValueError("GridDensity values must be nonnegative")
        total = np.trapezoid(fs, xs)
        if abs(total - 1.0) > GRID_NORM_TOL:
            raise ValueError(f"GridDensity integrates to {total!r}, not 1 within {GRID_NORM_TOL}")
        xs.setflags(write=False)
        fs.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "fs", fs)

    def __eq__(self, other):
        return (
            type(other) is GridDensity
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.fs, other.fs)
        )

    __hash__ = None

    def cdf(self) -> np.ndarray:
        mids = 0.5 * (self.fs[1:] + self.fs[:-1]) * np.diff(self.xs)
        return np.concatenate([[0.0], np.cumsum(mids)])


@dataclass(frozen=True)
class GeneralizedGamma:
    """Density ``a / (Gamma(p/a) lam^(p/a)) x^(p-1) exp(-x^a / lam)`` on x > 0."""

    lam: float
    p: float
    a: float

    def __post_init__(self):
        for name in ("lam", "p", "a"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"GeneralizedGamma.{name} must be positive, got {v!r}")
            object.__setattr__(self, name, float(v))


@dataclass(frozen=True)
class WeaklyStableRadial:
    """Radial law ``theta_alpha^n`` making ``U^n * theta`` rotationally alpha-stable."""

    alpha: float
    n: int

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise ValueError("alpha must lie in (0, 2]")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class SignedDirac:
    x: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))


@dataclass(frozen=True, eq=False)
class SignedEmpirical:
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, "SignedEmpirical"))

    def __eq__(self, other):
        return type(other) is SignedEmpirical and np.array_equal(self.samples, other.samples)

    __hash__ = None


RadialLaw = Union[Dirac, Empirical, GridDensity, GeneralizedGamma, WeaklyStableRadial]
SignedLaw = Union[SignedDirac, SignedEmpirical]
RADIAL_TYPES = (Dirac, Empirical, GridDensity, GeneralizedGamma, WeaklyStableRadial)
SIGNED_TYPES = (SignedDirac, SignedEmpirical)


# ---------------------------------------------------------------------------
# Characteristic-function specs (real, even)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricStable:
    """``exp(-A |t|^p)``."""

    A: float
    p: float

    def __post_init__(self):
        if not self.A >= 0:
            raise ValueError("SymmetricStable scale must be >= 0")
        if not 0 < self.p <= 2:
            raise ValueError("SymmetricStable index must lie in (0, 2]")


@dataclass(frozen=True)
class Pseudostable:
    """``exp(-C |t|^q - D |t|^p)``."""

    C: float
    D: float
    q: float
    p: float

    def __post_init__(self):
        if not (self.C >= 0 and self.D >= 0):
            raise ValueError("Pseudostable C, D must be >= 0")
        if not self.q > 0:
            raise ValueError("Pseudostable q must be positive")
        if not 0 < self.p <= 2:
            raise ValueError("Pseudostable p must lie in (0, 2]")


@dataclass(frozen=True)
class SincProduct:
    """``prod_{j=0..Jmax} sinc(beta alpha^j t)``, the CF of ``beta sum alpha^j X_j``
    with X_j uniform on [-1, 1]."""

    alpha: float
    beta: float
    Jmax: int | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("SincProduct alpha must lie in (0, 1)")
        if not self.beta > 0:
            raise ValueError("SincProduct beta must be positive")
        if self.Jmax is None:
            object.__setattr__(self, "Jmax", default_jmax(self.alpha))
        elif int(self.Jmax) != self.Jmax or self.Jmax < 1:
            raise ValueError("Jmax must be a positive integer")
        else:
            object.__setattr__(self, "Jmax", int(self.Jmax))


def default_jmax(alpha: float) -> int:
    return int(np.ceil(np.log(1e-12) / np.log(alpha)))


@dataclass(frozen=True)
class MixtureOfStable:
    """``t -> E exp(-|t s|^p)`` with ``s`` drawn from a radial law."""

    p: float
    radial: Any

    def __post_init__(self):
        if not 0 < self.p <= 2:
            raise ValueError("MixtureOfStable index must lie in (0, 2]")
        if not isinstance(self.radial, RADIAL_TYPES):
            raise TypeError("MixtureOfStable needs a radial law")


@dataclass(frozen=True)
class LogPeriodic:
    """``exp(-|t|^p A (1 + eps cos(2 pi ln|t| / ln c)))``, semi-stable with span c."""

    A: float
    eps: float
    p: float
    c: float

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("LogPeriodic A must be positive")
        if not 0 <= self.eps < 1:
            raise ValueError("LogPeriodic eps must lie in [0, 1)")
        if not self.p > 0:
            raise ValueError("LogPeriodic p must be positive")
        if not self.c > 1:
            raise ValueError("LogPeriodic c must exceed 1")


CharFnSpec = Union[SymmetricStable, Pseudostable, SincProduct, MixtureOfStable, LogPeriodic]
SPEC_TYPES = (SymmetricStable, Pseudostable, SincProduct, MixtureOfStable, LogPeriodic)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class Verdict(str, enum.Enum):
    PASS = "PASS"
    VIOLATION = "VIOLATION"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CheckReport:
    verdict: Verdict
    witness: dict | None = None
    resolution: dict | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "verdict", Verdict(self.verdict))
        if self.verdict is Verdict.VIOLATION and self.witness is None:
            raise ValueError("a VIOLATION report needs a witness")
        if self.verdict is Verdict.INCONCLUSIVE and self.resolution is None:
            raise ValueError("an INCONCLUSIVE report needs a resolution descriptor")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "witness": self.witness, "resolution": self.resolution}
        if self.details:
            out["details"] = self.details
        return _jsonable(out)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(Verdict(d["verdict"]), d.get("witness"), d.get("resolution"), d.get("details") or {})


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def rescale(t: float, law, rng: RngStream | None = None, n_samples: int = 100_000):
    """The rescaling operator ``T_t``: law of ``t X`` for ``X ~ law``.

    Radial laws use ``|t|`` and stay on [0, inf). Density and parametric laws
    are only rescaled through sampling, which needs ``rng``.
    """
    t = float(t)
    if isinstance(law, SIGNED_TYPES):
        if t == 0:
            return SignedDirac(0.0)
        if isinstance(law, SignedDirac):
            return SignedDirac(t * law.x)
        return SignedEmpirical(t * law.samples)
    if not isinstance(law, RADIAL_TYPES):
        raise TypeError(f"not a law: {law!r}")
    t = abs(t)
    if t == 0:
        return Dirac(0.0)
    if isinstance(law, Dirac):
        return Dirac(t * law.a)
    if isinstance(law, Empirical):
        return Empirical(t * law.samples)
    if rng is None:
        raise UnsupportedRepresentation(
            f"rescaling {type(law).__name__} needs an RngStream (result is Empirical)"
        )
    from .samplers import draw_radial

    return Empirical(t * draw_radial(law, n_samples, rng))


def mix(cf, radial) -> CharFnSpec:
    """Scale mixture of a symmetric stable CF by a radial law.

    The result evaluates to ``E exp(-A |t s|^p)``; point masses collapse back
    to a :class:`SymmetricStable` (``Dirac(1)`` is the identity, ``Dirac(0)``
    gives the constant 1).
    """
    if not isinstance(cf, SymmetricStable):
        raise TypeError("mix expects a SymmetricStable base")
    if not isinstance(radial, RADIAL_TYPES):
        raise TypeError("mix expects a radial law")
    if isinstance(radial, Dirac):
        if radial.a == 1.0:
            return cf
        return SymmetricStable(cf.A * radial.a**cf.p, cf.p)
    if cf.A != 1.0:
        radial = _scale_radial(radial, cf.A ** (1.0 / cf.p))
    return MixtureOfStable(cf.p, radial)


def _scale_radial(law, k: float):
    if isinstance(law, Empirical):
        return Empirical(k * law.samples)
    if isinstance(law, GridDensity):
        return GridDensity(k * law.xs, law.fs / k)
    if isinstance(law, GeneralizedGamma):
        # x -> kx maps lam to lam * k^a
        return GeneralizedGamma(law.lam * k**law.a, law.p, law.a)
    raise UnsupportedRepresentation(f"cannot rescale {type(law).__name__} exactly")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def to_dict(obj) -> dict:
    """Serialise a law or CF spec to a ``{"variant": ..., fields}`` dict."""
    name = type(obj).__name__
    if isinstance(obj, (Empirical, SignedEmpirical)):
        return {"variant": name, "samples": obj.samples.tolist()}
    if isinstance(obj, GridDensity):
        return {"variant": name, "xs": obj.xs.tolist(), "fs": obj.fs.tolist()}
    if isinstance(obj, MixtureOfStable):
        return {"variant": name, "p": obj.p, "radial": to_dict(obj.radial)}
    if isinstance(obj, RADIAL_TYPES + SIGNED_TYPES + SPEC_TYPES):
        return {"variant": name, **{k: v for k, v in vars(obj).items()}}
    raise TypeError(f"cannot serialise {obj!r}")


_VARIANTS = {c.__name__: c for c in RADIAL_TYPES + SIGNED_TYPES + SPEC_TYPES}


def from_dict(d: dict):
    d = dict(d)
    try:
        cls = _VARIANTS[d.pop("variant")]
    except KeyError as exc:
        raise ValueError(f"unknown or missing variant tag in {d!r}") from exc
    if cls is MixtureOfStable:
        return MixtureOfStable(d["p"], from_dict(d["radial"]))
    return cls(**d)


def dumps(obj) -> str:
    return json.dumps(to_dict(obj))


def loads(text: str):
    return from_dict(json.loads(text))
