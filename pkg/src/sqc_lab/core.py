"""Numeric primitives shared by every other module.

Extended reals, immutable points, the tolerance policy and the seeded
random streams used by the samplers all live here.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "INF",
    "PlusInfinity",
    "ExtendedReal",
    "is_inf",
    "to_extended",
    "ext_max",
    "as_point",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "RngSeed",
    "convex_combination",
    "squared_distance",
    "sqc_rhs",
]


@functools.total_ordering
class PlusInfinity:
    """The element ``+inf`` of the extended real line.

    It compares above every real number but supports no arithmetic, so an
    accidental ``INF + 1`` raises ``TypeError`` instead of silently
    propagating an IEEE infinity.
    """

    _instance: PlusInfinity | None = None

    def __new__(cls) -> PlusInfinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "+inf"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("sqc_lab.PlusInfinity")

    def __lt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, float, np.floating, np.integer)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, float, np.floating, np.integer)):
            return True
        return NotImplemented

    def __reduce__(self):
        return (PlusInfinity, ())


INF = PlusInfinity()

ExtendedReal = Union[float, PlusInfinity]


def is_inf(v: ExtendedReal) -> bool:
    return v is INF


def to_extended(v: float) -> ExtendedReal:
    """Convert a float coming out of a vectorised kernel.

    Kernels encode ``+inf`` as ``np.inf``; ``-inf`` and ``nan`` are never
    legal values for a proper function.
    """
    v = float(v)
    if v == math.inf:
        return INF
    if math.isnan(v) or v == -math.inf:
        raise ValueError(f"improper function value {v!r}")
    return v


def ext_max(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal:
    if a is INF or b is INF:
        return INF
    return a if a >= b else b


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate ``x`` as a point of R^n and return a read-only float array."""
    if np.ndim(x) > 1:
        raise ValueError(f"a point must be one-dimensional, got shape {np.shape(x)}")
    arr = np.array(x, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"point coordinates must be finite: {arr!r}")
    if dim is not None and arr.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {arr.size}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Tolerance:
    """Slack used when comparing the two sides of the SQC inequality.

    The allowed excess is ``abs_eps + rel_eps * max(1, |rhs|)``; pairs closer
    than ``min_pair_distance`` are never drawn by the samplers.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9
    min_pair_distance: float = 1e-6

    def __post_init__(self):
        for name in ("abs_eps", "rel_eps"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1e-3):
                raise ValueError(f"{name} must lie in [0, 1e-3], got {v}")
        if not self.min_pair_distance > 0:
            raise ValueError("min_pair_distance must be positive")

    def slack(self, rhs):
        """Allowed excess of lhs over rhs; works on scalars and arrays."""
        return self.abs_eps + self.rel_eps * np.maximum(1.0, np.abs(rhs))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class RngSeed:
    """A 64-bit seed for the sample streams.

    Streams are built from ``numpy.random.SeedSequence([seed, *key])`` feeding
    a PCG64 generator, so any sub-stream (a block of triples, a probe shell)
    is addressable without generating what comes before it.
    """

    seed: int

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self, *key: int) -> np.random.Generator:
        ss = np.random.SeedSequence([self.seed, *[int(k) for k in key]])
        return np.random.Generator(np.random.PCG64(ss))


def convex_combination(x, y, t: float) -> np.ndarray:
    """Return ``(1 - t) * x + t * y``."""
    x = as_point(x)
    y = as_point(y, x.size)
    if not (0.0 < t < 1.0):
        raise ValueError(f"t must lie in (0, 1), got {t}")
    z = (1.0 - t) * x + t * y
    z.setflags(write=False)
    return z


def squared_distance(x, y) -> float:
    x = as_point(x)
    y = as_point(y, x.size)
    d = x - y
    return float(d @ d)


def sqc_rhs(fx: ExtendedReal, fy: ExtendedReal, gamma: float, t: float, sqdist: float) -> ExtendedReal:
    """Right-hand side ``max{fx, fy} - gamma/2 * (1-t) * t * sqdist``."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not (0.0 < t < 1.0):
        raise ValueError("t must lie in (0, 1)")
    if sqdist < 0:
        raise ValueError("sqdist must be non-negative")
    m = ext_max(fx, fy)
    if m is INF:
        return INF
    return m - 0.5 * gamma * (1.0 - t) * t * sqdist
