"""Geometric loci where the gallery functions jump.

A locus knows how to sample points on itself, whether a point lies on it,
and (for loci with positive dimension) how to project nearby points onto it.
The same objects serve as stress sets for the triple sampler.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import as_point
from .geometry import ConvexDomain, LinearMap, _unit_vectors

__all__ = [
    "PartitionPredicate",
    "lsb_parity",
    "always",
    "Locus",
    "SinglePoint",
    "IntervalEndpoints",
    "CountableSet",
    "Sphere",
    "BoundarySubset",
    "MappedLocus",
    "RestrictedLocus",
    "SHELL_RTOL",
]

# Relative half-width of the band treated as "on the sphere / on the boundary".
# Chords between points at least 1e-6 apart dip deeper than this below the
# sphere, so a chord never re-enters the band it started from.
SHELL_RTOL = 1e-14


@dataclass(frozen=True)
class PartitionPredicate:
    """Deterministic split of a sphere or boundary into two pieces."""

    id: str
    fn: Callable[[np.ndarray], np.ndarray] = field(compare=False)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.atleast_2d(X)), dtype=bool)


def _lsb_parity(X: np.ndarray) -> np.ndarray:
    x1 = np.ascontiguousarray(X[:, 0], dtype=np.float64)
    return (x1.view(np.uint64) & np.uint64(1)) == 0


# True where the last significand bit of x_1 is 0: both pieces are
# interleaved at the scale of one ulp.
lsb_parity = PartitionPredicate("lsb_parity_x1", _lsb_parity)
always = PartitionPredicate("always", lambda X: np.ones(X.shape[0], dtype=bool))


class Locus:
    kind: str = "locus"
    dim: int

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """Points of the locus itself (respecting any predicate)."""
        raise NotImplementedError

    def sample_support(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """Points of the geometric support, ignoring predicates; used for stress sampling."""
        return self.sample(rng, m)

    def contains(self, X: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        raise NotImplementedError

    def project(self, X: np.ndarray) -> np.ndarray | None:
        """Nearby points on the support, or ``None`` for discrete loci."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SinglePoint(Locus):
    point: np.ndarray
    kind = "SinglePoint"

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))

    @property
    def dim(self):
        return self.point.size

    def sample(self, rng, m):
        return np.tile(self.point, (m, 1))

    def contains(self, X, tol=1e-9):
        return np.linalg.norm(np.atleast_2d(X) - self.point, axis=1) <= tol

    def to_dict(self):
        return {"kind": self.kind, "point": self.point.tolist()}


@dataclass(frozen=True)
class IntervalEndpoints(Locus):
    a: float
    b: float
    kind = "IntervalEndpoints"
    dim = 1

    def sample(self, rng, m):
        return np.where(rng.random((m, 1)) < 0.5, self.a, self.b)

    def contains(self, X, tol=1e-9):
        x = np.atleast_2d(X)[:, 0]
        return (np.abs(x - self.a) <= tol) | (np.abs(x - self.b) <= tol)

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class CountableSet(Locus):
    """The points ``point_of(k)`` for ``k = first, first + 1, ...``.

    Sampling and membership only look at the first ``horizon`` members.
    """

    description: str
    point_of: Callable[[int], float] = field(compare=False)
    first: int = 1
    horizon: int = 64
    kind = "CountableSet"
    dim = 1

    def members(self, count: int | None = None) -> np.ndarray:
        count = self.horizon if count is None else count
        return np.array([self.point_of(k) for k in range(self.first, self.first + count)], dtype=float)

    def sample(self, rng, m):
        pts = self.members()
        return pts[rng.integers(0, pts.size, m)][:, None]

    def contains(self, X, tol=1e-9):
        x = np.atleast_2d(X)[:, 0]
        pts = self.members()
        return np.min(np.abs(x[:, None] - pts[None, :]), axis=1) <= tol

    def index_of(self, x: float, tol: float = 1e-9) -> int | None:
        pts = self.members()
        j = int(np.argmin(np.abs(pts - x)))
        return self.first + j if abs(pts[j] - x) <= tol else None

    def to_dict(self):
        return {"kind": self.kind, "description": self.description, "first": self.first}


@dataclass(frozen=True, eq=False)
class Sphere(Locus):
    """The sphere ``|x - center| = radius``, optionally cut down by a predicate.

    With ``predicate`` set, the locus is ``{x on the sphere : predicate(x) == polarity}``.
    """

    radius: float
    center: np.ndarray
    predicate: PartitionPredicate | None = None
    polarity: bool = True
    kind = "Sphere"

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0:
            raise ValueError("sphere radius must be positive")

    @property
    def dim(self):
        return self.center.size

    def sample_support(self, rng, m):
        return self.center + self.radius * _unit_vectors(rng, m, self.dim)

    def sample(self, rng, m):
        out = self.sample_support(rng, m)
        if self.predicate is None:
            return out
        bad = self.predicate(out) != self.polarity
        rounds = 0
        while np.any(bad):
            rows = np.flatnonzero(bad)
            out[rows] = self.sample_support(rng, rows.size)
            bad[rows] = self.predicate(out[rows]) != self.polarity
            rounds += 1
            if rounds > 200:
                raise ValueError(f"predicate {self.predicate.id} selects no sampled sphere points")
        return out

    def on_support(self, X, tol=1e-9):
        r = np.linalg.norm(np.atleast_2d(X) - self.center, axis=1)
        return np.abs(r - self.radius) <= tol * max(1.0, self.radius)

    def contains(self, X, tol=1e-9):
        X = np.atleast_2d(X)
        hit = self.on_support(X, tol)
        if self.predicate is not None:
            hit &= self.predicate(X) == self.polarity
        return hit

    def project(self, X):
        d = np.atleast_2d(X) - self.center
        nrm = np.linalg.norm(d, axis=1, keepdims=True)
        return self.center + self.radius * d / np.where(nrm > 0, nrm, 1.0)

    def to_dict(self):
        out = {"kind": self.kind, "radius": self.radius, "center": self.center.tolist()}
        if self.predicate is not None:
            out["predicate"] = self.predicate.id
            out["polarity"] = self.polarity
        return out


@dataclass(frozen=True, eq=False)
class BoundarySubset(Locus):
    """``{x in bd(domain) : predicate(x) == polarity}``."""

    domain: ConvexDomain
    predicate: PartitionPredicate = always
    polarity: bool = True
    kind = "BoundarySubset"

    @property
    def dim(self):
        return self.domain.dim

    def sample_support(self, rng, m):
        from .geometry import Region

        return self.domain.sample(rng, Region.BOUNDARY, m)

    def sample(self, rng, m):
        out = self.sample_support(rng, m)
        bad = self.predicate(out) != self.polarity
        rounds = 0
        while np.any(bad):
            rows = np.flatnonzero(bad)
            out[rows] = self.sample_support(rng, rows.size)
            bad[rows] = self.predicate(out[rows]) != self.polarity
            rounds += 1
            if rounds > 200:
                raise ValueError(f"predicate {self.predicate.id} selects no sampled boundary points")
        return out

    def contains(self, X, tol=1e-9):
        X = np.atleast_2d(X)
        return (self.domain.boundary_distance(X) <= tol) & (self.predicate(X) == self.polarity)

    def project(self, X):
        return self.domain.project_to_boundary(np.atleast_2d(X))

    def to_dict(self):
        return {"kind": self.kind, "predicate": self.predicate.id, "polarity": self.polarity}


@dataclass(frozen=True, eq=False)
class MappedLocus(Locus):
    """Image of ``inner`` under ``x -> A x + b``."""

    inner: Locus
    map: LinearMap
    kind = "Mapped"

    @property
    def dim(self):
        return self.inner.dim

    def sample(self, rng, m):
        return self.map.forward(self.inner.sample(rng, m))

    def sample_support(self, rng, m):
        return self.map.forward(self.inner.sample_support(rng, m))

    def contains(self, X, tol=1e-9):
        return self.inner.contains(self.map.backward(X), tol)

    def project(self, X):
        P = self.inner.project(self.map.backward(X))
        return None if P is None else self.map.forward(P)

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), **self.map.to_dict()}


@dataclass(frozen=True, eq=False)
class RestrictedLocus(Locus):
    """The part of ``inner`` lying in the open interior of ``domain``."""

    inner: Locus
    domain: ConvexDomain
    kind = "Restricted"

    @property
    def dim(self):
        return self.inner.dim

    def _interior(self, X):
        return self.domain.is_inside(X) & (self.domain.boundary_distance(X) > 1e-9)

    def sample(self, rng, m):
        out = self.inner.sample(rng, m)
        bad = ~self._interior(out)
        rounds = 0
        while np.any(bad):
            rows = np.flatnonzero(bad)
            out[rows] = self.inner.sample(rng, rows.size)
            bad[rows] = ~self._interior(out[rows])
            rounds += 1
            if rounds > 500:
                raise ValueError("locus does not meet the interior of the domain")
        return out

    def sample_support(self, rng, m):
        out = self.inner.sample_support(rng, m)
        bad = ~self.domain.contains(out)
        rounds = 0
        while np.any(bad):
            rows = np.flatnonzero(bad)
            out[rows] = self.inner.sample_support(rng, rows.size)
            bad[rows] = ~self.domain.contains(out[rows])
            rounds += 1
            if rounds > 500:
                raise ValueError("locus does not meet the domain")
        return out

    def contains(self, X, tol=1e-9):
        X = np.atleast_2d(X)
        return self.inner.contains(X, tol) & self._interior(X)

    def project(self, X):
        return self.inner.project(X)

    def meets_interior(self, rng: np.random.Generator, tries: int = 2000) -> bool:
        pts = self.inner.sample_support(rng, tries)
        return bool(np.any(self._interior(pts)))

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "domain": self.domain.to_dict()}
