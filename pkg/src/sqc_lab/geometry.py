"""Convex domains, linear maps and the samplers that feed the checks."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .core import RngSeed, as_point

__all__ = [
    "Region",
    "PointTag",
    "PointClass",
    "ConvexDomain",
    "FullSpace",
    "Interval",
    "Box",
    "ClosedBall",
    "AffineImage",
    "LinearMap",
    "classify",
    "sample_point",
    "min_modulus",
    "TripleSample",
    "TripleBlock",
    "iter_triple_blocks",
    "sample_triples",
    "BLOCK_SIZE",
    "T_LOW",
    "T_HIGH",
]

CLASSIFY_TOL = 1e-9
# closed-set membership slack, relative to the domain's scale
MEMBER_RTOL = 1e-12
T_LOW, T_HIGH = 0.001, 0.999
BLOCK_SIZE = 1000
STRESS_RADIUS = 1e-3
_MAX_REJECTION_ROUNDS = 200


class Region(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    ANYWHERE = "anywhere"


class PointTag(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class PointClass:
    tag: PointTag
    boundary_distance: float


def _unit_vectors(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    if n == 1:
        return np.where(rng.random((m, 1)) < 0.5, -1.0, 1.0)
    d = rng.standard_normal((m, n))
    norms = np.linalg.norm(d, axis=1, keepdims=True)
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        d[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(d, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    return d / norms


def _ball_points(rng: np.random.Generator, m: int, n: int, radius: float) -> np.ndarray:
    """Uniform points of the closed ball of given radius centred at 0."""
    r = radius * rng.random((m, 1)) ** (1.0 / n)
    return r * _unit_vectors(rng, m, n)


class ConvexDomain:
    """Base class for the convex sets used as effective domains.

    Subclasses implement the vectorised primitives; the scalar helpers
    :func:`classify` and :func:`sample_point` wrap them.
    """

    dim: int
    bounded: bool = True

    def contains(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_distance(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def is_inside(self, X: np.ndarray) -> np.ndarray:
        """Strict (open-set) membership, ignoring the tolerance band."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, region: Region, m: int) -> np.ndarray:
        raise NotImplementedError

    def project_to_boundary(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def to_dict(self) -> dict:
        raise NotImplementedError

    def classify_many(self, X: np.ndarray, tol: float = CLASSIFY_TOL) -> tuple[np.ndarray, np.ndarray]:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        dist = self.boundary_distance(X)
        inside = self.contains(X)
        tags = np.where(dist < tol, 1, np.where(inside, 0, 2))
        return tags, dist

    def _check(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: domain is {self.dim}-D, points are {X.shape[1]}-D")
        return X


@dataclass(frozen=True)
class FullSpace(ConvexDomain):
    """All of R^n. Sampling draws uniformly from a ball of ``sampling_radius``."""

    dim: int
    sampling_radius: float = 3.0
    bounded = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def contains(self, X):
        X = self._check(X)
        return np.all(np.isfinite(X), axis=1)

    is_inside = contains

    def boundary_distance(self, X):
        X = self._check(X)
        return np.full(X.shape[0], np.inf)

    def sample(self, rng, region, m):
        region = Region(region)
        if region is Region.BOUNDARY:
            raise ValueError("the full space has no boundary")
        return _ball_points(rng, m, self.dim, self.sampling_radius)

    def project_to_boundary(self, X):
        raise ValueError("the full space has no boundary")

    def bounding_box(self):
        r = self.sampling_radius
        return np.full(self.dim, -r), np.full(self.dim, r)

    def to_dict(self):
        return {"kind": "FullSpace", "dim": self.dim}


@dataclass(frozen=True)
class Interval(ConvexDomain):
    a: float
    b: float
    dim: int = field(default=1, init=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"Interval needs finite a < b, got ({self.a}, {self.b})")

    @property
    def _slack(self):
        return MEMBER_RTOL * max(1.0, abs(self.a), abs(self.b))

    def contains(self, X):
        x = self._check(X)[:, 0]
        return (x >= self.a - self._slack) & (x <= self.b + self._slack)

    def is_inside(self, X):
        x = self._check(X)[:, 0]
        return (x > self.a) & (x < self.b)

    def boundary_distance(self, X):
        x = self._check(X)[:, 0]
        return np.minimum(np.abs(x - self.a), np.abs(x - self.b))

    def sample(self, rng, region, m):
        region = Region(region)
        if region is Region.BOUNDARY:
            return np.where(rng.random((m, 1)) < 0.5, self.a, self.b)
        x = rng.uniform(self.a, self.b, (m, 1))
        if region is Region.INTERIOR:
            bad = self.boundary_distance(x) < CLASSIFY_TOL
            while np.any(bad):
                x[bad] = rng.uniform(self.a, self.b, (int(bad.sum()), 1))
                bad = self.boundary_distance(x) < CLASSIFY_TOL
        return x

    def project_to_boundary(self, X):
        x = self._check(X)[:, 0]
        return np.where(np.abs(x - self.a) <= np.abs(x - self.b), self.a, self.b)[:, None]

    def bounding_box(self):
        return np.array([self.a]), np.array([self.b])

    def to_dict(self):
        return {"kind": "Interval", "a": self.a, "b": self.b}


@dataclass(frozen=True, eq=False)
class Box(ConvexDomain):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = as_point(self.lo), as_point(self.hi)
        if lo.size != hi.size:
            raise ValueError("Box corners differ in dimension")
        if not np.all(lo < hi):
            raise ValueError("Box needs lo < hi in every coordinate")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    @property
    def _slack(self):
        return MEMBER_RTOL * max(1.0, float(np.max(np.abs(self.lo))), float(np.max(np.abs(self.hi))))

    def contains(self, X):
        X = self._check(X)
        s = self._slack
        return np.all((X >= self.lo - s) & (X <= self.hi + s), axis=1)

    def is_inside(self, X):
        X = self._check(X)
        return np.all((X > self.lo) & (X < self.hi), axis=1)

    def boundary_distance(self, X):
        X = self._check(X)
        inside = np.all((X >= self.lo) & (X <= self.hi), axis=1)
        din = np.min(np.minimum(X - self.lo, self.hi - X), axis=1)
        excess = np.maximum(np.maximum(self.lo - X, X - self.hi), 0.0)
        dout = np.linalg.norm(excess, axis=1)
        return np.where(inside, din, dout)

    def sample(self, rng, region, m):
        region = Region(region)
        X = rng.uniform(self.lo, self.hi, (m, self.dim))
        if region is Region.BOUNDARY:
            face = rng.integers(0, self.dim, m)
            side = rng.random(m) < 0.5
            X[np.arange(m), face] = np.where(side, self.lo[face], self.hi[face])
        elif region is Region.INTERIOR:
            bad = self.boundary_distance(X) < CLASSIFY_TOL
            while np.any(bad):
                X[bad] = rng.uniform(self.lo, self.hi, (int(bad.sum()), self.dim))
                bad = self.boundary_distance(X) < CLASSIFY_TOL
        return X

    def project_to_boundary(self, X):
        X = self._check(X).copy()
        X = np.clip(X, self.lo, self.hi)
        gaps = np.concatenate([X - self.lo, self.hi - X], axis=1)
        j = np.argmin(gaps, axis=1)
        rows = np.arange(X.shape[0])
        coord = j % self.dim
        X[rows, coord] = np.where(j < self.dim, self.lo[coord], self.hi[coord])
        return X

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def to_dict(self):
        return {"kind": "Box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass(frozen=True, eq=False)
class ClosedBall(ConvexDomain):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError("ClosedBall needs a positive radius")

    @property
    def dim(self):
        return self.center.size

    def _norms(self, X):
        return np.linalg.norm(self._check(X) - self.center, axis=1)

    def contains(self, X):
        return self._norms(X) <= self.radius * (1.0 + MEMBER_RTOL)

    def is_inside(self, X):
        return self._norms(X) < self.radius

    def boundary_distance(self, X):
        return np.abs(self._norms(X) - self.radius)

    def sample(self, rng, region, m):
        region = Region(region)
        if region is Region.BOUNDARY:
            return self.center + self.radius * _unit_vectors(rng, m, self.dim)
        X = self.center + _ball_points(rng, m, self.dim, self.radius)
        if region is Region.INTERIOR:
            bad = self.boundary_distance(X) < CLASSIFY_TOL
            while np.any(bad):
                X[bad] = self.center + _ball_points(rng, int(bad.sum()), self.dim, self.radius)
                bad = self.boundary_distance(X) < CLASSIFY_TOL
        return X

    def project_to_boundary(self, X):
        X = self._check(X)
        d = X - self.center
        nrm = np.linalg.norm(d, axis=1, keepdims=True)
        unit = np.zeros_like(d)
        unit[:, 0] = 1.0
        d = np.where(nrm > 0, d / np.where(nrm > 0, nrm, 1.0), unit)
        return self.center + self.radius * d

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def to_dict(self):
        return {"kind": "ClosedBall", "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class LinearMap:
    """The affine map ``x -> A x + b`` with ``A`` invertible."""

    entries: np.ndarray
    offset: np.ndarray | None = None

    def __post_init__(self):
        A = np.array(self.entries, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise ValueError(f"A must be a square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("A must have finite entries")
        smin = np.linalg.svd(A, compute_uv=False)[-1]
        if not smin > 1e-12:
            raise ValueError(f"A is not invertible (smallest singular value {smin:.3e})")
        b = np.zeros(A.shape[0]) if self.offset is None else np.array(as_point(self.offset, A.shape[0]))
        A.setflags(write=False)
        b.setflags(write=False)
        inv = np.linalg.inv(A)
        inv.setflags(write=False)
        object.__setattr__(self, "entries", A)
        object.__setattr__(self, "offset", b)
        object.__setattr__(self, "_inverse", inv)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def inverse_matrix(self) -> np.ndarray:
        return self._inverse

    def forward(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(X) @ self.entries.T + self.offset

    def backward(self, Z: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(Z) - self.offset) @ self._inverse.T

    def to_dict(self) -> dict:
        return {"A": self.entries.tolist(), "b": self.offset.tolist()}


@dataclass(frozen=True, eq=False)
class AffineImage(ConvexDomain):
    """The set ``A(inner) + b``."""

    map: LinearMap
    inner: ConvexDomain

    def __post_init__(self):
        if self.map.dim != self.inner.dim:
            raise ValueError("map and inner domain differ in dimension")

    @property
    def dim(self):
        return self.inner.dim

    @property
    def bounded(self):
        return self.inner.bounded

    def contains(self, X):
        return self.inner.contains(self.map.backward(self._check(X)))

    def is_inside(self, X):
        return self.inner.is_inside(self.map.backward(self._check(X)))

    def boundary_distance(self, X):
        # measured in pre-image coordinates
        return self.inner.boundary_distance(self.map.backward(self._check(X)))

    def sample(self, rng, region, m):
        return self.map.forward(self.inner.sample(rng, region, m))

    def project_to_boundary(self, X):
        return self.map.forward(self.inner.project_to_boundary(self.map.backward(self._check(X))))

    def bounding_box(self):
        lo, hi = self.inner.bounding_box()
        corners = np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(self.dim, -1).T
        img = self.map.forward(corners)
        return img.min(axis=0), img.max(axis=0)

    def to_dict(self):
        return {"kind": "AffineImage", **self.map.to_dict(), "inner": self.inner.to_dict()}


def classify(domain: ConvexDomain, x, tol: float = CLASSIFY_TOL) -> PointClass:
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = as_point(x, domain.dim)
    tags, dist = domain.classify_many(x[None, :], tol)
    return PointClass([PointTag.INTERIOR, PointTag.BOUNDARY, PointTag.OUTSIDE][int(tags[0])], float(dist[0]))


def sample_point(domain: ConvexDomain, region: Region | str, rng: np.random.Generator) -> np.ndarray:
    return as_point(domain.sample(rng, Region(region), 1)[0])


def min_modulus(map: LinearMap, tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Minimum modulus of ``A^{-1}``, i.e. ``1 / sigma_max(A)``.

    ``sigma_max(A)^2`` is the top eigenvalue of ``A^T A``, found by power
    iteration with Rayleigh-quotient estimates; iteration stops once
    consecutive estimates agree to relative ``tol``.
    """
    A = map.entries
    G = A.T @ A
    v = np.random.default_rng(0x5EED).standard_normal(A.shape[0])
    v /= np.linalg.norm(v)
    lam = float(v @ G @ v)
    for _ in range(max_iter):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            raise ArithmeticError("power iteration collapsed to the zero vector")
        v = w / nw
        lam_next = float(v @ G @ v)
        if abs(lam_next - lam) <= tol * lam_next:
            return 1.0 / math.sqrt(lam_next)
        lam = lam_next
    raise ArithmeticError(f"power iteration did not converge in {max_iter} steps")


@dataclass(frozen=True)
class TripleSample:
    x: np.ndarray
    y: np.ndarray
    t: float

    def to_dict(self) -> dict:
        return {"x": [float(v) for v in self.x], "y": [float(v) for v in self.y], "t": float(self.t)}


@dataclass(frozen=True)
class TripleBlock:
    """A contiguous run of triples; ``start`` is the global index of row 0."""

    start: int
    X: np.ndarray
    Y: np.ndarray
    T: np.ndarray

    def __len__(self) -> int:
        return self.T.shape[0]

    def __iter__(self) -> Iterator[TripleSample]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> TripleSample:
        return TripleSample(self.X[i].copy(), self.Y[i].copy(), float(self.T[i]))

    @property
    def Z(self) -> np.ndarray:
        t = self.T[:, None]
        return (1.0 - t) * self.X + t * self.Y


def _stratified_t(rng: np.random.Generator, idx: np.ndarray) -> np.ndarray:
    T = rng.uniform(T_LOW, T_HIGH, idx.size)
    T = np.clip(T, np.nextafter(T_LOW, 1.0), np.nextafter(T_HIGH, 0.0))
    phase = idx % 100
    T[phase == 0] = 0.5
    T[phase == 1] = 0.1
    T[phase == 2] = 0.9
    return T


def _draw_until(draw, ok, m: int, what: str) -> np.ndarray:
    """Draw ``m`` rows with ``draw(k)``, redrawing rows that fail ``ok``."""
    out = draw(m)
    bad = ~ok(out)
    rounds = 0
    while np.any(bad):
        rows = np.flatnonzero(bad)
        out[rows] = draw(rows.size)
        bad[rows] = ~ok(out[rows])
        rounds += 1
        if rounds > _MAX_REJECTION_ROUNDS:
            raise ValueError(f"could not sample {what}; the domain interior may be empty "
                             "or the stress set misses the domain")
    return out


def _near_locus(rng, domain, locus, m: int) -> np.ndarray:
    """Points within ``STRESS_RADIUS`` of ``locus``; one third exactly on it."""

    def draw(k):
        P = locus.sample_support(rng, k)
        jitter = _ball_points(rng, k, domain.dim, STRESS_RADIUS)
        exact = rng.random(k) < 1.0 / 3.0
        jitter[exact] = 0.0
        return P + jitter

    return _draw_until(draw, domain.contains, m, f"near {locus.kind}")


def _generate_block(domain: ConvexDomain, stress_sets: Sequence, min_pair_distance: float,
                    seed: RngSeed, block: int) -> TripleBlock:
    rng = seed.generator(0xB10C, block)
    m = BLOCK_SIZE
    idx = block * m + np.arange(m)
    T = _stratified_t(rng, idx)
    n = domain.dim

    def anywhere(k):
        return domain.sample(rng, Region.ANYWHERE, k)

    X = anywhere(m)
    Y = anywhere(m)
    if domain.bounded:
        on_bd = rng.random(m) < 0.1
        if np.any(on_bd):
            X[on_bd] = domain.sample(rng, Region.BOUNDARY, int(on_bd.sum()))

    if stress_sets:
        stressed = idx % 10 < 4
        mode = rng.integers(0, 4, m)
        which = rng.integers(0, len(stress_sets), m)
        for j, locus in enumerate(stress_sets):
            for md in range(4):
                rows = np.flatnonzero(stressed & (which == j) & (mode == md))
                if rows.size == 0:
                    continue
                k = rows.size
                if md == 0:
                    X[rows] = _near_locus(rng, domain, locus, k)
                elif md == 1:
                    Y[rows] = _near_locus(rng, domain, locus, k)
                elif md == 2:
                    X[rows] = _near_locus(rng, domain, locus, k)
                    Y[rows] = _near_locus(rng, domain, locus, k)
                else:
                    t = T[rows][:, None]
                    Zs = _near_locus(rng, domain, locus, k)
                    scale = domain.diameter
                    lengths = rng.uniform(min_pair_distance, scale, (k, 1))
                    V = lengths * _unit_vectors(rng, k, n)
                    Xs, Ys = Zs - t * V, Zs + (1.0 - t) * V
                    bad = ~(domain.contains(Xs) & domain.contains(Ys))
                    rounds = 0
                    while np.any(bad) and rounds < _MAX_REJECTION_ROUNDS:
                        r = np.flatnonzero(bad)
                        # shrink rejected chords so they fit inside bounded domains
                        lengths[r] *= 0.5
                        V[r] = lengths[r] * _unit_vectors(rng, r.size, n)
                        Xs[r], Ys[r] = Zs[r] - t[r] * V[r], Zs[r] + (1.0 - t[r]) * V[r]
                        bad[r] = ~(domain.contains(Xs[r]) & domain.contains(Ys[r]))
                        rounds += 1
                    if np.any(bad):
                        raise ValueError(f"could not place a chord through {locus.kind}")
                    X[rows], Y[rows] = Xs, Ys

    close = np.linalg.norm(X - Y, axis=1) < min_pair_distance
    rounds = 0
    while np.any(close):
        rows = np.flatnonzero(close)
        Y[rows] = anywhere(rows.size)
        close[rows] = np.linalg.norm(X[rows] - Y[rows], axis=1) < min_pair_distance
        rounds += 1
        if rounds > _MAX_REJECTION_ROUNDS:
            raise ValueError("could not separate sample pairs; the domain may be degenerate")
    return TripleBlock(int(idx[0]), X, Y, T)


def iter_triple_blocks(domain: ConvexDomain, count: int, stress_sets: Sequence = (),
                       min_pair_distance: float = 1e-6, seed: RngSeed | int = 0) -> Iterator[TripleBlock]:
    """Yield the first ``count`` triples of the stream in blocks.

    Block ``k`` depends only on ``(seed, k)``, so a longer run is an
    extension of a shorter one with the same seed.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    seed = seed if isinstance(seed, RngSeed) else RngSeed(seed)
    stress_sets = tuple(stress_sets)
    for s in stress_sets:
        if s.dim != domain.dim:
            raise ValueError("stress set dimension does not match the domain")
    nblocks = -(-count // BLOCK_SIZE)
    for b in range(nblocks):
        blk = _generate_block(domain, stress_sets, min_pair_distance, seed, b)
        take = min(BLOCK_SIZE, count - b * BLOCK_SIZE)
        if take < BLOCK_SIZE:
            blk = TripleBlock(blk.start, blk.X[:take], blk.Y[:take], blk.T[:take])
        yield blk


def sample_triples(domain: ConvexDomain, count: int, stress_sets: Sequence = (),
                   min_pair_distance: float = 1e-6, seed: RngSeed | int = 0) -> TripleBlock:
    """All ``count`` triples as one :class:`TripleBlock`."""
    blocks = list(iter_triple_blocks(domain, count, stress_sets, min_pair_distance, seed))
    return TripleBlock(0, np.concatenate([b.X for b in blocks]), np.concatenate([b.Y for b in blocks]),
                       np.concatenate([b.T for b in blocks]))
