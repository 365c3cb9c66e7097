"""Structural consequences of strong quasiconvexity: one minimizer, quadratic growth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import RngSeed
from ..gallery.base import SqcFunction
from ..geometry import ConvexDomain, Region, _unit_vectors

__all__ = ["MinimizerCluster", "pattern_search", "unique_min_check", "supercoercivity_probe", "CLUSTER_RADIUS"]

CLUSTER_RADIUS = 1e-4
MIN_STEP = 1e-8
SNAP_DIGITS = range(9)


@dataclass(frozen=True)
class MinimizerCluster:
    point: np.ndarray
    value: float
    members: int

    def to_dict(self) -> dict:
        return {"point": [float(v) for v in self.point], "value": self.value, "members": self.members}


def _restricted(f: SqcFunction, domain: ConvexDomain):
    def g(X):
        v = f.values(X)
        v[~domain.contains(X)] = np.inf
        return v

    return g


def pattern_search(g, X0: np.ndarray, step: float, min_step: float = MIN_STEP) -> tuple[np.ndarray, np.ndarray]:
    """Compass search run on every row of ``X0`` at once.

    Each round polls ``x +- s e_i`` and moves to the best strictly better
    poll point; when none improves, ``s`` is halved, down to ``min_step``.
    A final pass tries the point rounded to 0..8 decimals and keeps it when
    strictly better, which catches isolated lowered values at simple
    coordinates that a poll never lands on exactly.
    """
    X = np.array(X0, dtype=float)
    m, n = X.shape
    fx = g(X)
    s = np.full(m, float(step))
    E = np.vstack([np.eye(n), -np.eye(n)])
    active = s >= min_step
    while np.any(active):
        rows = np.flatnonzero(active)
        P = X[rows, None, :] + s[rows, None, None] * E[None, :, :]
        fp = g(P.reshape(-1, n)).reshape(rows.size, 2 * n)
        j = np.argmin(fp, axis=1)
        best = fp[np.arange(rows.size), j]
        better = best < fx[rows]
        mv = rows[better]
        X[mv] = P[better, j[better]]
        fx[mv] = best[better]
        stay = rows[~better]
        s[stay] *= 0.5
        active = s >= min_step
    for d in SNAP_DIGITS:
        R = np.round(X, d)
        fr = g(R)
        better = fr < fx
        X[better], fx[better] = R[better], fr[better]
    return X, fx


def _cluster(X: np.ndarray, fx: np.ndarray, radius: float) -> list[MinimizerCluster]:
    order = np.argsort(fx, kind="stable")
    reps: list[list] = []
    for i in order:
        for c in reps:
            if np.linalg.norm(X[i] - c[0]) <= radius:
                c[2] += 1
                break
        else:
            reps.append([X[i], float(fx[i]), 1])
    return [MinimizerCluster(p, v, k) for p, v, k in reps]


def unique_min_check(f: SqcFunction, domain: ConvexDomain | None = None, starts: int = 64,
                     seed: int = 0) -> list[MinimizerCluster]:
    """Multistart pattern search over ``domain`` (default: the domain of ``f``).

    Terminal points are grouped into clusters of radius ``1e-4``; the result
    is sorted by value. A strongly quasiconvex function should give one
    cluster.
    """
    domain = f.domain if domain is None else domain
    if not domain.bounded:
        raise ValueError("unique_min_check needs a bounded search domain")
    if domain.dim != f.dim:
        raise ValueError("search domain and function have different dimensions")
    if starts < 1:
        raise ValueError("starts must be positive")
    g = _restricted(f, domain)
    rng = RngSeed(seed).generator(0x3141)
    X0 = domain.sample(rng, Region.INTERIOR, starts)
    bad = ~np.isfinite(g(X0))
    rounds = 0
    while np.any(bad):
        X0[bad] = domain.sample(rng, Region.INTERIOR, int(bad.sum()))
        bad = ~np.isfinite(g(X0))
        rounds += 1
        if rounds > 100:
            raise ValueError(f"{f.name} is not finite on the search domain")
    X, fx = pattern_search(g, X0, 0.1 * domain.diameter)
    return _cluster(X, fx, CLUSTER_RADIUS)


def supercoercivity_probe(f: SqcFunction, directions: int = 64, radii=(1.0, 10.0, 100.0, 1000.0),
                          seed: int = 0) -> float:
    """``min f(r d) / r^2`` over random unit ``d`` and the two largest radii."""
    if f.domain.bounded:
        raise ValueError("supercoercivity needs a function on the full space")
    radii = sorted(float(r) for r in radii)
    if len(radii) < 2 or radii[0] <= 0:
        raise ValueError("need at least two positive radii")
    if directions < 1:
        raise ValueError("directions must be positive")
    D = _unit_vectors(RngSeed(seed).generator(0x5C), directions, f.dim)
    return float(min(np.min(f.values(r * D)) / r ** 2 for r in radii[-2:]))
