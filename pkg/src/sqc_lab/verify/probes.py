"""Numerical semicontinuity probes and jump measurements.

A probe looks at ``f`` on concentric shells around ``p`` (intersected with
the domain, so semicontinuity is relative to ``dom f``), adds the nearest
points of any declared discontinuity locus, and estimates the lower and
upper limits at ``p`` from the two innermost shells.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core import RngSeed, as_point, to_extended
from ..gallery.base import Classification, SqcFunction, point_locus_members
from ..geometry import _unit_vectors
from ..loci import CountableSet, IntervalEndpoints, Locus, MappedLocus, RestrictedLocus, SinglePoint, Sphere
from .report import ContinuityProbeResult

__all__ = [
    "DEFAULT_RADII",
    "classify_limits",
    "continuity_probe",
    "jump_witness",
    "sphere_points",
    "locus_points",
    "parse_probe_spec",
]

DEFAULT_RADII = tuple(10.0 ** -k for k in range(1, 7))
# Relative decision margin; a one-sided gap must exceed GAP_FACTOR * tau.
PROBE_RTOL = 1e-6
GAP_FACTOR = 10.0


def classify_limits(fp: float, liminf: float, limsup: float) -> Classification:
    """Decision table comparing the estimated limits with ``f(p)``."""
    tau = PROBE_RTOL * max(1.0, abs(fp))
    if abs(liminf - fp) <= tau and abs(limsup - fp) <= tau:
        return Classification.CONTINUOUS
    low_gap = liminf < fp - GAP_FACTOR * tau
    high_gap = limsup > fp + GAP_FACTOR * tau
    if liminf >= fp - tau and high_gap:
        return Classification.LSC_NOT_USC
    if limsup <= fp + tau and low_gap:
        return Classification.USC_NOT_LSC
    if low_gap and high_gap:
        return Classification.NEITHER
    return Classification.INCONCLUSIVE


def _directions(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    if n == 1:
        return np.where(np.arange(m) % 2 == 0, 1.0, -1.0)[:, None]
    return _unit_vectors(rng, m, n)


def _projectable(f: SqcFunction) -> list[Locus]:
    return [r.locus for r in f.discontinuities if r.locus.project(np.zeros((1, f.dim))) is not None]


def _shell_values(f: SqcFunction, p: np.ndarray, r: float, dirs: np.ndarray, loci: list[Locus]) -> np.ndarray:
    """Finite values of ``f`` on the shell of radius ``r`` and on nearby locus points."""
    pts = p + r * dirs
    parts = [pts]
    for locus in loci:
        q = locus.project(pts)
        near = np.linalg.norm(q - p, axis=1) <= 2.0 * r
        if np.any(near):
            parts.append(q[near])
    v = f.values(np.vstack(parts))
    return v[np.isfinite(v)]


def _limit(radii: list[float], values: list[float]) -> float:
    """Linear extrapolation to radius 0 from the two innermost shells.

    Shell extremes of a function that is smooth on each side of the jump move
    linearly in the radius, so this removes the first-order drift that a
    plain minimum over the innermost shell would keep.
    """
    if len(radii) == 1:
        return values[0]
    r1, r2 = radii[-2], radii[-1]
    m1, m2 = values[-2], values[-1]
    return (r1 * m2 - r2 * m1) / (r1 - r2)


def continuity_probe(f: SqcFunction, p, radii: Sequence[float] = DEFAULT_RADII, samples_per_shell: int = 64,
                     seed: int = 0) -> ContinuityProbeResult:
    """Classify ``f`` at ``p`` as continuous, lsc only, usc only, neither, or inconclusive."""
    p = as_point(p, f.dim)
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    if samples_per_shell < 1:
        raise ValueError("samples_per_shell must be positive")
    fp = float(f.values(p[None, :])[0])
    if not np.isfinite(fp):
        raise ValueError(f"probe point {p.tolist()} is outside the domain of {f.name}")
    dirs = _directions(RngSeed(seed).generator(0x9B0BE), samples_per_shell, f.dim)
    loci = _projectable(f)

    used, lows, highs = [], [], []
    for r in radii:
        v = _shell_values(f, p, r, dirs, loci)
        if v.size:
            used.append(r)
            lows.append(float(v.min()))
            highs.append(float(v.max()))
    declared = f.declared_classification(p)
    if not used:
        return ContinuityProbeResult(p, to_extended(fp), np.nan, np.nan, (), Classification.INCONCLUSIVE, declared)
    lo = _limit(used, lows)
    hi = _limit(used, highs)
    lo, hi = min(lo, hi), max(lo, hi)
    return ContinuityProbeResult(p, to_extended(fp), lo, hi, tuple(used), classify_limits(fp, lo, hi), declared)


def jump_witness(f: SqcFunction, p, radius: float = 1e-5, samples: int = 64, seed: int = 0) -> float:
    """Observed oscillation ``sup - inf`` of ``f`` over ``{p}``, a shell and a ball of ``radius``."""
    p = as_point(p, f.dim)
    if not radius > 0:
        raise ValueError("radius must be positive")
    rng = RngSeed(seed).generator(0x1A3F)
    dirs = _directions(rng, samples, f.dim)
    inner = dirs * rng.random((samples, 1))
    loci = _projectable(f)
    v = np.concatenate([
        f.values(p[None, :]),
        _shell_values(f, p, radius, dirs, loci),
        _shell_values(f, p, radius, inner, loci),
    ])
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise ValueError(f"no finite values of {f.name} near {p.tolist()}")
    return float(v.max() - v.min())


def _sphere_of(locus: Locus) -> tuple[Sphere, object] | None:
    """The underlying sphere of a locus and the map carrying it into place."""
    if isinstance(locus, Sphere):
        return locus, None
    if isinstance(locus, RestrictedLocus):
        return _sphere_of(locus.inner)
    if isinstance(locus, MappedLocus):
        found = _sphere_of(locus.inner)
        if found is not None and found[1] is None:
            return found[0], locus.map
    return None


def _equidistributed(k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.where(np.arange(k) % 2 == 0, 1.0, -1.0)[:, None]
    if n == 2:
        th = 2.0 * np.pi * np.arange(k) / k
        return np.column_stack([np.cos(th), np.sin(th)])
    if n == 3:
        # Fibonacci lattice
        i = np.arange(k) + 0.5
        z = 1.0 - 2.0 * i / k
        phi = np.pi * (1.0 + 5 ** 0.5) * i
        s = np.sqrt(1.0 - z * z)
        return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    return _unit_vectors(rng, k, n)


def sphere_points(f: SqcFunction, k: int, seed: int = 0) -> np.ndarray:
    """``k`` evenly spread points on the first spherical locus of ``f``."""
    if k < 1:
        raise ValueError("k must be positive")
    for r in f.discontinuities:
        found = _sphere_of(r.locus)
        if found is None:
            continue
        sph, m = found
        pts = sph.center + sph.radius * _equidistributed(k, sph.dim, RngSeed(seed).generator(0x5F3))
        if m is not None:
            pts = m.forward(pts)
        pts = pts[f.domain.contains(pts)]
        if pts.shape[0] == 0:
            raise ValueError(f"the sphere of {f.name} does not meet its domain")
        return pts
    raise ValueError(f"{f.name} has no spherical discontinuity locus")


def locus_points(f: SqcFunction, k: int, seed: int = 0) -> np.ndarray:
    """Up to ``k`` points of every declared discontinuity locus of ``f``."""
    if k < 1:
        raise ValueError("k must be positive")
    if not f.discontinuities:
        raise ValueError(f"{f.name} declares no discontinuities")
    out = []
    for j, r in enumerate(f.discontinuities):
        if isinstance(r.locus, (SinglePoint, IntervalEndpoints, CountableSet)):
            out.append(point_locus_members(r.locus)[:k])
        else:
            out.append(r.locus.sample(RngSeed(seed).generator(0x10C, j), k))
    return np.vstack(out)


def parse_probe_spec(f: SqcFunction, spec: str, seed: int = 0) -> np.ndarray:
    """Probe points from ``"sphere:K"``, ``"locus:K"`` or comma separated coordinates."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    if kind in ("sphere", "locus") and arg:
        try:
            k = int(arg)
        except ValueError:
            raise ValueError(f"bad point count in {spec!r}") from None
        return sphere_points(f, k, seed) if kind == "sphere" else locus_points(f, k, seed)
    try:
        coords = [float(v) for v in spec.replace(" ", "").split(",")]
    except ValueError:
        raise ValueError(f"cannot parse probe point {spec!r}") from None
    if len(coords) != f.dim:
        raise ValueError(f"probe point has {len(coords)} coordinates, {f.name} is {f.dim}-D")
    p = np.array([coords])
    if not f.domain.contains(p)[0]:
        raise ValueError(f"probe point {coords} is outside the domain of {f.name}")
    return p
