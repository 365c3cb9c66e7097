"""Discontinuous constructions on R^n (n >= 2) built around the squared norm."""

from __future__ import annotations

import enum

import numpy as np

from ..geometry import ClosedBall, FullSpace, Region, classify
from ..loci import SHELL_RTOL, BoundarySubset, PartitionPredicate, SinglePoint, Sphere, lsb_parity
from .base import Classification, DiscontinuityRecord, SqcFunction, tags_for
from .classic import _sqnorm, quadratic_norm

__all__ = [
    "ClosureSide",
    "boundary_perturbation",
    "point_drop",
    "radial_jump",
    "radial_split",
    "check_radially_monotone",
]

_SPOT_CHECKS = 1000


class ClosureSide(str, enum.Enum):
    """Which side of the sphere keeps the base value."""

    LOWER_CLOSED = "lower"  # base on |x| <= rho
    UPPER_CLOSED = "upper"  # base on |x| < rho


def _require_multivariate(n: int) -> None:
    if n < 2:
        raise ValueError("this construction needs n >= 2")


def boundary_perturbation(n: int, alpha: float, predicate: PartitionPredicate = lsb_parity) -> SqcFunction:
    """``|x|^2`` on the closed unit ball, plus ``alpha`` on the boundary points picked by ``predicate``."""
    _require_multivariate(n)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    C = ClosedBall(np.zeros(n), 1.0)
    edge = 1.0 - SHELL_RTOL

    def kernel(X, want_tags):
        r2 = _sqnorm(X)
        lifted = (np.sqrt(r2) >= edge) & predicate(X)
        v = r2 + alpha * lifted
        tags = tags_for({"boundary_perturbation:lifted": lifted}, r2.size, "boundary_perturbation:base") if want_tags else None
        return v, tags

    records = (
        DiscontinuityRecord(BoundarySubset(C, predicate, True), Classification.USC_NOT_LSC, alpha,
                            note="lifted part of the boundary"),
        DiscontinuityRecord(BoundarySubset(C, predicate, False), Classification.LSC_NOT_USC, alpha,
                            note="unlifted boundary; density of the lifted part is declared, not tested"),
    )
    return SqcFunction(
        name="boundary_perturbation",
        label=f"squared norm on the unit ball, boundary subset lifted by {alpha}",
        domain=C,
        kernel=kernel,
        claimed_modulus=2.0,
        discontinuities=records,
        params={"n": n, "alpha": alpha, "predicate": predicate.id},
    )


def point_drop(f0: SqcFunction, gamma: float | None = None, c=None, alpha: float = 1.0) -> SqcFunction:
    """Lower ``f0`` by ``alpha`` at its interior global minimiser ``c`` only."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    gamma = f0.claimed_modulus if gamma is None else gamma
    c = np.zeros(f0.dim) if c is None else np.asarray(c, dtype=float).reshape(-1)
    if c.size != f0.dim:
        raise ValueError("c has the wrong dimension")
    if classify(f0.domain, c).tag.value != "Interior":
        raise ValueError(f"c = {c.tolist()} is not an interior point of the domain")
    fc = float(f0.values(c[None, :])[0])
    rng = np.random.default_rng(0xD509)
    probe = f0.domain.sample(rng, Region.ANYWHERE, _SPOT_CHECKS)
    if np.any(f0.values(probe) < fc - 1e-12 * max(1.0, abs(fc))):
        raise ValueError(f"c = {c.tolist()} is not a global minimiser of {f0.name}")
    c_row = c.copy()

    def kernel(X, want_tags):
        v = f0.values(X)
        hit = np.all(X == c_row, axis=1)
        v[hit] = fc - alpha
        tags = tags_for({"point_drop:dropped": hit}, v.size, "point_drop:base") if want_tags else None
        return v, tags

    notes = ()
    if f0.name != "quadratic_norm":
        notes = ("modulus inherited from the base; confirm numerically",)
    return SqcFunction(
        name="point_drop",
        label=f"{f0.label}, value at the minimiser lowered by {alpha}",
        domain=f0.domain,
        kernel=kernel,
        claimed_modulus=gamma,
        discontinuities=(DiscontinuityRecord(SinglePoint(c), Classification.LSC_NOT_USC, alpha),),
        params={"base": f0.name, "n": f0.dim, "c": c.tolist(), "alpha": alpha},
        notes=notes,
    )


def check_radially_monotone(base: SqcFunction, radius: float, checks: int = _SPOT_CHECKS) -> None:
    """Spot-check ``|x| <= |y|  =>  base(x) <= base(y)`` on random pairs."""
    rng = np.random.default_rng(0x4AD1)
    dom = FullSpace(base.dim, sampling_radius=radius)
    P = dom.sample(rng, Region.ANYWHERE, 2 * checks)
    X, Y = P[:checks], P[checks:]
    nx, ny = np.linalg.norm(X, axis=1), np.linalg.norm(Y, axis=1)
    swap = nx > ny
    X[swap], Y[swap] = Y[swap].copy(), X[swap].copy()
    fx, fy = base.values(X), base.values(Y)
    if np.any(fx > fy + 1e-12 * np.maximum(1.0, np.abs(fy))):
        raise ValueError(f"{base.name} is not radially nondecreasing")


def _radial_base(n: int, base: SqcFunction | None, rho: float) -> SqcFunction:
    base = quadratic_norm(n) if base is None else base
    if not isinstance(base.domain, FullSpace) or base.dim != n:
        raise ValueError("the base must be defined on all of R^n")
    check_radially_monotone(base, max(3.0, 2.0 * rho))
    return base


def radial_jump(n: int, rho: float = 1.0, beta: float = 1.0, closure_side: ClosureSide | str = "lower",
                base: SqcFunction | None = None) -> SqcFunction:
    """``base`` inside the sphere of radius ``rho``, ``base + beta`` outside.

    ``closure_side`` decides which value the sphere itself takes: ``lower``
    keeps the base value (lower semicontinuous), ``upper`` takes the lifted
    value (upper semicontinuous).
    """
    _require_multivariate(n)
    if not (rho > 0 and beta > 0):
        raise ValueError("rho and beta must be positive")
    side = ClosureSide(closure_side)
    base = _radial_base(n, base, rho)
    lower = side is ClosureSide.LOWER_CLOSED
    cut = rho * (1.0 + SHELL_RTOL) if lower else rho * (1.0 - SHELL_RTOL)

    def kernel(X, want_tags):
        r = np.sqrt(_sqnorm(X))
        outer = r > cut if lower else r >= cut
        v = base.values(X) + beta * outer
        tags = tags_for({"radial_jump:outer": outer}, r.size, "radial_jump:inner") if want_tags else None
        return v, tags

    cls = Classification.LSC_NOT_USC if lower else Classification.USC_NOT_LSC
    return SqcFunction(
        name="radial_jump",
        label=f"{base.label}, plus {beta} {'outside' if lower else 'on and outside'} the sphere of radius {rho}",
        domain=FullSpace(n, sampling_radius=max(3.0, 3.0 * rho)),
        kernel=kernel,
        claimed_modulus=base.claimed_modulus,
        discontinuities=(DiscontinuityRecord(Sphere(rho, np.zeros(n)), cls, beta),),
        params={"n": n, "rho": rho, "beta": beta, "variant": side.value, "base": base.name},
        notes=base.notes,
    )


def radial_split(n: int, rho: float = 1.0, beta: float = 1.0, partition: PartitionPredicate = lsb_parity,
                 base: SqcFunction | None = None) -> SqcFunction:
    """``base`` on the open ball and on the sphere points where ``partition`` holds;
    ``base + beta`` on the open exterior and the remaining sphere points."""
    _require_multivariate(n)
    if not (rho > 0 and beta > 0):
        raise ValueError("rho and beta must be positive")
    base = _radial_base(n, base, rho)
    lo, hi = rho * (1.0 - SHELL_RTOL), rho * (1.0 + SHELL_RTOL)

    def kernel(X, want_tags):
        r = np.sqrt(_sqnorm(X))
        on_sphere = (r >= lo) & (r <= hi)
        keep = np.where(on_sphere, partition(X), r < lo)
        v = base.values(X) + beta * ~keep
        tags = None
        if want_tags:
            tags = tags_for({
                "radial_split:outer": ~on_sphere & ~keep,
                "radial_split:sphere_kept": on_sphere & keep,
                "radial_split:sphere_lifted": on_sphere & ~keep,
            }, r.size, "radial_split:inner")
        return v, tags

    zero = np.zeros(n)
    records = (
        DiscontinuityRecord(Sphere(rho, zero, partition, True), Classification.LSC_NOT_USC, beta,
                            note="sphere points keeping the base value"),
        DiscontinuityRecord(Sphere(rho, zero, partition, False), Classification.USC_NOT_LSC, beta,
                            note="sphere points taking the lifted value"),
    )
    return SqcFunction(
        name="radial_split",
        label=f"{base.label}, sphere of radius {rho} split between base and base + {beta}",
        domain=FullSpace(n, sampling_radius=max(3.0, 3.0 * rho)),
        kernel=kernel,
        claimed_modulus=base.claimed_modulus,
        discontinuities=records,
        params={"n": n, "rho": rho, "beta": beta, "partition": partition.id, "base": base.name},
        notes=base.notes,
    )
