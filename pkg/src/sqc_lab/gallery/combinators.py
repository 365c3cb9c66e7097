"""Operations producing new functions from old ones: restriction and affine pullback."""

from __future__ import annotations

import numpy as np

from ..geometry import AffineImage, ConvexDomain, LinearMap, Region, min_modulus
from ..loci import MappedLocus, RestrictedLocus
from .base import DiscontinuityRecord, SqcFunction

__all__ = ["restrict", "affine_pullback"]

_SUBSET_CHECKS = 1000


def restrict(f: SqcFunction, C: ConvexDomain, name: str | None = None) -> SqcFunction:
    """``f`` on ``C`` and ``+inf`` off ``C``.

    ``C`` must sit inside the domain of ``f`` (checked on sampled points).
    Only the discontinuity records whose locus meets the interior of ``C``
    survive, cut down to that interior.
    """
    if C.dim != f.dim:
        raise ValueError("C and f differ in dimension")
    rng = np.random.default_rng(0xC0DE)
    pts = C.sample(rng, Region.ANYWHERE, _SUBSET_CHECKS)
    if C.bounded:
        pts = np.concatenate([pts, C.sample(rng, Region.BOUNDARY, _SUBSET_CHECKS // 10)])
    if not np.all(np.isfinite(f.values(pts))):
        raise ValueError(f"C is not contained in the domain of {f.name}")

    def kernel(X, want_tags):
        return f.evaluate(X, want_tags)

    records = []
    for r in f.discontinuities:
        loc = RestrictedLocus(r.locus, C)
        if loc.meets_interior(rng):
            records.append(DiscontinuityRecord(loc, r.classification, r.jump_size, r.jump_fn, r.note))
    return SqcFunction(
        name=name or f"restricted_{f.name}",
        label=f"{f.label}, restricted to a bounded convex set",
        domain=C,
        kernel=kernel,
        claimed_modulus=f.claimed_modulus,
        discontinuities=tuple(records),
        params={**f.params, "base": f.name, "C": C.to_dict()},
        notes=f.notes,
    )


def affine_pullback(f: SqcFunction, map: LinearMap) -> SqcFunction:
    """``g(z) = f(A^{-1}(z - b))`` on ``A(dom f) + b``.

    The modulus becomes ``gamma * beta^2`` with ``beta = 1 / sigma_max(A)``.
    """
    if map.dim != f.dim:
        raise ValueError("map and f differ in dimension")
    if f.claimed_modulus is None:
        raise ValueError(f"{f.name} has no known modulus to transport")
    beta = min_modulus(map)

    def kernel(Z, want_tags):
        return f.evaluate(map.backward(Z), want_tags)

    records = []
    for r in f.discontinuities:
        jump_fn = None
        if r.jump_fn is not None:
            inner_fn = r.jump_fn

            def jump_fn(p, inner_fn=inner_fn):
                return inner_fn(map.backward(p[None, :])[0])

        records.append(DiscontinuityRecord(MappedLocus(r.locus, map), r.classification, r.jump_size,
                                           jump_fn, r.note))
    return SqcFunction(
        name="affine_pullback",
        label=f"{f.label}, pulled back through an invertible affine map",
        domain=AffineImage(map, f.domain),
        kernel=kernel,
        claimed_modulus=f.claimed_modulus * beta**2,
        discontinuities=tuple(records),
        params={"inner": f.name, "inner_params": f.params, **map.to_dict(), "min_modulus": beta},
        notes=f.notes,
    )
