"""Continuous building blocks: the squared norm and max{|x|^(1/2), |x|^2 - k}."""

from __future__ import annotations

import numpy as np

from ..geometry import FullSpace
from .base import SqcFunction


def _sqnorm(X: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", X, X)


def quadratic_norm(n: int) -> SqcFunction:
    """``f(x) = |x|^2`` on R^n, strongly convex with modulus 2."""
    if n < 1:
        raise ValueError("n must be at least 1")

    def kernel(X, want_tags):
        v = _sqnorm(X)
        return v, (np.full(v.size, "quadratic", dtype=object) if want_tags else None)

    return SqcFunction(
        name="quadratic_norm",
        label="squared Euclidean norm",
        domain=FullSpace(n),
        kernel=kernel,
        claimed_modulus=2.0,
        params={"n": n},
    )


def max_root_quadratic(n: int, k: int = 1) -> SqcFunction:
    """``f(x) = max{|x|^(1/2), |x|^2 - k}``: quasiconvex in the strong sense, not convex.

    No modulus is known in closed form; use
    :func:`sqc_lab.verify.modulus_estimate` for an empirical value.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    k = int(k)

    def kernel(X, want_tags):
        r2 = _sqnorm(X)
        root = np.sqrt(np.sqrt(r2))
        outer = r2 - k
        v = np.maximum(root, outer)
        tags = np.where(outer > root, "quadratic_branch", "root_branch").astype(object) if want_tags else None
        return v, tags

    return SqcFunction(
        name="max_root_quadratic",
        label=f"max of root norm and squared norm minus {k}",
        domain=FullSpace(n),
        kernel=kernel,
        claimed_modulus=None,
        params={"n": n, "k": k},
        notes=("modulus not known in closed form; estimate is empirical only",),
    )
