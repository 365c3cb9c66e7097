"""Functions that are *not* strongly quasiconvex, used to show the checks can fail."""

from __future__ import annotations

import numpy as np

from ..geometry import ConvexDomain, FullSpace
from .base import SqcFunction
from .classic import _sqnorm


def constant(n: int = 2, value: float = 5.0, domain: ConvexDomain | None = None) -> SqcFunction:
    """``f = value`` on ``domain`` (default the full space): quasiconvex but never strongly so."""
    domain = FullSpace(n) if domain is None else domain

    def kernel(X, want_tags):
        v = np.full(X.shape[0], float(value))
        return v, (np.full(v.size, "constant", dtype=object) if want_tags else None)

    return SqcFunction(name=f"constant{value:g}", label=f"constant {value:g}", domain=domain,
                       kernel=kernel, params={"n": domain.dim, "value": value}, fixture=True)


def neg_quadratic(n: int = 2) -> SqcFunction:
    """``-|x|^2``: quasiconcave, so the SQC inequality fails on most triples."""

    def kernel(X, want_tags):
        v = -_sqnorm(X)
        return v, (np.full(v.size, "neg_quadratic", dtype=object) if want_tags else None)

    return SqcFunction(name="neg_quadratic", label="negative squared norm", domain=FullSpace(n),
                       kernel=kernel, params={"n": n}, fixture=True)
