"""Discontinuous constructions on an interval."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from ..geometry import Interval
from ..loci import CountableSet, IntervalEndpoints, SinglePoint
from .base import Classification, DiscontinuityRecord, SqcFunction, tags_for

__all__ = [
    "scan_maximum",
    "endpoint_jump",
    "interior_jump_lsc",
    "interior_jump_usc",
    "countable_jumps",
]

_SCAN_NODES = 1001
_MONOTONE_NODES = 1000


def _interval_of(f0: SqcFunction) -> Interval:
    if not isinstance(f0.domain, Interval):
        raise ValueError(f"{f0.name} must be defined on an interval, got {type(f0.domain).__name__}")
    return f0.domain


def _modulus(f0: SqcFunction, gamma: float | None) -> float | None:
    gamma = f0.claimed_modulus if gamma is None else gamma
    if gamma is not None and not gamma > 0:
        raise ValueError("gamma must be positive")
    return gamma


def _scalar(f0: SqcFunction, x: float) -> float:
    return float(f0.values(np.array([[x]]))[0])


def scan_maximum(f0: SqcFunction) -> float:
    """Maximum of a continuous ``f0`` over its interval.

    Grid scan over 1001 nodes, then a bounded Brent refinement around the
    best node down to ``xatol = 1e-10``.
    """
    iv = _interval_of(f0)
    xs = np.linspace(iv.a, iv.b, _SCAN_NODES)
    vals = f0.values(xs[:, None])
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"{f0.name} is not finite on its whole interval")
    i = int(np.argmax(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
    res = minimize_scalar(lambda x: -_scalar(f0, x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(max(vals[i], -res.fun))


def _require_increasing(f0: SqcFunction) -> None:
    iv = _interval_of(f0)
    xs = np.linspace(iv.a, iv.b, _MONOTONE_NODES)
    v = f0.values(xs[:, None])
    if not np.all(np.diff(v) > 0):
        raise ValueError(f"{f0.name} is not increasing on [{iv.a}, {iv.b}]")


def endpoint_jump(f0: SqcFunction, gamma: float | None = None, M: float | None = None) -> SqcFunction:
    """Lift both endpoint values of ``f0`` to ``M + 1``.

    ``M`` defaults to the scanned maximum of ``f0``; a user-supplied ``M``
    must not be below it.
    """
    iv = _interval_of(f0)
    gamma = _modulus(f0, gamma)
    scanned = scan_maximum(f0)
    if M is None:
        M = scanned
    elif M < scanned:
        raise ValueError(f"M = {M} is below the maximum of f0 ({scanned})")
    top = M + 1.0
    a, b = iv.a, iv.b

    def kernel(X, want_tags):
        x = X[:, 0]
        at_end = (x <= a) | (x >= b)
        v = f0.values(X)
        v[at_end] = top
        tags = tags_for({"endpoint_jump:endpoint": at_end}, x.size, "endpoint_jump:interior") if want_tags else None
        return v, tags

    fa, fb = _scalar(f0, a), _scalar(f0, b)
    jumps = {a: top - fa, b: top - fb}

    def jump_fn(p):
        return jumps[a] if abs(p[0] - a) <= abs(p[0] - b) else jumps[b]

    record = DiscontinuityRecord(IntervalEndpoints(a, b), Classification.USC_NOT_LSC,
                                 jump_size=min(jumps.values()), jump_fn=jump_fn)
    return SqcFunction(
        name="endpoint_jump",
        label=f"{f0.label}, endpoints lifted to max + 1",
        domain=iv,
        kernel=kernel,
        claimed_modulus=gamma,
        discontinuities=(record,),
        params={"base": f0.name, "a": a, "b": b, "M": M},
    )


def _interior_jump(f0, gamma, c, closed_lower: bool) -> SqcFunction:
    iv = _interval_of(f0)
    gamma = _modulus(f0, gamma)
    if not (iv.a < c < iv.b):
        raise ValueError(f"c = {c} must lie strictly inside ({iv.a}, {iv.b})")
    _require_increasing(f0)
    name = "interior_jump_lsc" if closed_lower else "interior_jump_usc"

    def kernel(X, want_tags):
        x = X[:, 0]
        lower = x <= c if closed_lower else x < c
        v = f0.values(X) - lower
        tags = tags_for({f"{name}:lower": lower}, x.size, f"{name}:upper") if want_tags else None
        return v, tags

    cls = Classification.LSC_NOT_USC if closed_lower else Classification.USC_NOT_LSC
    side = "[a, c]" if closed_lower else "[a, c)"
    return SqcFunction(
        name=name,
        label=f"{f0.label}, lowered by 1 on {side}",
        domain=iv,
        kernel=kernel,
        claimed_modulus=gamma,
        discontinuities=(DiscontinuityRecord(SinglePoint([c]), cls, 1.0),),
        params={"base": f0.name, "c": c},
    )


def interior_jump_lsc(f0: SqcFunction, gamma: float | None = None, c: float = 0.5) -> SqcFunction:
    """``f0 - 1`` on ``[a, c]`` and ``f0`` on ``(c, b]``; lower semicontinuous."""
    return _interior_jump(f0, gamma, c, closed_lower=True)


def interior_jump_usc(f0: SqcFunction, gamma: float | None = None, c: float = 0.5) -> SqcFunction:
    """``f0 - 1`` on ``[a, c)`` and ``f0`` on ``[c, b]``; upper semicontinuous."""
    return _interior_jump(f0, gamma, c, closed_lower=False)


_MAX_STEP = 2000


def step_index(x: np.ndarray) -> np.ndarray:
    """The ``k`` with ``1/(k+1) < x <= 1/k`` for ``x`` in ``(0, 1]``, as computed in floats."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        k = np.floor(np.minimum(1.0 / x, _MAX_STEP)).astype(np.int64)
    k = np.clip(k, 1, _MAX_STEP)
    # floor(1/x) can be off by one next to the break points 1/k
    k = np.where(x > 1.0 / k, k - 1, k)
    k = np.where((k < _MAX_STEP) & (x <= 1.0 / (k + 1)), k + 1, k)
    return np.clip(k, 1, _MAX_STEP)


def countable_jumps(f0: SqcFunction, gamma: float | None = None) -> SqcFunction:
    """Staircase ``f0 - 1 + 2^(1-k)`` on ``(1/(k+1), 1/k]``, and ``f0(0) - 1`` at 0.

    The function is lower semicontinuous, with jumps of ``2^(1-k)`` at every
    ``1/k``, ``k >= 2``. At ``x = 1`` it is continuous relative to ``[0, 1]``.
    """
    iv = _interval_of(f0)
    if (iv.a, iv.b) != (0.0, 1.0):
        raise ValueError("countable_jumps needs f0 on [0, 1]")
    gamma = _modulus(f0, gamma)
    _require_increasing(f0)

    def kernel(X, want_tags):
        x = X[:, 0]
        pos = x > 0
        k = np.ones(x.size, dtype=np.int64)
        if np.any(pos):
            k[pos] = step_index(np.minimum(x[pos], 1.0))
        lift = np.where(pos, np.ldexp(1.0, (1 - k).astype(np.int32)), 0.0)
        v = f0.values(X) - 1.0 + lift
        tags = None
        if want_tags:
            tags = np.array([f"countable_jumps:k={kk}" for kk in k], dtype=object)
            tags[~pos] = "countable_jumps:zero"
        return v, tags

    locus = CountableSet("1/k", lambda k: 1.0 / k, first=2)

    def jump_fn(p):
        k = locus.index_of(float(p[0]))
        return 2.0 ** (1 - k) if k is not None else 0.0

    record = DiscontinuityRecord(locus, Classification.LSC_NOT_USC, jump_size=2.0 ** (1 - locus.horizon),
                                 jump_fn=jump_fn, note="jump 2^(1-k) at 1/k")
    return SqcFunction(
        name="countable_jumps",
        label=f"{f0.label}, staircase with jumps at 1/k",
        domain=iv,
        kernel=kernel,
        claimed_modulus=gamma,
        discontinuities=(record,),
        params={"base": f0.name},
    )
