"""The strong quasiconvexity inequality checked on sampled triples.

For a triple ``(x, y, t)`` with ``z = (1-t) x + t y`` the check compares

    f(z)  <=  max{f(x), f(y)} - gamma/2 * (1-t) * t * |x - y|^2

and the modulus estimator records the largest ``gamma`` each triple allows.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import DEFAULT_TOLERANCE, RngSeed, Tolerance, to_extended
from ..gallery.base import SqcFunction
from ..geometry import Interval, TripleBlock, iter_triple_blocks
from ..loci import Locus
from .report import ModulusEstimate, VerificationReport, Violation

__all__ = ["CheckConfig", "sqc_check", "modulus_estimate", "grid_oracle_1d", "evaluate_block", "ORACLE_T_GRID"]

ORACLE_T_GRID = np.round(np.arange(1, 20) * 0.05, 2)
_MAX_ORACLE_NODES = 2000


@dataclass(frozen=True)
class CheckConfig:
    """Sampling configuration shared by :func:`sqc_check` and :func:`modulus_estimate`.

    ``stress_sets=None`` means "use the function's declared discontinuity loci".
    """

    count: int = 100_000
    stress_sets: Sequence[Locus] | None = None
    tolerance: Tolerance = DEFAULT_TOLERANCE
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("count must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


def _config(config: CheckConfig | None, overrides: dict) -> CheckConfig:
    base = config or CheckConfig()
    if not overrides:
        return base
    return CheckConfig(**{**base.__dict__, **overrides})


@dataclass
class _BlockResult:
    block: TripleBlock
    lhs: np.ndarray
    rhs: np.ndarray
    margin: np.ndarray
    finite_ends: np.ndarray
    fx: np.ndarray
    fy: np.ndarray


def evaluate_block(f: SqcFunction, gamma: float, blk: TripleBlock) -> _BlockResult:
    X, Y, T = blk.X, blk.Y, blk.T
    fx, fy, fz = f.values(X), f.values(Y), f.values(blk.Z)
    top = np.maximum(fx, fy)
    finite_ends = np.isfinite(top)
    d2 = np.einsum("ij,ij->i", X - Y, X - Y)
    rhs = np.where(finite_ends, top - 0.5 * gamma * (1.0 - T) * T * d2, np.inf)
    with np.errstate(invalid="ignore"):
        margin = np.where(finite_ends, fz - rhs, -np.inf)
    return _BlockResult(blk, fz, rhs, margin, finite_ends, fx, fy)


def _blocks(f: SqcFunction, cfg: CheckConfig):
    stress = f.stress_sets() if cfg.stress_sets is None else tuple(cfg.stress_sets)
    return stress, iter_triple_blocks(f.domain, cfg.count, stress, cfg.tolerance.min_pair_distance,
                                      RngSeed(cfg.seed))


def _map_blocks(fn, blocks, threads: int):
    if threads == 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def sqc_check(f: SqcFunction, gamma: float, config: CheckConfig | None = None, **overrides) -> VerificationReport:
    """Check the inequality with modulus ``gamma`` on sampled triples.

    A triple is a violation when ``lhs > rhs + slack``. An infinite value at
    ``z`` while both endpoints are finite counts as a violation with infinite
    margin, since it means the domain is not convex.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    cfg = _config(config, overrides)
    tol = cfg.tolerance
    started = time.perf_counter()
    stress, blocks = _blocks(f, cfg)
    results = _map_blocks(lambda b: evaluate_block(f, gamma, b), blocks, cfg.threads)

    violations: list[Violation] = []
    worst = -np.inf
    total = 0
    for res in results:
        total += len(res.block)
        if np.any(res.finite_ends):
            worst = max(worst, float(np.max(res.margin[res.finite_ends])))
        with np.errstate(invalid="ignore"):
            bad = res.finite_ends & (res.lhs > res.rhs + tol.slack(res.rhs))
        for i in np.flatnonzero(bad):
            violations.append(Violation(res.block[i], to_extended(res.lhs[i]), float(res.rhs[i]),
                                        float(res.margin[i])))
    return VerificationReport(
        function=f.name,
        label=f.label,
        parameters=f.params,
        gamma=float(gamma),
        total_triples=total,
        violations=violations,
        worst_margin=worst,
        seed=cfg.seed,
        tolerance=tol,
        stress_sets=[s.to_dict() for s in stress],
        wall_time=time.perf_counter() - started,
    )


def modulus_estimate(f: SqcFunction, config: CheckConfig | None = None, **overrides) -> ModulusEstimate:
    """Infimum over sampled triples of the modulus each triple permits.

    Triples with an infinite value anywhere, or with ``|x - y|`` below the
    configured minimum distance, are skipped. The estimate can be ``<= 0``
    for inputs that are not strongly quasiconvex.
    """
    cfg = _config(config, overrides)
    _, blocks = _blocks(f, cfg)

    def ratios(blk: TripleBlock):
        fx, fy, fz = f.values(blk.X), f.values(blk.Y), f.values(blk.Z)
        d2 = np.einsum("ij,ij->i", blk.X - blk.Y, blk.X - blk.Y)
        ok = np.isfinite(fx) & np.isfinite(fy) & np.isfinite(fz)
        ok &= d2 >= cfg.tolerance.min_pair_distance ** 2
        denom = (1.0 - blk.T) * blk.T * d2
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(ok, 2.0 * (np.maximum(fx, fy) - fz) / denom, np.inf)
        return blk, r, ok

    best, arg, used, skipped = np.inf, None, 0, 0
    for blk, r, ok in _map_blocks(ratios, blocks, cfg.threads):
        used += int(ok.sum())
        skipped += int((~ok).sum())
        if np.any(ok):
            i = int(np.argmin(r))
            if r[i] < best:
                best, arg = float(r[i]), blk[i]
    if used == 0:
        raise ValueError("every sampled triple was skipped; no estimate possible")
    return ModulusEstimate(best, arg, used, skipped)


def grid_oracle_1d(f: SqcFunction, gamma: float, step: float = 1e-3) -> float:
    """Largest ``lhs - rhs`` over every grid pair ``x < y`` and ``t`` in {0.05, ..., 0.95}.

    Brute force, independent of the random sampler. A value ``<= 0`` means no
    grid triple violates the inequality.
    """
    if f.dim != 1 or not isinstance(f.domain, Interval):
        raise ValueError("grid_oracle_1d needs a function on an interval")
    if not step > 0:
        raise ValueError("step must be positive")
    a, b = f.domain.a, f.domain.b
    nodes = int(round((b - a) / step)) + 1
    if nodes > _MAX_ORACLE_NODES + 1:
        raise ValueError(f"grid of {nodes} nodes exceeds the limit of {_MAX_ORACLE_NODES}")
    xs = np.linspace(a, b, nodes)
    fv = f.values(xs[:, None])
    i, j = np.triu_indices(nodes, k=1)
    x, y = xs[i], xs[j]
    top = np.maximum(fv[i], fv[j])
    d2 = (x - y) ** 2
    worst = -np.inf
    for t in ORACLE_T_GRID:
        z = (1.0 - t) * x + t * y
        lhs = f.values(z[:, None])
        rhs = top - 0.5 * gamma * (1.0 - t) * t * d2
        worst = max(worst, float(np.max(lhs - rhs)))
    return worst
