"""Named constructions with default parameters, used by the CLI and reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..geometry import Box, Interval, LinearMap
from .base import SqcFunction
from .classic import max_root_quadratic, quadratic_norm
from .combinators import affine_pullback, restrict
from .fixtures import constant, neg_quadratic
from .multivariate import boundary_perturbation, point_drop, radial_jump, radial_split
from .univariate import countable_jumps, endpoint_jump, interior_jump_lsc, interior_jump_usc

__all__ = ["Construction", "CATALOGUE", "build", "catalogue", "square_on", "parse_matrix", "parse_vector"]


def parse_matrix(text: str) -> np.ndarray:
    """``"2 0;0 2"`` -> 2x2 array (rows split on ';', entries on whitespace or ',')."""
    rows = [r.replace(",", " ").split() for r in str(text).split(";") if r.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"malformed matrix {text!r}")
    return np.array([[float(v) for v in r] for r in rows])


def parse_vector(text: str) -> np.ndarray:
    parts = str(text).replace(",", " ").split()
    if not parts:
        raise ValueError(f"malformed vector {text!r}")
    return np.array([float(v) for v in parts])


def square_on(a: float = 0.0, b: float = 1.0) -> SqcFunction:
    """``x^2`` on ``[a, b]``: the default base of the interval constructions."""
    return restrict(quadratic_norm(1), Interval(a, b), name="square_on_interval")


def _radial_base(n: int, base: str, k: int) -> SqcFunction:
    if base == "quadratic_norm":
        return quadratic_norm(n)
    if base == "max_root_quadratic":
        return max_root_quadratic(n, k)
    raise ValueError(f"unknown radial base {base!r}")


def _bounded(inner: SqcFunction, half_width: float, name: str) -> SqcFunction:
    n = inner.dim
    return restrict(inner, Box(-half_width * np.ones(n), half_width * np.ones(n)), name=name)


def _pullback(inner: str, A, b, **inner_params) -> SqcFunction:
    A = parse_matrix(A) if isinstance(A, str) else np.asarray(A, dtype=float)
    if b is not None:
        b = parse_vector(b) if isinstance(b, str) else np.asarray(b, dtype=float)
    entry = CATALOGUE.get(inner)
    if entry is None or inner == "affine_pullback":
        raise ValueError(f"unknown inner construction {inner!r}")
    params = {k: v for k, v in inner_params.items() if k in entry.defaults}
    if "n" in entry.defaults:
        params["n"] = A.shape[0]
    return affine_pullback(entry.build(**params), LinearMap(A, b))


@dataclass(frozen=True)
class Construction:
    name: str
    builder: Callable[..., SqcFunction] = field(repr=False)
    defaults: dict[str, Any]
    summary: str
    discontinuous: bool = True
    fixture: bool = False

    def build(self, **overrides) -> SqcFunction:
        unknown = set(overrides) - set(self.defaults)
        if unknown and self.name != "affine_pullback":
            raise ValueError(f"{self.name} does not take parameter(s) {sorted(unknown)}")
        params = {**self.defaults, **{k: v for k, v in overrides.items() if v is not None}}
        return self.builder(**params)


_ENTRIES = [
    Construction("quadratic_norm", lambda n: quadratic_norm(n), {"n": 2},
                 "squared norm, strongly convex with modulus 2", discontinuous=False),
    Construction("max_root_quadratic", lambda n, k: max_root_quadratic(n, k), {"n": 2, "k": 1},
                 "max of root norm and squared norm minus k; not convex, modulus empirical",
                 discontinuous=False),
    Construction("endpoint_jump", lambda lo, hi: endpoint_jump(square_on(lo, hi)), {"lo": 0.0, "hi": 1.0},
                 "x^2 on [lo, hi] with both endpoint values lifted to max + 1; jumps at the endpoints"),
    Construction("interior_jump_lsc", lambda c: interior_jump_lsc(square_on(), c=c), {"c": 0.5},
                 "x^2 - 1 on [0, c], x^2 on (c, 1]; lower semicontinuous jump at c"),
    Construction("interior_jump_usc", lambda c: interior_jump_usc(square_on(), c=c), {"c": 0.5},
                 "x^2 - 1 on [0, c), x^2 on [c, 1]; upper semicontinuous jump at c"),
    Construction("countable_jumps", lambda: countable_jumps(square_on()), {},
                 "x^2 - 1 + 2^(1-k) on (1/(k+1), 1/k]; lower semicontinuous jumps at every 1/k"),
    Construction("boundary_perturbation", lambda n, alpha: boundary_perturbation(n, alpha),
                 {"n": 2, "alpha": 0.5},
                 "squared norm on the unit ball with a boundary subset lifted by alpha"),
    Construction("point_drop", lambda n, alpha: point_drop(quadratic_norm(n), alpha=alpha),
                 {"n": 2, "alpha": 1.0},
                 "squared norm with the value at 0 lowered by alpha; lsc, not usc at 0"),
    Construction("radial_jump",
                 lambda n, rho, beta, variant, base, k: radial_jump(n, rho, beta, variant, _radial_base(n, base, k)),
                 {"n": 2, "rho": 1.0, "beta": 1.0, "variant": "lower", "base": "quadratic_norm", "k": 1},
                 "base inside the sphere |x| = rho, base + beta outside; lower: Sphere(rho) LscNotUsc, "
                 "upper: Sphere(rho) UscNotLsc"),
    Construction("radial_split", lambda n, rho, beta: radial_split(n, rho, beta),
                 {"n": 2, "rho": 1.0, "beta": 1.0},
                 "squared norm with the sphere |x| = rho split between both branch values"),
    Construction("bounded_radial_jump_lower",
                 lambda n, rho, beta, half_width: _bounded(radial_jump(n, rho, beta, "lower"), half_width,
                                                           "bounded_radial_jump_lower"),
                 {"n": 2, "rho": 1.0, "beta": 1.0, "half_width": 2.0},
                 "lower radial jump restricted to the box [-w, w]^n"),
    Construction("bounded_radial_jump_upper",
                 lambda n, rho, beta, half_width: _bounded(radial_jump(n, rho, beta, "upper"), half_width,
                                                           "bounded_radial_jump_upper"),
                 {"n": 2, "rho": 1.0, "beta": 1.0, "half_width": 2.0},
                 "upper radial jump restricted to the box [-w, w]^n"),
    Construction("bounded_radial_split",
                 lambda n, rho, beta, half_width: _bounded(radial_split(n, rho, beta), half_width,
                                                           "bounded_radial_split"),
                 {"n": 2, "rho": 1.0, "beta": 1.0, "half_width": 2.0},
                 "radial split restricted to the box [-w, w]^n"),
    Construction("affine_pullback", _pullback, {"inner": "quadratic_norm", "A": "2 0;0 2", "b": None},
                 "any construction composed with an invertible affine map; modulus gamma * beta^2"),
    Construction("constant5", lambda n: constant(n, 5.0), {"n": 2},
                 "constant 5 (not strongly quasiconvex)", discontinuous=False, fixture=True),
    Construction("neg_quadratic", lambda n: neg_quadratic(n), {"n": 2},
                 "negative squared norm (quasiconcave)", discontinuous=False, fixture=True),
]

CATALOGUE: dict[str, Construction] = {c.name: c for c in _ENTRIES}


def build(name: str, **params) -> SqcFunction:
    try:
        entry = CATALOGUE[name]
    except KeyError:
        raise KeyError(f"unknown construction {name!r}; choose from {sorted(CATALOGUE)}") from None
    return entry.build(**params)


def catalogue(filter: str | None = None) -> list[dict]:
    """JSON-ready description of every construction, built at default parameters."""
    out = []
    for entry in _ENTRIES:
        if filter == "discontinuous" and not entry.discontinuous:
            continue
        if filter == "continuous" and (entry.discontinuous or entry.fixture):
            continue
        if filter == "fixtures" and not entry.fixture:
            continue
        f = entry.build()
        out.append({
            "construction": entry.name,
            "summary": entry.summary,
            "defaults": entry.defaults,
            **{k: v for k, v in f.catalogue_entry().items() if k != "name"},
        })
    return out
