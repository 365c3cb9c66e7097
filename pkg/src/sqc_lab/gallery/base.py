"""The :class:`SqcFunction` container and its discontinuity metadata."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..core import ExtendedReal, as_point, to_extended
from ..geometry import ConvexDomain
from ..loci import CountableSet, IntervalEndpoints, Locus, SinglePoint

__all__ = ["Classification", "DiscontinuityRecord", "SqcFunction", "Kernel"]

# kernel(X, want_tags) -> (values, tags or None); X rows are points of the domain
Kernel = Callable[[np.ndarray, bool], "tuple[np.ndarray, np.ndarray | None]"]


class Classification(str, enum.Enum):
    CONTINUOUS = "Continuous"
    LSC_NOT_USC = "LscNotUsc"
    USC_NOT_LSC = "UscNotLsc"
    NEITHER = "Neither"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DiscontinuityRecord:
    """Declared behaviour of a function on one locus.

    ``jump_size`` is the declared gap between the branch values meeting at
    the locus. When the gap varies along the locus, ``jump_fn`` gives it
    pointwise and ``jump_size`` holds the smallest value.
    """

    locus: Locus
    classification: Classification
    jump_size: float
    jump_fn: Callable[[np.ndarray], float] | None = field(default=None, compare=False)
    note: str = ""

    def __post_init__(self):
        if not self.jump_size > 0:
            raise ValueError("jump_size must be positive")

    def jump_at(self, p) -> float:
        return float(self.jump_fn(as_point(p))) if self.jump_fn is not None else self.jump_size

    def to_dict(self) -> dict:
        out = {
            "locus": self.locus.to_dict(),
            "classification": self.classification.value,
            "jump_size": self.jump_size,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True, eq=False)
class SqcFunction:
    """A function on R^n, finite exactly on ``domain`` and ``+inf`` elsewhere.

    ``kernel`` evaluates rows that lie in the domain; :meth:`values` applies
    the canonical extension on top. ``claimed_modulus`` is ``None`` when the
    construction does not come with a known modulus.
    """

    name: str
    label: str
    domain: ConvexDomain
    kernel: Kernel
    claimed_modulus: float | None = None
    discontinuities: tuple[DiscontinuityRecord, ...] = ()
    params: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    fixture: bool = False

    def __post_init__(self):
        if self.claimed_modulus is not None and not self.claimed_modulus > 0:
            raise ValueError("claimed_modulus must be positive when given")
        object.__setattr__(self, "discontinuities", tuple(self.discontinuities))

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def is_discontinuous(self) -> bool:
        return bool(self.discontinuities)

    def values(self, X) -> np.ndarray:
        """Vectorised evaluation; ``+inf`` is encoded as ``np.inf`` here."""
        vals, _ = self.evaluate(X, want_tags=False)
        return vals

    def evaluate(self, X, want_tags: bool = True) -> tuple[np.ndarray, np.ndarray | None]:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: {self.name} is {self.dim}-D, points are {X.shape[1]}-D")
        inside = self.domain.contains(X)
        vals = np.full(X.shape[0], np.inf)
        tags = np.full(X.shape[0], "outside", dtype=object) if want_tags else None
        if np.any(inside):
            v, tg = self.kernel(X[inside], want_tags)
            vals[inside] = v
            if want_tags:
                tags[inside] = tg
        return vals, tags

    def __call__(self, x) -> ExtendedReal:
        return to_extended(self.values(as_point(x, self.dim)[None, :])[0])

    def branch(self, x) -> str:
        return str(self.evaluate(as_point(x, self.dim)[None, :])[1][0])

    def records_at(self, p, tol: float = 1e-9) -> list[DiscontinuityRecord]:
        p = as_point(p, self.dim)[None, :]
        return [r for r in self.discontinuities if bool(r.locus.contains(p, tol)[0])]

    def declared_classification(self, p, tol: float = 1e-9) -> Classification:
        hits = self.records_at(p, tol)
        if not hits:
            return Classification.CONTINUOUS
        return hits[0].classification

    def stress_sets(self) -> tuple[Locus, ...]:
        return tuple(r.locus for r in self.discontinuities)

    def catalogue_entry(self) -> dict:
        return {
            "name": self.name,
            "label": self.label,
            "parameters": self.params,
            "domain": self.domain.to_dict(),
            "claimed_modulus": self.claimed_modulus,
            "discontinuities": [r.to_dict() for r in self.discontinuities],
            "notes": list(self.notes),
            "fixture": self.fixture,
        }


def tags_for(mask_by_tag: dict[str, np.ndarray], size: int, default: str) -> np.ndarray:
    """Build an object array of branch tags from boolean masks (later masks win)."""
    out = np.full(size, default, dtype=object)
    for tag, mask in mask_by_tag.items():
        out[mask] = tag
    return out


def point_locus_members(locus: Locus) -> np.ndarray:
    """Explicit points of a discrete locus, for probing."""
    if isinstance(locus, SinglePoint):
        return locus.point[None, :]
    if isinstance(locus, IntervalEndpoints):
        return np.array([[locus.a], [locus.b]])
    if isinstance(locus, CountableSet):
        return locus.members()[:, None]
    raise TypeError(f"{locus.kind} is not a discrete locus")
