"""Result records and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..core import INF, ExtendedReal, Tolerance
from ..gallery.base import Classification
from ..geometry import TripleSample

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "Violation",
    "ModulusEstimate",
    "ContinuityProbeResult",
    "VerificationReport",
    "jsonable",
    "dump_json",
    "probes_csv",
]


def _num(v) -> Any:
    if v is INF:
        return "inf"
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def jsonable(obj: Any) -> Any:
    """Recursively turn reports into JSON-safe values (infinities become strings)."""
    if obj is INF:
        return "inf"
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, Classification):
        return obj.value
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class Violation:
    triple: TripleSample
    lhs: ExtendedReal
    rhs: ExtendedReal
    margin: float

    def to_dict(self) -> dict:
        return {**self.triple.to_dict(), "lhs": _num(self.lhs), "rhs": _num(self.rhs), "margin": _num(self.margin)}


@dataclass(frozen=True)
class ModulusEstimate:
    """Smallest observed ratio ``2 (max{f(x), f(y)} - f(z)) / ((1-t) t |x-y|^2)``."""

    gamma_hat: float
    argmin_triple: TripleSample
    samples_used: int
    samples_skipped: int

    def to_dict(self) -> dict:
        return {
            "gamma_hat": _num(self.gamma_hat),
            "argmin_triple": self.argmin_triple.to_dict(),
            "samples_used": self.samples_used,
            "samples_skipped": self.samples_skipped,
        }


@dataclass(frozen=True)
class ContinuityProbeResult:
    point: np.ndarray
    f_value: ExtendedReal
    liminf_est: float
    limsup_est: float
    radii_used: tuple[float, ...]
    classification: Classification
    declared: Classification | None = None

    @property
    def matches_declared(self) -> bool:
        return self.declared is None or self.classification == self.declared

    def to_dict(self) -> dict:
        out = {
            "point": [float(v) for v in self.point],
            "f_value": _num(self.f_value),
            "liminf_est": _num(self.liminf_est),
            "limsup_est": _num(self.limsup_est),
            "radii_used": [float(r) for r in self.radii_used],
            "classification": self.classification.value,
        }
        if self.declared is not None:
            out["declared"] = self.declared.value
            out["matches_declared"] = self.matches_declared
        return out


@dataclass
class VerificationReport:
    function: str
    label: str
    parameters: dict
    gamma: float
    total_triples: int
    violations: list[Violation]
    worst_margin: float
    seed: int
    tolerance: Tolerance
    stress_sets: list[dict] = field(default_factory=list)
    modulus: ModulusEstimate | None = None
    probes: list[ContinuityProbeResult] = field(default_factory=list)
    wall_time: float = 0.0
    run_config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def violation_fraction(self) -> float:
        return len(self.violations) / self.total_triples if self.total_triples else 0.0

    def summary(self) -> str:
        return (f"{self.function}: gamma={self.gamma:.6g} triples={self.total_triples} "
                f"violations={len(self.violations)} worst_margin={_num(self.worst_margin)}")

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "function": self.function,
            "label": self.label,
            "parameters": self.parameters,
            "gamma": self.gamma,
            "total_triples": self.total_triples,
            "violation_count": len(self.violations),
            "worst_margin": _num(self.worst_margin),
            "seed": self.seed,
            "tolerance": {
                "abs_eps": self.tolerance.abs_eps,
                "rel_eps": self.tolerance.rel_eps,
                "min_pair_distance": self.tolerance.min_pair_distance,
            },
            "stress_sets": self.stress_sets,
            "modulus": self.modulus,
            "probes": self.probes,
            "violations": self.violations,
            "run_config": self.run_config,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return jsonable(out)

    def to_json(self, include_timing: bool = True) -> str:
        return dump_json(self.to_dict(include_timing))

    def violations_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = len(self.violations[0].triple.x) if self.violations else 0
        w.writerow([*(f"x{i+1}" for i in range(n)), *(f"y{i+1}" for i in range(n)), "t", "lhs", "rhs", "margin"])
        for v in self.violations:
            d = v.to_dict()
            w.writerow([*d["x"], *d["y"], d["t"], d["lhs"], d["rhs"], d["margin"]])
        return buf.getvalue()


def probes_csv(probes: list[ContinuityProbeResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = len(probes[0].point) if probes else 0
    w.writerow([*(f"p{i+1}" for i in range(n)), "f_value", "liminf_est", "limsup_est", "classification",
                "declared", "matches_declared"])
    for p in probes:
        w.writerow([*[float(v) for v in p.point], _num(p.f_value), _num(p.liminf_est), _num(p.limsup_est),
                    p.classification.value, p.declared.value if p.declared else "", p.matches_declared])
    return buf.getvalue()
