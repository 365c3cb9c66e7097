"""Numerical checks: the inequality on sampled triples, moduli, semicontinuity, structure."""

from ..geometry import TripleSample
from .probes import (DEFAULT_RADII, classify_limits, continuity_probe, jump_witness, locus_points,
                     parse_probe_spec, sphere_points)
from .report import (SCHEMA_VERSION, ContinuityProbeResult, ModulusEstimate, VerificationReport, Violation,
                     dump_json, jsonable, probes_csv)
from .sqc import CheckConfig, grid_oracle_1d, modulus_estimate, sqc_check
from .structure import MinimizerCluster, pattern_search, supercoercivity_probe, unique_min_check

__all__ = [
    "TripleSample",
    "Violation",
    "ModulusEstimate",
    "ContinuityProbeResult",
    "VerificationReport",
    "SCHEMA_VERSION",
    "jsonable",
    "dump_json",
    "probes_csv",
    "CheckConfig",
    "sqc_check",
    "modulus_estimate",
    "grid_oracle_1d",
    "DEFAULT_RADII",
    "classify_limits",
    "continuity_probe",
    "jump_witness",
    "sphere_points",
    "locus_points",
    "parse_probe_spec",
    "MinimizerCluster",
    "pattern_search",
    "unique_min_check",
    "supercoercivity_probe",
]
