"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line in the summary."""

import io
import time

import numpy as np
import pytest

from sqc_lab.cli import main
from sqc_lab.gallery import Classification, build, constant
from sqc_lab.geometry import ClosedBall, FullSpace, Interval, sample_triples
from sqc_lab.verify import (continuity_probe, grid_oracle_1d, jump_witness, locus_points, modulus_estimate,
                            sphere_points, sqc_check, supercoercivity_probe, unique_min_check)

SEED = 7

# Every construction that carries a claimed modulus, with the parameter sets to check.
ZERO_VIOLATION_CASES = [
    ("endpoint_jump", {}),
    ("interior_jump_lsc", {}),
    ("interior_jump_usc", {}),
    ("countable_jumps", {}),
    ("boundary_perturbation", {"alpha": 0.5}),
    ("boundary_perturbation", {"alpha": 2.0}),
    ("point_drop", {"alpha": 1.0}),
    ("radial_jump", {"variant": "lower", "rho": 1.0, "beta": 1.0}),
    ("radial_jump", {"variant": "lower", "rho": 0.5, "beta": 3.0}),
    ("radial_jump", {"variant": "upper", "rho": 1.0, "beta": 1.0}),
    ("radial_jump", {"variant": "upper", "rho": 0.5, "beta": 3.0}),
    ("radial_split", {}),
    ("bounded_radial_jump_lower", {}),
    ("bounded_radial_jump_upper", {}),
    ("bounded_radial_split", {}),
    ("affine_pullback", {"inner": "quadratic_norm", "A": "2 0;0 2"}),
    ("affine_pullback", {"inner": "quadratic_norm", "A": "1 0;0 3"}),
    ("affine_pullback", {"inner": "radial_jump", "A": "2 0;0 2"}),
    ("affine_pullback", {"inner": "radial_split", "A": "1 0;0 3"}),
]


def _zero_violation_reports():
    out = []
    for name, params in ZERO_VIOLATION_CASES:
        f = build(name, **params)
        out.append(sqc_check(f, f.claimed_modulus, count=100_000, seed=SEED))
    return out


def test_quadratic_identity(acceptance):
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 5):
        f = build("quadratic_norm", n=n)
        blk = sample_triples(FullSpace(n), 10_000, seed=SEED)
        t = blk.T
        d2 = np.sum((blk.X - blk.Y) ** 2, axis=1)
        fx, fy, fz = f.values(blk.X), f.values(blk.Y), f.values(blk.Z)
        rhs = (1 - t) * fx + t * fy - (1 - t) * t * d2
        worst = max(worst, float(np.max(np.abs(fz - rhs) / np.maximum(1.0, np.abs(rhs)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    acceptance("quadratic identity", ok, f"max relative residual {worst:.2e} (<= 1e-12), {elapsed:.2f}s (< 1s)")
    assert ok


def test_zero_violation_suite(acceptance):
    start = time.perf_counter()
    reports = _zero_violation_reports()
    elapsed = time.perf_counter() - start
    bad = [f"{r.function}{r.parameters}" for r in reports if not r.passed]
    ok = not bad and elapsed < 30.0
    acceptance("zero violations at claimed moduli", ok,
               f"{len(reports)} constructions x 1e5 triples, failing: {bad or 'none'}, {elapsed:.1f}s (< 30s)")
    assert ok


def test_grid_oracle_agreement(acceptance):
    start = time.perf_counter()
    margins = {name: grid_oracle_1d(build(name), 2.0, 1e-3)
               for name in ("endpoint_jump", "interior_jump_lsc", "interior_jump_usc", "countable_jumps")}
    fixture = grid_oracle_1d(constant(1, 5.0, Interval(0.0, 1.0)), 2.0, 1e-3)
    elapsed = time.perf_counter() - start
    ok = all(m <= 0 for m in margins.values()) and fixture > 0 and elapsed < 60.0
    detail = ", ".join(f"{k}={v:.2e}" for k, v in margins.items())
    acceptance("1-D brute force oracle", ok, f"{detail}; constant fixture={fixture:.3g} (> 0), {elapsed:.1f}s (< 60s)")
    assert ok


def test_modulus_estimation(acceptance):
    start = time.perf_counter()
    g_quad = modulus_estimate(build("quadratic_norm", n=2), count=1_000_000, seed=SEED).gamma_hat
    g_pull = modulus_estimate(build("affine_pullback", A="2 0;0 2"), count=1_000_000, seed=SEED).gamma_hat
    elapsed = time.perf_counter() - start
    ok = 2 - 1e-6 <= g_quad <= 2.2 and 0.5 - 1e-6 <= g_pull <= 0.7 and elapsed < 20.0
    acceptance("modulus estimation", ok,
               f"quadratic {g_quad:.8f} in [2-1e-6, 2.2], pullback 2I {g_pull:.8f} in [0.5-1e-6, 0.7], "
               f"{elapsed:.1f}s (< 20s)")
    assert ok


def _classification_cases():
    """(function, points) pairs covering every declared discontinuity family."""
    cases = [
        (build("endpoint_jump"), np.array([[0.0], [1.0]])),
        (build("interior_jump_lsc"), np.array([[0.5]])),
        (build("interior_jump_usc"), np.array([[0.5]])),
        (build("countable_jumps"), np.array([[1.0 / k] for k in range(1, 6)])),
    ]
    for variant in ("lower", "upper"):
        f = build("radial_jump", variant=variant)
        cases.append((f, sphere_points(f, 8)))
    f = build("radial_split")
    cases.append((f, locus_points(f, 8, seed=SEED)))
    return cases


def test_semicontinuity_classification(acceptance):
    start = time.perf_counter()
    rows = []
    for f, pts in _classification_cases():
        for p in pts:
            rows.append((f.name, continuity_probe(f, p, samples_per_shell=64, seed=SEED)))
    elapsed = time.perf_counter() - start
    mismatched = [(n, r.point.tolist(), r.classification.value) for n, r in rows if not r.matches_declared]
    inconclusive = sum(r.classification is Classification.INCONCLUSIVE for _, r in rows)
    split = build("radial_split")
    kinds = {r.declared for n, r in rows if n == split.name}
    ok = not mismatched and inconclusive == 0 and elapsed < 10.0 and len(kinds) == 2
    acceptance("semicontinuity classification", ok,
               f"{len(rows)} probes, mismatches: {mismatched or 'none'}, inconclusive {inconclusive}, "
               f"{elapsed:.2f}s (< 10s)")
    assert ok


def _jump_cases():
    cases = []
    for name, params in [("endpoint_jump", {}), ("interior_jump_lsc", {}), ("interior_jump_usc", {}),
                         ("countable_jumps", {}), ("point_drop", {"alpha": 1.0}),
                         ("boundary_perturbation", {"alpha": 0.5}), ("boundary_perturbation", {"alpha": 2.0}),
                         ("radial_jump", {"variant": "lower"}), ("radial_jump", {"rho": 0.5, "beta": 3.0}),
                         ("radial_jump", {"variant": "upper"}), ("radial_split", {})]:
        f = build(name, **params)
        pts = locus_points(f, 5, seed=SEED)
        if name == "countable_jumps":
            pts = np.array([[1.0 / k] for k in range(2, 6)])
        for p in pts:
            rec = f.records_at(p)[0]
            cases.append((f, p, rec.jump_at(p)))
    return cases


def test_jump_size_convergence(acceptance):
    worst = 0.0
    bad = []
    for f, p, declared in _jump_cases():
        seen = jump_witness(f, p, radius=1e-5, seed=SEED)
        rel = abs(seen - declared) / declared
        worst = max(worst, rel)
        if rel > 0.1:
            bad.append((f.name, p.tolist(), seen, declared))
    ok = not bad
    acceptance("jump size convergence", ok, f"worst relative error {worst:.2e} (<= 0.1), failures: {bad or 'none'}")
    assert ok


def test_unique_minimizer(acceptance):
    ball = ClosedBall(np.zeros(2), 2.0)
    counts = {}
    for name in ("quadratic_norm", "point_drop", "radial_jump"):
        counts[name] = len(unique_min_check(build(name, n=2), ball, starts=64, seed=SEED))
    ok = all(c == 1 for c in counts.values())
    acceptance("unique minimizer", ok, f"clusters per function {counts} (all 1)")
    assert ok


def test_supercoercivity(acceptance):
    radii = (1.0, 10.0, 100.0, 1000.0)
    vals = {
        "quadratic_norm": supercoercivity_probe(build("quadratic_norm"), 64, radii, SEED),
        "max_root_quadratic": supercoercivity_probe(build("max_root_quadratic", k=1), 64, radii, SEED),
        "radial_jump": supercoercivity_probe(build("radial_jump"), 64, radii, SEED),
    }
    ok = all(v >= 0.5 for v in vals.values())
    acceptance("2-supercoercivity", ok, ", ".join(f"{k}={v:.4f}" for k, v in vals.items()) + " (>= 0.5)")
    assert ok


def test_detection_power(acceptance):
    fractions, codes = {}, {}
    for name in ("neg_quadratic", "constant5"):
        f = build(name)
        fractions[name] = sqc_check(f, 2.0, count=100_000, seed=SEED).violation_fraction
        codes[name] = main(["verify", "--fn", name, "--gamma", "2", "--seed", str(SEED), "--count", "10000"],
                           stdout=io.StringIO())
    ok = all(v > 0.99 for v in fractions.values()) and all(c == 1 for c in codes.values())
    acceptance("detection power", ok,
               ", ".join(f"{k}: {fractions[k]:.2%} violating, exit {codes[k]}" for k in fractions) + " (> 99%, exit 1)")
    assert ok


def test_determinism(acceptance):
    first = [r.to_json(include_timing=False) for r in _zero_violation_reports()]
    second = [r.to_json(include_timing=False) for r in _zero_violation_reports()]
    ok = first == second
    acceptance("determinism", ok, f"{len(first)} reports byte-identical without wall time: {ok}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
