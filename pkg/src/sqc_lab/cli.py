"""Command line front end: ``sqc-lab list | verify | probe | modulus | export``.

Exit codes: 0 all checks passed, 1 violations or mismatches found,
2 bad input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import DEFAULT_TOLERANCE, Tolerance
from .geometry import PointTag
from .gallery import CATALOGUE, SqcFunction, build, catalogue
from .verify import (SCHEMA_VERSION, CheckConfig, continuity_probe, dump_json, modulus_estimate, parse_probe_spec,
                     probes_csv, sqc_check)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
MIN_COUNT, MAX_COUNT = 100, 100_000_000
MAX_EXPORT_POINTS = 1_000_000
SEED_ENV = "SQC_LAB_SEED"

# Flags forwarded to the gallery builders.
FUNCTION_FLAGS = ("n", "k", "rho", "beta", "alpha", "c", "variant", "inner", "A", "b", "lo", "hi", "half_width")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything needed to reproduce a run; embedded in every report."""

    command: str
    function: str | None = None
    parameters: dict = field(default_factory=dict)
    gamma: float | None = None
    count: int | None = None
    seed: int = 0
    tolerance: dict = field(default_factory=dict)
    stress: str = "declared"
    out: str | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _count(text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v != int(v) or not MIN_COUNT <= v <= MAX_COUNT:
        raise argparse.ArgumentTypeError(f"count must be an integer in [{MIN_COUNT}, {MAX_COUNT}]")
    return int(v)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _add_function_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("function selection")
    g.add_argument("--fn", required=True, help="gallery construction name (see `list`)")
    g.add_argument("--n", type=int, help="dimension")
    g.add_argument("--k", type=float, help="shift of max_root_quadratic")
    g.add_argument("--rho", type=float, help="sphere radius")
    g.add_argument("--beta", type=float, help="jump across the sphere")
    g.add_argument("--alpha", type=float, help="jump size of boundary or point constructions")
    g.add_argument("--c", type=float, help="interior jump location")
    g.add_argument("--variant", choices=("lower", "upper"), help="which side of the sphere is closed")
    g.add_argument("--inner", help="inner construction of affine_pullback")
    g.add_argument("--A", help='matrix, rows separated by ";" (e.g. "2 0;0 2")')
    g.add_argument("--b", help="offset vector, comma or space separated")
    g.add_argument("--lo", type=float, help="left end of the interval")
    g.add_argument("--hi", type=float, help="right end of the interval")
    g.add_argument("--half-width", dest="half_width", type=float, help="box half width of bounded variants")


def _add_run_args(p: argparse.ArgumentParser, count_default: int) -> None:
    p.add_argument("--gamma", type=float, help="modulus to test (default: claimed modulus)")
    p.add_argument("--count", type=_count, default=count_default, help="number of triples")
    p.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--abs-eps", type=float, default=DEFAULT_TOLERANCE.abs_eps)
    p.add_argument("--rel-eps", type=float, default=DEFAULT_TOLERANCE.rel_eps)
    p.add_argument("--min-pair-distance", type=float, default=DEFAULT_TOLERANCE.min_pair_distance)
    p.add_argument("--stress", choices=("declared", "none"), default="declared",
                   help="concentrate samples near the declared discontinuity loci, or not")
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqc-lab", description="Strongly quasiconvex function gallery and checks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="show the gallery")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--filter", choices=("discontinuous", "continuous", "fixtures"))

    p = sub.add_parser("verify", help="check the inequality on sampled triples")
    _add_function_args(p)
    _add_run_args(p, 100_000)
    p.add_argument("--out", help="report path")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("probe", help="classify semicontinuity at points")
    _add_function_args(p)
    p.add_argument("--at", action="append", required=True,
                   help='"x1,x2,...", "sphere:K" or "locus:K" (repeatable)')
    p.add_argument("--samples", type=_positive_int, default=64, help="samples per shell")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("modulus", help="estimate the modulus from sampled triples")
    _add_function_args(p)
    _add_run_args(p, 100_000)
    p.add_argument("--out", help="report path")

    p = sub.add_parser("export", help="function values on a grid, as CSV")
    _add_function_args(p)
    p.add_argument("--grid", required=True, help="N (1-D) or NxM (2-D)")
    p.add_argument("--out", help="CSV path (default: standard output)")
    return parser


def _select(args) -> tuple[SqcFunction, dict]:
    if args.fn not in CATALOGUE:
        raise InputError(f"unknown construction {args.fn!r}; choose from {', '.join(sorted(CATALOGUE))}")
    params = {k: getattr(args, k) for k in FUNCTION_FLAGS if getattr(args, k, None) is not None}
    if "n" in params and params["n"] < 1:
        raise InputError("--n must be positive")
    try:
        f = build(args.fn, **params)
    except (ValueError, KeyError, TypeError, ArithmeticError) as exc:
        raise InputError(str(exc)) from None
    return f, params


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _tolerance(args) -> Tolerance:
    try:
        return Tolerance(args.abs_eps, args.rel_eps, args.min_pair_distance)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _gamma(args, f: SqcFunction) -> float:
    gamma = args.gamma if args.gamma is not None else f.claimed_modulus
    if gamma is None:
        raise InputError(f"{f.name} has no claimed modulus; pass --gamma")
    if not gamma > 0:
        raise InputError("--gamma must be positive")
    return float(gamma)


def _write(path: str | None, text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    try:
        with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _locus_text(d: dict) -> str:
    kind = d["kind"]
    if kind == "Sphere":
        txt = f"Sphere(rho={d['radius']:g})"
        if "predicate" in d:
            txt += f"[{d['predicate']}={d['polarity']}]"
        return txt
    if kind == "BoundarySubset":
        return f"Boundary[{d['predicate']}={d['polarity']}]"
    if kind == "SinglePoint":
        return f"Point({', '.join(f'{v:g}' for v in d['point'])})"
    if kind == "IntervalEndpoints":
        return f"Endpoints({d['a']:g}, {d['b']:g})"
    if kind == "CountableSet":
        return f"{{{d['description']}}}"
    if kind == "Restricted":
        return f"{_locus_text(d['inner'])} in domain"
    if kind == "Mapped":
        return f"A*{_locus_text(d['inner'])}+b"
    return kind


def cmd_list(args, stdout) -> int:
    entries = catalogue(args.filter)
    if args.format == "json":
        stdout.write(dump_json(entries))
        return EXIT_OK
    for e in entries:
        mod = "empirical" if e["claimed_modulus"] is None else f"{e['claimed_modulus']:g}"
        disc = "; ".join(f"{_locus_text(d['locus'])} {d['classification']}" for d in e["discontinuities"])
        params = ", ".join(f"{k}={v}" for k, v in e["defaults"].items())
        tag = " [fixture]" if e["fixture"] else ""
        stdout.write(f"{e['construction']}{tag} ({params}) :: {e['label']} :: modulus {mod} :: "
                     f"{disc or 'continuous'}\n")
    return EXIT_OK


def _check_config(args) -> CheckConfig:
    return CheckConfig(count=args.count, stress_sets=None if args.stress == "declared" else (),
                       tolerance=_tolerance(args), seed=_seed(args), threads=args.threads)


def _run_config(args, params: dict, **extra) -> RunConfig:
    tol = {"abs_eps": args.abs_eps, "rel_eps": args.rel_eps, "min_pair_distance": args.min_pair_distance}
    return RunConfig(command=args.command, function=args.fn, parameters=params, count=args.count,
                     seed=_seed(args), tolerance=tol, stress=args.stress, out=args.out,
                     format=getattr(args, "format", "json"), **extra)


def cmd_verify(args, stdout) -> int:
    f, params = _select(args)
    gamma = _gamma(args, f)
    cfg = _check_config(args)
    try:
        report = sqc_check(f, gamma, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.run_config = _run_config(args, params, gamma=gamma).to_dict()
    stdout.write(report.summary() + "\n")
    if args.out:
        _write(args.out, report.violations_csv() if args.format == "csv" else report.to_json(), stdout)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_probe(args, stdout) -> int:
    f, params = _select(args)
    seed = _seed(args)
    try:
        pts = np.vstack([parse_probe_spec(f, spec, seed) for spec in args.at])
        results = [continuity_probe(f, p, samples_per_shell=args.samples, seed=seed) for p in pts]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for r in results:
        coords = ", ".join(f"{v:.6g}" for v in r.point)
        mark = "ok" if r.matches_declared else "MISMATCH"
        stdout.write(f"({coords}) {r.classification.value} declared={r.declared.value} {mark}\n")
    if args.format == "csv":
        text = probes_csv(results)
    else:
        cfg = RunConfig(command="probe", function=f.name, parameters=params, seed=seed, out=args.out,
                        format=args.format, extra={"at": args.at, "samples_per_shell": args.samples})
        text = dump_json({"schema": SCHEMA_VERSION, "function": f.name, "label": f.label,
                          "probes": results, "run_config": cfg.to_dict()})
    if args.out:
        _write(args.out, text, stdout)
    return EXIT_OK if all(r.matches_declared for r in results) else EXIT_FAIL


def cmd_modulus(args, stdout) -> int:
    f, params = _select(args)
    cfg = _check_config(args)
    try:
        est = modulus_estimate(f, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    claimed = f.claimed_modulus
    note = "empirical (no claimed modulus)" if claimed is None else f"claimed {claimed:g}"
    tr = est.argmin_triple
    stdout.write(f"{f.name}: gamma_hat={est.gamma_hat:.10g} ({note}) used={est.samples_used} "
                 f"skipped={est.samples_skipped}\n")
    stdout.write(f"  argmin x={tr.x.tolist()} y={tr.y.tolist()} t={tr.t:.6g}\n")
    if args.out:
        doc = {"schema": SCHEMA_VERSION, "function": f.name, "label": f.label, "claimed_modulus": claimed,
               "estimate": est, "run_config": _run_config(args, params).to_dict()}
        _write(args.out, dump_json(doc), stdout)
    return EXIT_OK


def _grid_shape(text: str, dim: int) -> tuple[int, ...]:
    try:
        shape = tuple(int(v) for v in text.lower().split("x"))
    except ValueError:
        raise InputError(f"bad --grid {text!r}; use N or NxM") from None
    if any(v < 2 for v in shape):
        raise InputError("grid sizes must be at least 2")
    if len(shape) == 1 and dim == 2:
        shape = shape * 2
    if len(shape) != dim:
        raise InputError(f"--grid {text!r} does not match the {dim}-D function")
    if int(np.prod(shape)) > MAX_EXPORT_POINTS:
        raise InputError(f"grid has more than {MAX_EXPORT_POINTS} points")
    return shape


def cmd_export(args, stdout) -> int:
    f, _ = _select(args)
    if f.dim > 2:
        raise InputError("export supports 1-D and 2-D functions only")
    shape = _grid_shape(args.grid, f.dim)
    lo, hi = f.domain.bounding_box()
    axes = [np.linspace(lo[i], hi[i], shape[i]) for i in range(f.dim)]
    X = np.column_stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")])
    vals, tags = f.evaluate(X, want_tags=True)
    codes, _ = f.domain.classify_many(X)
    names = np.array([PointTag.INTERIOR.value, PointTag.BOUNDARY.value, PointTag.OUTSIDE.value])
    kinds = names[codes]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*(f"x{i + 1}" for i in range(f.dim)), "value", "branch", "domain_class"])
    for row, v, t, k in zip(X.tolist(), vals.tolist(), tags, kinds):
        w.writerow([*(repr(c) for c in row), repr(v) if np.isfinite(v) else "inf", t, str(k)])
    _write(args.out, buf.getvalue(), stdout)
    return EXIT_OK


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "probe": cmd_probe, "modulus": cmd_modulus,
            "export": cmd_export}


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 on bad usage
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return COMMANDS[args.command](args, stdout)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except InputError as exc:
        stderr.write(f"sqc-lab: error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        stderr.write(f"sqc-lab: error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
