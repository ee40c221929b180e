"""Command-line surface: theory curves, sampling runs, comparisons, figures.

Four subcommands produce CSV columns for plotting and JSON for assertions:

    theory   density curve of the limiting law        -> x,density
    sample   raw Monte Carlo spectra                  -> trial,rank,value
    compare  score a samples file against the law     -> JSON report
    figure   one-shot histogram vs theory overlay     -> x,empirical_density,theory_density

Every primary output is a pure function of the flags and the seed; repeated
invocations produce byte-identical files at any worker count.  Each output is
accompanied by a ``<name>.manifest.json`` sidecar recording the exact
parameters, the seed and its origin, the tool version, and SHA-256 digests of
the files written (the manifest also records the wall-clock duration, so the
sidecar itself is not byte-stable).

Exit codes: 0 success, 2 invalid parameters or malformed input, 3 I/O
failure, 4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DomainError,
    InvalidParameterError,
    NumericsError,
    RetryExhaustedError,
    SampleFormatError,
)
from .law import NORM_THEOREM, NORMALIZATIONS, LawParams, SpectralLaw
from .montecarlo import EmpiricalDistribution, ExperimentConfig, compare, run_trials
from .spectra import ENSEMBLES

SEED_ENV_VAR = "ERASURE_SPECTRA_SEED"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_NUMERICS = 4


def _fmt(value) -> str:
    """Serialize a float with 17 significant digits, locale-free."""
    return format(float(value), ".17g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _manifest_path(out: Path) -> Path:
    return out.with_suffix(".manifest.json")


def _write_manifest(
    out: Path, command: str, parameters: dict, seed, seed_source: str, started: float
) -> None:
    outputs = {}
    for candidate in (out, out.with_suffix(".meta.json")):
        if candidate.exists():
            outputs[candidate.name] = {
                "sha256": _sha256(candidate),
                "bytes": candidate.stat().st_size,
            }
    _write_json(
        _manifest_path(out),
        {
            "command": command,
            "version": __version__,
            "parameters": parameters,
            "seed": seed,
            "seed_source": seed_source,
            "duration_seconds": time.time() - started,
            "outputs": outputs,
        },
    )


def _resolve_seed(args) -> tuple[int, str]:
    if args.seed is not None:
        return args.seed, "flag"
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env), "env"
        except ValueError as exc:
            raise InvalidParameterError(
                f"{SEED_ENV_VAR} must be an integer, got {env!r}"
            ) from exc
    return 0, "default"


def _cmd_theory(args) -> int:
    started = time.time()
    law = SpectralLaw(LawParams(args.p, args.q), args.norm)
    curve = law.sample_curve(args.grid)
    out = Path(args.out)
    _write_csv(
        out, ["x", "density"],
        ([_fmt(x), _fmt(v)] for x, v in zip(curve.grid, curve.values)),
    )
    e = law.edges
    _write_json(
        out.with_suffix(".meta.json"),
        {
            "p": args.p,
            "q": args.q,
            "normalization": args.norm,
            "grid_size": args.grid,
            "edges": {"r_minus": e.r_minus, "r_plus": e.r_plus},
            "atoms": {"atom0": curve.atom0, "atom1": curve.atom1},
            "masses": {
                "continuous": law.continuous_mass(),
                "total": curve.atom0 + curve.atom1 + law.continuous_mass(),
            },
        },
    )
    _write_manifest(
        out, "theory",
        {"p": args.p, "q": args.q, "grid": args.grid, "norm": args.norm,
         "out": str(out)},
        None, "none", started,
    )
    return EXIT_OK


def _experiment_config(args, seed: int) -> ExperimentConfig:
    return ExperimentConfig(
        ensemble=args.ensemble,
        params=LawParams(args.p, args.q),
        target_dim=args.dim,
        trials=args.trials,
        master_seed=seed,
        bins=getattr(args, "bins", 40),
    )


def _cmd_sample(args) -> int:
    started = time.time()
    seed, seed_source = _resolve_seed(args)
    config = _experiment_config(args, seed)
    samples = run_trials(config, workers=args.workers)
    out = Path(args.out)
    _write_csv(
        out, ["trial", "rank", "value"],
        (
            [str(t), str(r), _fmt(v)]
            for t, s in enumerate(samples)
            for r, v in enumerate(s.values)
        ),
    )
    _write_manifest(
        out, "sample",
        {"ensemble": args.ensemble, "p": args.p, "q": args.q, "dim": args.dim,
         "trials": args.trials, "workers": args.workers,
         "ambient_n": config.ambient_n, "out": str(out)},
        seed, seed_source, started,
    )
    return EXIT_OK


def read_samples_csv(path: Path) -> list[np.ndarray]:
    """Parse a ``trial,rank,value`` CSV back into per-trial value arrays."""
    by_trial: dict[int, list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["trial", "rank", "value"]:
            raise SampleFormatError(
                f"expected header trial,rank,value, got {header}", line=1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SampleFormatError(f"expected 3 fields, got {len(row)}", line=lineno)
            try:
                trial, value = int(row[0]), float(row[2])
            except ValueError as exc:
                raise SampleFormatError(str(exc), line=lineno) from exc
            by_trial.setdefault(trial, []).append(value)
    if not by_trial:
        raise SampleFormatError(f"samples file {path} contains no data rows")
    return [np.asarray(by_trial[t]) for t in sorted(by_trial)]


def _manifest_parameter_warning(samples_path: Path, p: float, q: float):
    manifest_path = _manifest_path(samples_path)
    if not manifest_path.exists():
        return None
    try:
        recorded = json.loads(manifest_path.read_text()).get("parameters", {})
    except (json.JSONDecodeError, OSError):
        return f"manifest {manifest_path.name} unreadable"
    mismatches = [
        f"{name}={recorded[name]} (manifest) vs {value} (flag)"
        for name, value in (("p", p), ("q", q))
        if name in recorded and recorded[name] != value
    ]
    if mismatches:
        return "parameter mismatch: " + "; ".join(mismatches)
    return None


def _cmd_compare(args) -> int:
    started = time.time()
    samples_path = Path(args.samples)
    trial_values = read_samples_csv(samples_path)
    emp = EmpiricalDistribution.from_trial_values(trial_values, bins=args.bins)
    law = SpectralLaw(LawParams(args.p, args.q), NORM_THEOREM)
    report = compare(emp, law)
    out = Path(args.out)
    _write_json(
        out,
        {
            "p": args.p,
            "q": args.q,
            "bins": args.bins,
            "samples": str(samples_path),
            "ks_distance": report.ks_distance,
            "l1_hist_distance": report.l1_hist_distance,
            "atom1_error": report.atom1_error,
            "mean_error": report.mean_error,
            "detail": report.meta,
            "manifest_mismatch_warning": _manifest_parameter_warning(
                samples_path, args.p, args.q
            ),
        },
    )
    _write_manifest(
        out, "compare",
        {"samples": str(samples_path), "p": args.p, "q": args.q,
         "bins": args.bins, "out": str(out)},
        None, "none", started,
    )
    return EXIT_OK


def _cmd_figure(args) -> int:
    started = time.time()
    seed, seed_source = _resolve_seed(args)
    config = _experiment_config(args, seed)
    samples = run_trials(config, workers=args.workers)
    emp = EmpiricalDistribution.from_trial_values(
        [s.values for s in samples], bins=args.bins
    )
    law = SpectralLaw(LawParams(args.p, args.q), NORM_THEOREM)
    centers = 0.5 * (emp.bin_edges[:-1] + emp.bin_edges[1:])
    empirical = emp.histogram_density()
    theory = law.density(centers)
    out = Path(args.out)
    _write_csv(
        out, ["x", "empirical_density", "theory_density"],
        (
            [_fmt(x), _fmt(ed), _fmt(td)]
            for x, ed, td in zip(centers, empirical, theory)
        ),
    )
    _write_manifest(
        out, "figure",
        {"ensemble": args.ensemble, "p": args.p, "q": args.q, "dim": args.dim,
         "trials": args.trials, "bins": args.bins, "workers": args.workers,
         "ambient_n": config.ambient_n, "out": str(out)},
        seed, seed_source, started,
    )
    return EXIT_OK


def _add_law_flags(sub) -> None:
    sub.add_argument("--p", type=float, required=True, help="column erase probability, in (0,1)")
    sub.add_argument("--q", type=float, required=True, help="row erase probability, in (0,1)")


def _add_experiment_flags(sub) -> None:
    sub.add_argument("--ensemble", choices=ENSEMBLES, default="dft")
    sub.add_argument("--dim", type=int, default=100,
                     help="expected restricted dimension (ambient is dim/(1-max(p,q)))")
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--seed", type=int, default=None,
                     help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    sub.add_argument("--workers", type=int, default=1,
                     help="trial-level parallelism; output does not depend on it")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erasure-spectra",
        description="Spectral laws of randomly erased unitary matrices.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    theory = commands.add_parser("theory", help="evaluate the limiting density curve")
    _add_law_flags(theory)
    theory.add_argument("--grid", type=int, default=512, help="curve grid size")
    theory.add_argument("--norm", choices=NORMALIZATIONS, default=NORM_THEOREM)
    theory.add_argument("--out", required=True)
    theory.set_defaults(handler=_cmd_theory)

    sample = commands.add_parser("sample", help="draw Monte Carlo spectra")
    _add_law_flags(sample)
    _add_experiment_flags(sample)
    sample.add_argument("--out", required=True)
    sample.set_defaults(handler=_cmd_sample)

    comp = commands.add_parser("compare", help="score a samples CSV against the law")
    comp.add_argument("samples", help="CSV produced by the sample command")
    _add_law_flags(comp)
    comp.add_argument("--bins", type=int, default=40)
    comp.add_argument("--out", required=True)
    comp.set_defaults(handler=_cmd_compare)

    figure = commands.add_parser(
        "figure", help="histogram of one experiment next to the theory curve"
    )
    _add_law_flags(figure)
    _add_experiment_flags(figure)
    figure.add_argument("--bins", type=int, default=40)
    figure.add_argument("--out", required=True)
    figure.set_defaults(handler=_cmd_figure)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (InvalidParameterError, DomainError, SampleFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericsError, RetryExhaustedError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


def entrypoint() -> None:
    sys.exit(main())
