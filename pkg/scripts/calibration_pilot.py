#!/usr/bin/env python3
"""Pilot runs that calibrate the Monte Carlo acceptance thresholds.

Sweeps the four support regimes at figure scale over several master seeds and
prints the KS distance, atom-at-1 frequency error, and mean error for each,
plus the boundary-probe medians and the cross-ensemble KS.  Used to pick the
regime representatives and the frozen seeds in the test suite; rerun after
any change to the sampling pipeline.
"""

import argparse
import sys
import time

import numpy as np
from scipy.stats import ks_2samp

sys.path.insert(0, "src")

from erasure_spectra import (  # noqa: E402
    ExperimentConfig,
    LawParams,
    RngSeed,
    SpectralLaw,
    compare,
    run_experiment,
    top_eigenvalue_probe,
)

REGIMES = [
    ("p=q, lower edge at 0", 0.6, 0.6),
    ("p+q=1, upper edge at 1", 0.5, 0.5),
    ("p+q<1, atom at 1", 0.2, 0.5),
    ("p+q>1, gap below 1", 0.6, 0.5),
]


def sweep_regimes(target_dim, trials, seeds, workers):
    for label, p, q in REGIMES:
        law = SpectralLaw(LawParams(p, q))
        for ensemble in ("dft", "haar"):
            for seed in seeds:
                cfg = ExperimentConfig(
                    ensemble, LawParams(p, q), target_dim=target_dim,
                    trials=trials, master_seed=seed,
                )
                t0 = time.time()
                rep = compare(run_experiment(cfg, workers=workers), law)
                print(
                    f"{label:28s} {ensemble:4s} seed={seed:2d} n={cfg.ambient_n:4d} "
                    f"ks={rep.ks_distance:.4f} atom1_err={rep.atom1_error:.4f} "
                    f"mean_err={rep.mean_error:.4f} l1={rep.l1_hist_distance:.4f} "
                    f"[{time.time() - t0:.1f}s]"
                )


def sweep_atom_example(seeds, workers):
    law = SpectralLaw(LawParams(0.3, 0.3))
    for seed in seeds:
        cfg = ExperimentConfig(
            "dft", LawParams(0.3, 0.3), target_dim=256, trials=100, master_seed=seed
        )
        emp = run_experiment(cfg, workers=workers)
        print(
            f"atom example (0.3,0.3)@256 seed={seed:2d} "
            f"freq={emp.atom1_freq:.4f} target={law.atom1:.4f} "
            f"err={abs(emp.atom1_freq - law.atom1):.4f}"
        )


def sweep_probe(seeds):
    for p, q, n in [(0.5, 0.5, 1024), (0.2, 0.5, 1024), (0.7, 0.7, 1024)]:
        for seed in seeds:
            tops = top_eigenvalue_probe("dft", n, p, q, 20, RngSeed(seed))
            print(
                f"probe ({p},{q}) n={n} seed={seed:2d} "
                f"median={np.median(tops):.6f} min={tops.min():.6f} max={tops.max():.6f}"
            )


def sweep_universality(seeds, workers):
    for seed in seeds:
        emps = {}
        for ensemble in ("dft", "haar"):
            cfg = ExperimentConfig(
                ensemble, LawParams(0.2, 0.5), target_dim=256,
                trials=100, master_seed=seed,
            )
            emps[ensemble] = run_experiment(cfg, workers=workers)
        stat = ks_2samp(emps["dft"].values, emps["haar"].values).statistic
        print(f"universality (0.2,0.5)@256 seed={seed:2d} ks={stat:.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--dim", type=int, default=100)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument(
        "--part", choices=["regimes", "atom", "probe", "universality", "all"],
        default="all",
    )
    args = ap.parse_args()
    if args.part in ("regimes", "all"):
        sweep_regimes(args.dim, args.trials, args.seeds, args.workers)
    if args.part in ("atom", "all"):
        sweep_atom_example(args.seeds, args.workers)
    if args.part in ("probe", "all"):
        sweep_probe(args.seeds[:3])
    if args.part in ("universality", "all"):
        sweep_universality(args.seeds[:3], args.workers)
