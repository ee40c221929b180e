#!/usr/bin/env python3
"""Reproduce the four-panel histogram-vs-theory figure at the standard scale.

Each panel pools 100 restricted-spectrum trials at expected submatrix
dimension 100 and overlays the continuous part of the limiting law.  Panels
(a) and (b) restrict Haar unitaries, (c) and (d) the DFT matrix, covering the
four support regimes: both edges extremal, lower edge at 0, an atom at 1, and
a gap below 1.

    python scripts/reproduce_figure1.py --outdir figure1 [--plot]

CSV columns are x, empirical_density, theory_density; --plot additionally
renders figure1/figure1.png with matplotlib.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, "src")

from erasure_spectra.cli import main as cli_main  # noqa: E402

PANELS = [
    ("a", "haar", 0.5, 0.5),   # p+q=1: support fills (0,1), no atom
    ("b", "haar", 0.3, 0.3),   # p=q, p+q<1: edge at 0 plus an atom at 1
    ("c", "dft", 0.2, 0.5),    # p+q<1, p!=q: support [0.1, 0.9], atom at 1
    ("d", "dft", 0.6, 0.5),    # p+q>1: gap between 0.98 and 1, no atom
]


def run(outdir: Path, trials: int, dim: int, bins: int, seed: int, workers: int):
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for label, ensemble, p, q in PANELS:
        out = outdir / f"panel_{label}_{ensemble}_p{p}_q{q}.csv"
        code = cli_main([
            "figure", "--ensemble", ensemble, "--p", str(p), "--q", str(q),
            "--dim", str(dim), "--trials", str(trials), "--bins", str(bins),
            "--seed", str(seed), "--workers", str(workers), "--out", str(out),
        ])
        if code != 0:
            raise SystemExit(code)
        print(f"panel ({label}) {ensemble} p={p} q={q} -> {out}")
        paths.append((label, ensemble, p, q, out))
    return paths


def plot(paths, outdir: Path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for (label, ensemble, p, q, path), ax in zip(paths, axes.flat):
        x, emp, theory = np.loadtxt(path, delimiter=",", skiprows=1, unpack=True)
        width = x[1] - x[0]
        ax.bar(x, emp, width=width, color="lightsteelblue", label="empirical")
        inside = theory > 0
        ax.plot(x[inside], theory[inside], "r-", lw=1.5, label="limit law")
        ax.set_title(f"({label}) {ensemble}, p={p}, q={q}")
        ax.set_xlim(0, 1)
        ax.legend(fontsize=8)
    fig.tight_layout()
    target = outdir / "figure1.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("figure1"))
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--dim", type=int, default=100)
    ap.add_argument("--bins", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--plot", action="store_true", help="also render a PNG")
    args = ap.parse_args()
    panel_paths = run(args.outdir, args.trials, args.dim, args.bins, args.seed, args.workers)
    if args.plot:
        plot(panel_paths, args.outdir)
