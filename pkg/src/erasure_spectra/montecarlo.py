"""Reproducible Monte Carlo verification of the limiting spectral law.

Trials are mutually independent: each one derives its own RNG streams from
(master_seed, trial_index) through a fixed integer hash, so the pooled result
is bit-identical no matter how many workers execute the trials or in which
order they finish.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ensembles import RngSeed, mix64
from .errors import InvalidParameterError
from .law import NORM_THEOREM, LawParams, SpectralLaw
from .spectra import ENSEMBLES, SpectralSample, restricted_spectrum

_TRIAL_TAG = 0x7472


def trial_seed(master_seed: int, trial_index: int) -> RngSeed:
    """Seed for one trial; the derivation is part of the reproducibility contract."""
    return RngSeed(master_seed, mix64(_TRIAL_TAG, trial_index))


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one Monte Carlo experiment.

    ``target_dim`` is the expected dimension of the restricted square block;
    the ambient matrix dimension is target_dim / (1 - max(p, q)), rounded.
    ``atom_tol`` is the half-width within which a pooled eigenvalue counts as
    a hit on the point masses at 0 or 1.
    """

    ensemble: str
    params: LawParams
    target_dim: int = 100
    trials: int = 100
    master_seed: int = 0
    bins: int = 40
    atom_tol: float = 1e-6

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise InvalidParameterError(
                f"ensemble must be one of {ENSEMBLES}, got {self.ensemble!r}"
            )
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be >= 1, got {self.trials}")
        if self.bins < 2:
            raise InvalidParameterError(f"bins must be >= 2, got {self.bins}")
        if not self.atom_tol > 0:
            raise InvalidParameterError(f"atom_tol must be positive, got {self.atom_tol}")
        if self.ambient_n < 2:
            raise InvalidParameterError(
                f"ambient dimension {self.ambient_n} too small; increase target_dim"
            )

    @property
    def ambient_n(self) -> int:
        return int(round(self.target_dim / (1.0 - max(self.params.p, self.params.q))))


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Pooled spectra of many trials, histogrammed on [0, 1]."""

    values: np.ndarray                 # pooled, sorted ascending
    trials: int
    kept_counts: tuple[int, ...]       # values contributed per trial
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    atom_tol: float
    atom0_freq: float
    atom1_freq: float

    def __post_init__(self):
        for name in ("values", "bin_edges", "bin_counts"):
            arr = np.array(getattr(self, name))  # own copy, frozen below
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_trial_values(
        cls, trial_values: Sequence[np.ndarray], bins: int, atom_tol: float = 1e-6
    ) -> "EmpiricalDistribution":
        if len(trial_values) == 0:
            raise InvalidParameterError("at least one trial is required")
        kept = tuple(len(v) for v in trial_values)
        pooled = np.sort(np.concatenate([np.asarray(v, dtype=float) for v in trial_values]))
        edges = np.linspace(0.0, 1.0, bins + 1)
        counts, _ = np.histogram(pooled, bins=edges)
        n = pooled.size
        atom0 = float(np.count_nonzero(pooled <= atom_tol)) / n if n else 0.0
        atom1 = float(np.count_nonzero(pooled >= 1.0 - atom_tol)) / n if n else 0.0
        return cls(pooled, len(trial_values), kept, edges, counts, atom_tol, atom0, atom1)

    def histogram_density(self) -> np.ndarray:
        """Histogram normalized to integrate to 1 over [0, 1]."""
        widths = np.diff(self.bin_edges)
        return self.bin_counts / (self.values.size * widths)


@dataclass(frozen=True)
class ComparisonReport:
    """Distances between one empirical distribution and a theorem-law target."""

    ks_distance: float
    l1_hist_distance: float
    atom1_error: float
    mean_error: float
    meta: dict = field(default_factory=dict)


def run_trials(config: ExperimentConfig, workers: int = 1) -> list[SpectralSample]:
    """Execute the trials, in order, with optional thread parallelism.

    The output is a list indexed by trial and is independent of the worker
    count and of completion order.
    """
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    n = config.ambient_n
    p, q = config.params.p, config.params.q

    def one(t: int) -> SpectralSample:
        return restricted_spectrum(
            config.ensemble, n, p, q, trial_seed(config.master_seed, t)
        )

    indices = range(config.trials)
    if workers == 1:
        return [one(t) for t in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, indices))


def run_experiment(config: ExperimentConfig, workers: int = 1) -> EmpiricalDistribution:
    """Pool ``config.trials`` independent restricted spectra."""
    samples = run_trials(config, workers=workers)
    return EmpiricalDistribution.from_trial_values(
        [s.values for s in samples], bins=config.bins, atom_tol=config.atom_tol
    )


def snap_atoms(values: np.ndarray, atom_tol: float) -> np.ndarray:
    """Move values within atom_tol of 0 or 1 onto the exact atom location.

    Atom eigenvalues are computed only to within a few ulps; distribution
    comparisons that key on exact positions must not mistake that rounding
    spread for mass sitting off the atom.
    """
    v = np.array(values, dtype=float)
    if atom_tol > 0.0:
        v[v <= atom_tol] = 0.0
        v[v >= 1.0 - atom_tol] = 1.0
    return v


def ks_distance(values: np.ndarray, law: SpectralLaw, atom_tol: float = 0.0) -> float:
    """Sup distance between the empirical CDF of ``values`` and the law's CDF.

    Exact for the step-function empirical CDF against the mixed law: both
    one-sided gaps are checked at every data point and at the atoms 0 and 1.
    Values within ``atom_tol`` of an atom are scored on it, see
    :func:`snap_atoms`.
    """
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    if n == 0:
        raise InvalidParameterError("cannot compute a KS distance of an empty sample")
    v = snap_atoms(v, atom_tol)
    xs = np.unique(np.concatenate([v, [0.0, 1.0]]))
    cdf_right = _chunked_cdf(law, xs)
    atom_jump = np.where(xs == 1.0, law.atom1, 0.0) + np.where(xs == 0.0, law.atom0, 0.0)
    cdf_left = cdf_right - atom_jump
    emp_le = np.searchsorted(v, xs, side="right") / n
    emp_lt = np.searchsorted(v, xs, side="left") / n
    return float(
        max(np.max(np.abs(emp_le - cdf_right)), np.max(np.abs(emp_lt - cdf_left)))
    )


def _chunked_cdf(law: SpectralLaw, xs: np.ndarray, chunk: int = 1024) -> np.ndarray:
    out = np.empty_like(xs)
    for start in range(0, xs.size, chunk):
        out[start : start + chunk] = law.cdf(xs[start : start + chunk])
    return out


def compare(emp: EmpiricalDistribution, law: SpectralLaw) -> ComparisonReport:
    """Score an empirical distribution against the theorem-normalized law.

    The KS distance includes the atom at 1.  The histogram L1 distance uses
    bin-averaged theoretical densities and skips the bins containing 0 or 1,
    where a density comparison across a point mass would be meaningless.
    """
    if law.normalization != NORM_THEOREM:
        raise InvalidParameterError(
            "compare expects the theorem normalization; the pooled values are "
            "the min(#rows, #cols) largest eigenvalues"
        )
    if emp.values.size == 0:
        raise InvalidParameterError("empirical distribution is empty")

    widths = np.diff(emp.bin_edges)
    emp_density = emp.histogram_density()
    cdf_at_edges = _chunked_cdf(law, emp.bin_edges)
    theory_density = np.diff(cdf_at_edges) / widths
    interior = (emp.bin_edges[:-1] > 0.0) & (emp.bin_edges[1:] < 1.0)
    l1 = float(np.sum(np.abs(emp_density - theory_density)[interior] * widths[interior]))

    return ComparisonReport(
        ks_distance=ks_distance(emp.values, law, atom_tol=emp.atom_tol),
        l1_hist_distance=l1,
        atom1_error=abs(emp.atom1_freq - law.atom1),
        mean_error=abs(float(emp.values.mean()) - law.mean()),
        meta={
            "p": law.params.p,
            "q": law.params.q,
            "trials": emp.trials,
            "pooled_size": int(emp.values.size),
            "bins": int(emp.bin_counts.size),
            "atom_tol": emp.atom_tol,
            "atom1_freq": emp.atom1_freq,
            "atom1_theory": law.atom1,
            "mean_empirical": float(emp.values.mean()),
            "mean_theory": law.mean(),
        },
    )


def top_eigenvalue_probe(
    ensemble: str, n: int, p: float, q: float, trials: int, seed: RngSeed
) -> np.ndarray:
    """Largest squared singular value of one restriction per trial.

    Exhibits the boundary behavior of the support: the top value approaches 1
    when p + q approaches 1, and stays near the upper edge r_plus < 1
    otherwise.  Requires n >= 64 so edge fluctuations stay small.
    """
    if n < 64:
        raise InvalidParameterError(f"probe needs n >= 64, got {n}")
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    tops = [
        restricted_spectrum(ensemble, n, p, q, seed.child(mix64(_TRIAL_TAG, t))).values[0]
        for t in range(trials)
    ]
    return np.asarray(tops)
