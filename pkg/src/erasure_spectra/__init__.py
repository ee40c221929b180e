"""Spectral laws of randomly row/column-erased unitary matrices.

Closed-form limiting distributions (eta and Stieltjes transforms, density,
atoms, CDF) for submatrices of Haar-unitary and DFT matrices under Bernoulli
erasure of rows and columns, together with a reproducible Monte Carlo engine
that verifies them.
"""

from .ensembles import (
    ProjectionMask,
    RngSeed,
    bernoulli_mask,
    dft_matrix,
    haar_sample,
    mix64,
    restrict,
)
from .errors import (
    DomainError,
    InvalidDimensionError,
    InvalidParameterError,
    NumericsError,
    PoleError,
    RetryExhaustedError,
    SampleFormatError,
)
from .law import (
    NORM_FULL,
    NORM_THEOREM,
    DensityCurve,
    LawEdges,
    LawParams,
    SpectralLaw,
    edges,
    eta,
    eta_fixed_point_residual,
    mean_eigenvalue_full,
    stieltjes,
)
from .montecarlo import (
    ComparisonReport,
    EmpiricalDistribution,
    ExperimentConfig,
    compare,
    ks_distance,
    run_experiment,
    run_trials,
    snap_atoms,
    top_eigenvalue_probe,
    trial_seed,
)
from .spectra import (
    ENSEMBLE_DFT,
    ENSEMBLE_HAAR,
    ENSEMBLES,
    KIND_EIGEN,
    KIND_SINGULAR,
    SpectralSample,
    restricted_spectrum,
    singular_values,
    to_singular,
)

__version__ = "0.1.0"

__all__ = [
    "ProjectionMask",
    "RngSeed",
    "bernoulli_mask",
    "dft_matrix",
    "haar_sample",
    "mix64",
    "restrict",
    "DomainError",
    "InvalidDimensionError",
    "InvalidParameterError",
    "NumericsError",
    "PoleError",
    "RetryExhaustedError",
    "SampleFormatError",
    "NORM_FULL",
    "NORM_THEOREM",
    "DensityCurve",
    "LawEdges",
    "LawParams",
    "SpectralLaw",
    "edges",
    "eta",
    "eta_fixed_point_residual",
    "mean_eigenvalue_full",
    "stieltjes",
    "ComparisonReport",
    "EmpiricalDistribution",
    "ExperimentConfig",
    "compare",
    "ks_distance",
    "run_experiment",
    "run_trials",
    "snap_atoms",
    "top_eigenvalue_probe",
    "trial_seed",
    "ENSEMBLE_DFT",
    "ENSEMBLE_HAAR",
    "ENSEMBLES",
    "KIND_EIGEN",
    "KIND_SINGULAR",
    "SpectralSample",
    "restricted_spectrum",
    "singular_values",
    "to_singular",
    "__version__",
]
