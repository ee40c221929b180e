"""Spectra of restricted unitary matrices.

The central object is the list of squared singular values of the submatrix
obtained by erasing rows and columns of a unitary matrix, which equals the
eigenvalue list of the corresponding Gram matrix.  Spectra are computed from
the rectangular restriction by SVD and squared afterwards; forming the Gram
matrix first would square the condition number, so that route is reserved for
test oracles.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .ensembles import RngSeed, bernoulli_mask, dft_matrix, haar_sample, mix64, restrict
from .errors import (
    InvalidDimensionError,
    InvalidParameterError,
    NumericsError,
    RetryExhaustedError,
)

KIND_EIGEN = "eigen"
KIND_SINGULAR = "singular"

ENSEMBLE_DFT = "dft"
ENSEMBLE_HAAR = "haar"
ENSEMBLES = (ENSEMBLE_DFT, ENSEMBLE_HAAR)

#: Clamping beyond this slack indicates a broken decomposition, not roundoff.
CLAMP_SLACK = 1e-9
MAX_MASK_RETRIES = 64

_STREAM_MATRIX = 0x11
_STREAM_ROWS = 0x22
_STREAM_COLS = 0x33


@dataclass(frozen=True)
class SpectralSample:
    """Sorted spectrum from one restricted draw, plus its shape metadata.

    ``values`` hold eigenvalues of the Gram matrix of the restriction (kind
    "eigen", all in [0, 1]) or their square roots (kind "singular"), sorted
    descending; the length is min(rows_kept, cols_kept).
    """

    ambient_n: int
    rows_kept: int
    cols_kept: int
    values: np.ndarray
    kind: str
    retries: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values of a dense matrix, sorted descending.

    A matrix with a zero dimension has no singular values; an empty array is
    returned under a RuntimeWarning so silent callers still get flagged.
    """
    a = np.asarray(m)
    if a.ndim != 2:
        raise InvalidDimensionError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if min(a.shape) == 0:
        warnings.warn("0-dimensional matrix has no singular values", RuntimeWarning)
        return np.empty(0)
    return np.linalg.svd(a, compute_uv=False)


def restricted_spectrum(
    ensemble: str, n: int, p: float, q: float, seed: RngSeed
) -> SpectralSample:
    """One reproducible draw of the squared singular values of a masked unitary.

    Rows survive independently with probability 1 - q and columns with
    probability 1 - p.  The ensemble matrix and both masks come from separate
    sub-streams of ``seed``, so they are mutually independent.  Empty masks
    are redrawn (both together) up to MAX_MASK_RETRIES times with the retry
    count recorded on the sample.
    """
    if ensemble not in ENSEMBLES:
        raise InvalidParameterError(f"ensemble must be one of {ENSEMBLES}, got {ensemble!r}")
    if n < 1:
        raise InvalidDimensionError(f"restricted_spectrum needs n >= 1, got {n}")
    for name, value in (("p", p), ("q", q)):
        if not (0.0 < value < 1.0):
            raise InvalidParameterError(
                f"{name} must lie strictly inside (0, 1), got {value}"
            )

    for attempt in range(MAX_MASK_RETRIES):
        rows = bernoulli_mask(n, q, seed.child(mix64(_STREAM_ROWS, attempt)))
        cols = bernoulli_mask(n, p, seed.child(mix64(_STREAM_COLS, attempt)))
        if rows.size > 0 and cols.size > 0:
            break
    else:
        raise RetryExhaustedError(
            f"both masks empty after {MAX_MASK_RETRIES} redraws (n={n}, p={p}, q={q})"
        )

    if ensemble == ENSEMBLE_DFT:
        matrix = dft_matrix(n)
    else:
        matrix = haar_sample(n, seed.child(_STREAM_MATRIX))

    squared = singular_values(restrict(matrix, rows, cols)) ** 2
    overshoot = max(squared.max(initial=0.0) - 1.0, -squared.min(initial=1.0))
    if overshoot > CLAMP_SLACK:
        raise NumericsError(
            f"squared singular values left [0, 1] by {overshoot:.3e}; "
            "refusing to clamp silently"
        )
    return SpectralSample(
        ambient_n=n,
        rows_kept=rows.size,
        cols_kept=cols.size,
        values=np.clip(squared, 0.0, 1.0),
        kind=KIND_EIGEN,
        retries=attempt,
    )


def to_singular(sample: SpectralSample) -> SpectralSample:
    """Convert an eigenvalue sample to singular values (element-wise sqrt)."""
    if sample.kind != KIND_EIGEN:
        raise InvalidParameterError(
            "sample already holds singular values; refusing to transform twice"
        )
    return replace(sample, values=np.sqrt(sample.values), kind=KIND_SINGULAR)
