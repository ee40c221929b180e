"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest
from hypothesis import settings

from erasure_spectra import RngSeed, bernoulli_mask, dft_matrix, haar_sample, restrict

# deterministic property testing: reruns explore the same cases
settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")


def gram_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Oracle route: eigenvalues of A A^H, sorted descending.

    Deliberately independent of the SVD route used by the library.
    """
    w = np.linalg.eigvalsh(a @ a.conj().T)
    return w[::-1]


def random_restriction(master: int, n: int, p: float, q: float, ensemble: str = "haar"):
    """One masked submatrix with its masks, for oracle cross-checks."""
    seed = RngSeed(master)
    rows = bernoulli_mask(n, q, seed.child(1))
    cols = bernoulli_mask(n, p, seed.child(2))
    base = dft_matrix(n) if ensemble == "dft" else haar_sample(n, seed.child(3))
    return restrict(base, rows, cols), rows, cols


@pytest.fixture(scope="session")
def dft8():
    return dft_matrix(8)
