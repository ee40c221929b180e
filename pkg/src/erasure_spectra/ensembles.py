"""Unitary matrix ensembles and Bernoulli index-erasure masks.

Every operation here is a pure function of its explicit inputs.  Randomness
enters only through :class:`RngSeed`, a (master, stream) pair that pins the
counter-based generator, so draws are reproducible and independent streams can
be handed to parallel workers without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, InvalidParameterError

_MASK64 = (1 << 64) - 1
# splitmix64 constants (Steele, Lea, Flood 2014); fixed so independent
# implementations of the seeding scheme produce identical streams
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(*words: int) -> int:
    """Fold integer words into one 64-bit value with a splitmix64 avalanche."""
    acc = 0
    for w in words:
        acc = (acc + _GAMMA + (w & _MASK64)) & _MASK64
        acc = ((acc ^ (acc >> 30)) * _MIX1) & _MASK64
        acc = ((acc ^ (acc >> 27)) * _MIX2) & _MASK64
        acc ^= acc >> 31
    return acc


@dataclass(frozen=True)
class RngSeed:
    """Master seed plus a stream discriminator.

    The pair fully determines every draw of the consuming operation.  Derive
    sub-streams with :meth:`child` so that, for example, the matrix draw and
    the two mask draws of one trial never share a generator.
    """

    master: int
    stream: int = 0

    def child(self, tag: int) -> "RngSeed":
        return RngSeed(self.master, mix64(self.stream, tag))

    def generator(self) -> np.random.Generator:
        """Counter-based generator keyed by the mixed (master, stream) pair."""
        hi = mix64(self.master, self.stream)
        lo = mix64(self.stream, ~self.master & _MASK64)
        return np.random.Generator(np.random.Philox(key=(hi << 64) | lo))


@dataclass(frozen=True)
class ProjectionMask:
    """Surviving indices of a diagonal 0/1 projection on an n-dimensional space.

    ``kept`` is strictly increasing and may be empty or the full index range;
    degenerate masks are representable, consumers decide how to treat them.
    """

    n: int
    kept: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidDimensionError(f"mask dimension must be nonnegative, got {self.n}")
        kept = tuple(int(i) for i in self.kept)
        if any(b <= a for a, b in zip(kept, kept[1:])):
            raise InvalidParameterError("mask indices must be strictly increasing")
        if kept and (kept[0] < 0 or kept[-1] >= self.n):
            raise InvalidParameterError(f"mask indices must lie in [0, {self.n})")
        object.__setattr__(self, "kept", kept)

    @property
    def size(self) -> int:
        return len(self.kept)

    def indices(self) -> np.ndarray:
        return np.asarray(self.kept, dtype=np.intp)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix; entry (j, k) is exp(-2*pi*i*j*k/n) / sqrt(n).

    Indices are zero-based.  The product j*k is reduced mod n before the
    angle is formed, which keeps every phase in [0, 2*pi) and the matrix
    unitary to near machine precision even for n in the thousands.
    """
    if n < 1:
        raise InvalidDimensionError(f"dft_matrix needs n >= 1, got {n}")
    idx = np.arange(n, dtype=np.int64)
    jk = np.outer(idx, idx) % n
    return np.exp((-2j * np.pi / n) * jk) / np.sqrt(n)


def haar_sample(n: int, seed: RngSeed) -> np.ndarray:
    """Draw an n-by-n unitary matrix from the Haar (uniform) distribution.

    A complex Ginibre matrix is QR-factorized and each column of Q is rotated
    by the phase of the matching diagonal entry of R, making that diagonal
    positive.  The raw Q factor alone is not Haar; the factorization's phase
    choices bias it, and the rotation is the standard correction.
    """
    if n < 1:
        raise InvalidDimensionError(f"haar_sample needs n >= 1, got {n}")
    g = _complex_ginibre(seed.generator(), n)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _complex_ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    # Box-Muller pairs, scaled by 1/sqrt(2) per component, give i.i.d.
    # unit-variance complex normals.
    u1 = rng.random((n, n))
    u2 = rng.random((n, n))
    radius = np.sqrt(-np.log1p(-u1))  # -log(1 - u) never sees log(0)
    angle = 2.0 * np.pi * u2
    return radius * (np.cos(angle) + 1j * np.sin(angle))


def bernoulli_mask(n: int, erase_prob: float, seed: RngSeed) -> ProjectionMask:
    """Keep each of n indices independently with probability 1 - erase_prob.

    erase_prob must lie strictly inside (0, 1); at the endpoints the projected
    matrix degenerates to zero or to the unerased matrix.
    """
    if n < 1:
        raise InvalidDimensionError(f"bernoulli_mask needs n >= 1, got {n}")
    if not (0.0 < erase_prob < 1.0):
        raise InvalidParameterError(
            f"erase_prob must lie strictly inside (0, 1), got {erase_prob}"
        )
    kept = np.flatnonzero(seed.generator().random(n) >= erase_prob)
    return ProjectionMask(n, tuple(int(i) for i in kept))


def restrict(m: np.ndarray, rows: ProjectionMask, cols: ProjectionMask) -> np.ndarray:
    """Submatrix of m with only the masked rows and columns.

    An empty mask yields a 0-by-k (or j-by-0) matrix; callers are expected to
    check the shape before decomposing it.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape != (rows.n, cols.n):
        raise InvalidDimensionError(
            f"mask dimensions ({rows.n}, {cols.n}) do not match matrix shape {m.shape}"
        )
    return m[np.ix_(rows.indices(), cols.indices())]
