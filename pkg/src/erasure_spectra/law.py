"""Closed-form limiting spectral law for unitary matrices under random erasure.

For column-erase probability p and row-erase probability q, the eigenvalues of
the doubly projected Gram matrix follow, in the large-n limit, a law with
three pieces: a point mass at 0, a point mass at 1 present only when
p + q < 1, and a continuous arch supported on [r_minus, r_plus] with

    r_minus = (sqrt(p(1-q)) - sqrt(q(1-p)))^2
    r_plus  = (sqrt(p(1-q)) + sqrt(q(1-p)))^2.

Two normalizations are exposed.  The "full" law describes all n eigenvalues,
zeros included.  The "theorem" law describes only the min(#rows, #cols)
largest eigenvalues: the mass at 0 is removed and everything else is rescaled
by 1/(1 - max(p, q)).  Monte Carlo spectra of restrictions are compared
against the theorem law.

Square roots of complex numbers are taken with argument in [0, pi), i.e. in
the closed upper half plane; this is the branch under which the eta transform
below solves its defining fixed-point equation and the Stieltjes inversion
recovers a nonnegative density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError, InvalidParameterError, PoleError

NORM_FULL = "full"
NORM_THEOREM = "theorem"
NORMALIZATIONS = (NORM_FULL, NORM_THEOREM)

DEFAULT_QUAD_NODES = 129

# fp slack under which a computed upper edge is indistinguishable from 1
_EDGE_SNAP = 1e-13


@dataclass(frozen=True)
class LawParams:
    """Erasure probability pair: p for columns, q for rows, both in (0, 1)."""

    p: float
    q: float

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q)):
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise InvalidParameterError(
                    f"{name} must lie strictly inside (0, 1), got {value!r}"
                )


@dataclass(frozen=True)
class LawEdges:
    """Endpoints of the continuous support; 0 <= r_minus < r_plus <= 1."""

    r_minus: float
    r_plus: float


def edges(params: LawParams) -> LawEdges:
    """Support endpoints of the continuous part.

    r_minus vanishes exactly when p = q, and r_plus reaches 1 exactly when
    p + q = 1.
    """
    a = math.sqrt(params.p * (1.0 - params.q))
    b = math.sqrt(params.q * (1.0 - params.p))
    r_minus = (a - b) ** 2
    r_plus = (a + b) ** 2
    if r_plus > 1.0 or 1.0 - r_plus < _EDGE_SNAP:
        # (a+b)^2 <= 1 analytically; allow only fp dust before snapping
        if r_plus > 1.0 + 16 * _EDGE_SNAP:
            raise InvalidParameterError(f"upper edge {r_plus} exceeds 1")
        r_plus = 1.0
    return LawEdges(r_minus, r_plus)


def _sqrt_upper(w: np.ndarray) -> np.ndarray:
    # principal sqrt has argument in (-pi/2, pi/2]; negate the lower-half
    # results to land in [0, pi)
    s = np.sqrt(np.asarray(w, dtype=complex))
    flip = (s.imag < 0) | ((s.imag == 0) & (s.real < 0))
    return np.where(flip, -s, s)


def eta(params: LawParams, z):
    """Eta transform E[1/(1 + zX)] of the full law, in closed form.

    Accepts scalars or arrays.  The transform has a pole at z = -1 whenever
    the law carries mass at 1; evaluation there is always refused.
    """
    zs = np.asarray(z, dtype=complex)
    if np.any(zs == -1):
        raise PoleError("eta has a pole at z = -1")
    p, q = params.p, params.q
    root = _sqrt_upper(1 + (2 * (p + q) - 4 * p * q) * zs + ((p - q) ** 2) * zs * zs)
    out = (1 + (p + q) * zs + root) / (2 * (1 + zs))
    if np.ndim(z) == 0:
        return complex(out)
    return out


def eta_fixed_point_residual(params: LawParams, z: complex) -> float:
    """Defect |eta(z) - eta_Q(z - z*p/eta(z))| of the self-consistency equation.

    eta_Q(w) = (1 + q*w)/(1 + w) is the eta transform of a {0,1}-valued
    variable taking 1 with probability 1 - q: the zero eigenvalues contribute
    the q*w term.  The closed form in :func:`eta` is a root of the quadratic
    this equation generates, so away from poles the residual is pure
    floating-point noise.
    """
    e = eta(params, complex(z))
    if e == 0:
        raise PoleError(f"eta({z}) = 0; the fixed-point map is undefined there")
    w = z - z * params.p / e
    if w == -1:
        raise PoleError(f"intermediate argument w = {w} hits the pole of eta_Q")
    return abs(e - (1 + params.q * w) / (1 + w))


def stieltjes(params: LawParams, z):
    """Stieltjes transform E[1/(X - z)] of the full law on the upper half plane."""
    zs = np.asarray(z, dtype=complex)
    if np.any(zs.imag <= 0):
        raise DomainError("stieltjes is defined for Im z > 0 only")
    out = -(1.0 / zs) * eta(params, -1.0 / zs)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def mean_eigenvalue_full(params: LawParams) -> float:
    """First moment of the full law, (1-p)(1-q) in closed form."""
    return (1.0 - params.p) * (1.0 - params.q)


@lru_cache(maxsize=32)
def _gauss_rule(nodes: int):
    x, w = roots_legendre(nodes)
    return x, w


_NODE_TIERS = (DEFAULT_QUAD_NODES, 257, 513, 1025, 2049, 4097, 8193, 16385)


def _auto_nodes(r_minus: float, r_plus: float) -> int:
    # After x = r_minus*cos^2(t) + r_plus*sin^2(t) the integrand is analytic,
    # but poles of 1/x and 1/(1-x) sit at imaginary distance sqrt(gap/span)
    # from the contour's endpoints.  Escalate the rule so the Gauss-Legendre
    # error exp(-4*N*sqrt(2*delta/pi)) stays near 1e-12.
    span = r_plus - r_minus
    gaps = []
    if r_minus > 0:
        gaps.append(r_minus / span)
    if r_plus < 1:
        gaps.append((1.0 - r_plus) / span)
    if not gaps:
        return _NODE_TIERS[0]
    delta = math.sqrt(min(gaps))
    if delta <= 0:
        return _NODE_TIERS[-1]
    need = 8.8 / math.sqrt(delta)
    for tier in _NODE_TIERS:
        if tier >= need:
            return tier
    return _NODE_TIERS[-1]


def _arch_integral(
    r_minus: float, r_plus: float, theta_hi, moment: int = 0, nodes: int | None = None
):
    """Mass (or moment) of the unnormalized arch over theta in [0, theta_hi].

    Uses the substitution x = r_minus*cos^2(theta) + r_plus*sin^2(theta),
    which absorbs both inverse-square-root endpoint singularities; x and 1 - x
    are evaluated as convex combinations so neither cancels near the edges.
    ``theta_hi`` may be a scalar or an array; the result matches its shape.
    """
    span = r_plus - r_minus
    theta_hi = np.asarray(theta_hi, dtype=float)
    if span <= 0:
        return np.zeros_like(theta_hi)
    t, w = _gauss_rule(nodes or _auto_nodes(r_minus, r_plus))
    half = 0.5 * theta_hi[..., None]
    theta = half * (t + 1.0)
    s2 = np.sin(theta) ** 2
    c2 = np.cos(theta) ** 2
    x = r_minus * c2 + r_plus * s2
    one_minus_x = (1.0 - r_minus) * c2 + (1.0 - r_plus) * s2
    # nodes are interior, so x and 1-x vanish only when theta_hi itself is 0;
    # that 0/0 is masked out below
    with np.errstate(invalid="ignore", divide="ignore"):
        g = (span * span) * s2 * c2 / (np.pi * x * one_minus_x)
    if moment == 1:
        g = g * x
    elif moment != 0:
        raise InvalidParameterError(f"unsupported moment {moment}")
    return np.where(theta_hi > 0, np.sum(w * g, axis=-1) * 0.5 * theta_hi, 0.0)


@dataclass(frozen=True)
class DensityCurve:
    """Continuous density sampled on a grid inside the support, plus atoms."""

    grid: np.ndarray
    values: np.ndarray
    atom0: float
    atom1: float


@dataclass(frozen=True)
class SpectralLaw:
    """Evaluable limiting distribution for one (p, q) pair and normalization.

    normalization "full" covers all eigenvalues of the projected Gram matrix;
    "theorem" covers only the min(#rows, #cols) largest, with the zero
    eigenvalues dropped and the remaining mass rescaled to 1.
    """

    params: LawParams
    normalization: str = NORM_THEOREM

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise InvalidParameterError(
                f"normalization must be one of {NORMALIZATIONS}, got {self.normalization!r}"
            )

    @property
    def edges(self) -> LawEdges:
        return edges(self.params)

    @property
    def _scale(self) -> float:
        if self.normalization == NORM_FULL:
            return 1.0
        return 1.0 / (1.0 - max(self.params.p, self.params.q))

    @property
    def atom0(self) -> float:
        """Mass at 0: the asymptotic share of zero eigenvalues (full law only)."""
        if self.normalization == NORM_FULL:
            return max(self.params.p, self.params.q)
        return 0.0

    @property
    def atom1(self) -> float:
        """Mass at 1, present only when p + q < 1."""
        return max(0.0, 1.0 - (self.params.p + self.params.q)) * self._scale

    def atoms(self) -> tuple[float, float]:
        return (self.atom0, self.atom1)

    def density(self, x):
        """Continuous part of the density at points of (0, 1); atoms excluded.

        Zero outside [r_minus, r_plus].  Querying x <= 0 or x >= 1 is a
        domain error; the point masses are reported by :meth:`atoms`.
        """
        xs = np.asarray(x, dtype=float)
        if np.any((xs <= 0.0) | (xs >= 1.0)):
            raise DomainError("density is defined on the open interval (0, 1)")
        e = self.edges
        out = np.zeros_like(xs)
        inside = (xs > e.r_minus) & (xs < e.r_plus)
        xi = xs[inside]
        out[inside] = (
            np.sqrt((1.0 - e.r_minus / xi) * (e.r_plus / xi - 1.0))
            / (2.0 * np.pi * (1.0 - xi))
        ) * self._scale
        if np.ndim(x) == 0:
            return float(out)
        return out

    def singular_density(self, x):
        """Density of the singular-value law: 2x times the density at x^2.

        Supported on [sqrt(r_minus), sqrt(r_plus)]; same normalization and
        atoms as the eigenvalue law.
        """
        xs = np.asarray(x, dtype=float)
        if np.any((xs <= 0.0) | (xs >= 1.0)):
            raise DomainError("singular_density is defined on the open interval (0, 1)")
        out = 2.0 * xs * self.density(xs * xs)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def _theta_of(self, xs: np.ndarray) -> np.ndarray:
        e = self.edges
        span = e.r_plus - e.r_minus
        frac = np.clip((xs - e.r_minus) / span, 0.0, 1.0)
        return np.arcsin(np.sqrt(frac))

    def cdf(self, x, nodes: int | None = None):
        """Distribution function on [0, 1], right-continuous.

        The atom at 0 is included from x = 0 on and the atom at 1 exactly at
        x = 1, matching the usual CDF convention for KS comparisons.
        """
        xs = np.asarray(x, dtype=float)
        if np.any((xs < 0.0) | (xs > 1.0)):
            raise DomainError("cdf is defined on [0, 1]")
        e = self.edges
        out = np.full_like(xs, self.atom0, dtype=float)
        out += (
            _arch_integral(e.r_minus, e.r_plus, self._theta_of(xs), nodes=nodes)
            * self._scale
        )
        out += self.atom1 * (xs >= 1.0)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def continuous_mass(self, nodes: int | None = None) -> float:
        """Quadrature mass of the arch under this law's normalization."""
        e = self.edges
        return float(
            _arch_integral(e.r_minus, e.r_plus, 0.5 * np.pi, nodes=nodes) * self._scale
        )

    def continuous_mean(self, nodes: int | None = None) -> float:
        """Quadrature first moment carried by the arch."""
        e = self.edges
        return float(
            _arch_integral(e.r_minus, e.r_plus, 0.5 * np.pi, moment=1, nodes=nodes)
            * self._scale
        )

    def mean(self) -> float:
        """First moment in closed form: (1-p)(1-q), rescaled for the theorem law."""
        return mean_eigenvalue_full(self.params) * self._scale

    def sample_curve(self, grid_size: int) -> DensityCurve:
        """Density on a Chebyshev-clustered grid spanning the support.

        Endpoints are pulled inside [1e-9, 1 - 1e-9] so the curve stays finite
        when an edge sits at 0 or 1, where the density diverges.
        """
        if grid_size < 2:
            raise InvalidParameterError(f"grid_size must be >= 2, got {grid_size}")
        e = self.edges
        lo = max(1e-9, e.r_minus)
        hi = min(1.0 - 1e-9, e.r_plus)
        k = np.arange(grid_size)
        grid = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * k / (grid_size - 1))
        grid[0], grid[-1] = lo, hi
        return DensityCurve(grid, self.density(grid), self.atom0, self.atom1)
