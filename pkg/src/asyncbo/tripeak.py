"""TriPeak synthetic ground truth.

A sum of three isotropic Gaussian bumps whose centers all sit on the unit
cube diagonal, rescaled so the response range shrinks as 1/D:

    f(x) = c * sum_j b_j * exp(-a_j^2 * sum_i (x_i - mu_j)^2),
    c    = 1 / (D * (b_1 + b_2 + b_3))

with peak widths a = (4, 1.5, 4), centers mu = (0.2, 0.5, 0.8) and heights
b = (0.3, 0.2, 0.6) per dimension. The domain is the unit hypercube.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PEAK_WIDTHS = (4.0, 1.5, 4.0)
PEAK_CENTERS = (0.2, 0.5, 0.8)
PEAK_HEIGHTS = (0.3, 0.2, 0.6)

#: Lower bound of the response range: f is strictly positive and decays
#: toward 0 away from the peaks.
RESPONSE_FLOOR = 0.0

_GRID_POINTS = 100_000
_TERNARY_TOL = 1e-10


@dataclass(frozen=True)
class TriPeakSpec:
    """Ground-truth definition: dimension, fixed peak constants, noise level."""

    dimension: int
    noise_std: float = 0.0
    widths: tuple[float, float, float] = PEAK_WIDTHS
    centers: tuple[float, float, float] = PEAK_CENTERS
    heights: tuple[float, float, float] = PEAK_HEIGHTS
    c: float = field(init=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")
        object.__setattr__(self, "c", 1.0 / (self.dimension * sum(self.heights)))


@dataclass
class NoiseModel:
    """Additive Gaussian observation noise drawn from an owned stream."""

    noise_std: float
    rng: np.random.Generator

    def draw(self) -> float:
        # Always consume one draw so observation streams stay aligned
        # across noise levels; exactly zero when noise_std is zero.
        return self.noise_std * float(self.rng.standard_normal())


def _check_domain(spec: TriPeakSpec, X: np.ndarray) -> None:
    if X.shape[-1] != spec.dimension:
        raise ValueError(
            f"point has dimension {X.shape[-1]}, expected {spec.dimension}"
        )
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ValueError("point lies outside the unit hypercube")


def tripeak_true(spec: TriPeakSpec, x) -> float | np.ndarray:
    """Noiseless response at ``x``; accepts one point (D,) or a batch (m, D).

    Coordinates are sorted before summation so that permutation symmetry
    holds exactly in floating point, not just mathematically.
    """
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    _check_domain(spec, X)
    Xs = np.sort(X, axis=1)
    total = np.zeros(X.shape[0])
    for a, mu, b in zip(spec.widths, spec.centers, spec.heights):
        sq = np.sum((Xs - mu) ** 2, axis=1)
        total += b * np.exp(-(a * a) * sq)
    out = spec.c * total
    return float(out[0]) if single else out


def tripeak_observe(spec: TriPeakSpec, x, noise: NoiseModel) -> float:
    """One noisy measurement: true response plus a single Gaussian draw."""
    return tripeak_true(spec, np.asarray(x, dtype=float)) + noise.draw()


def _diagonal_value(spec: TriPeakSpec, t: np.ndarray) -> np.ndarray:
    """f(t, t, ..., t); the squared distance to each center scales by D."""
    d = spec.dimension
    total = np.zeros_like(t)
    for a, mu, b in zip(spec.widths, spec.centers, spec.heights):
        total += b * np.exp(-(a * a) * d * (t - mu) ** 2)
    return spec.c * total


def global_optimum(spec: TriPeakSpec) -> tuple[np.ndarray, float]:
    """Numeric maximizer of the noiseless response.

    Every peak center lies on the diagonal x_i = const and the function is
    a sum of isotropic bumps, so all interior critical points are diagonal
    points; a dense 1-D scan plus ternary refinement finds the maximizer.
    """
    if spec.dimension > 10:
        raise ValueError("diagonal scan supported up to dimension 10")
    t = np.linspace(0.0, 1.0, _GRID_POINTS)
    values = _diagonal_value(spec, t)
    i = int(np.argmax(values))
    lo = t[max(i - 1, 0)]
    hi = t[min(i + 1, _GRID_POINTS - 1)]
    while hi - lo > _TERNARY_TOL:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1, v2 = _diagonal_value(spec, np.array([m1, m2]))
        if v1 < v2:
            lo = m1
        else:
            hi = m2
    t_star = 0.5 * (lo + hi)
    x_star = np.full(spec.dimension, t_star)
    return x_star, float(tripeak_true(spec, x_star))
