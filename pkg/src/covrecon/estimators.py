"""First-stage estimators: brightness difference quotients, the
Gasser-Muller kernel estimator with threshold hull, and the phase-retrieval
front ends."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .covariogram import SampleGrid, grid_sites
from .errors import ConfigurationError, ShapeError
from .geometry import Polygon
from .measurement import MeasurementSet
from .spectral import FrequencyGrid, synthesize_partial_sum

_KERNELS = ("uniform_box", "product_epanechnikov")


def _phi1(name: str, t: np.ndarray) -> np.ndarray:
    """1D factor of the product kernel, supported in [-1/2, 1/2]."""
    t = np.asarray(t, dtype=float)
    if name == "uniform_box":
        return np.where(np.abs(t) <= 0.5, 1.0, 0.0)
    return np.where(np.abs(t) <= 0.5, 1.5 * (1.0 - 4.0 * t * t), 0.0)


def _phi1_cdf(name: str, t: np.ndarray) -> np.ndarray:
    """Antiderivative of the 1D factor, clipped to the support."""
    t = np.clip(np.asarray(t, dtype=float), -0.5, 0.5)
    if name == "uniform_box":
        return t + 0.5
    return 0.5 + 1.5 * t - 2.0 * t ** 3


@dataclass(frozen=True)
class KernelSpec:
    """Kernel phi (unit integral, support in C_0^2) with schedule values."""

    phi: str = "uniform_box"
    epsilon: float = 0.1
    delta: float = 0.1

    def __post_init__(self):
        if self.phi not in _KERNELS:
            raise ConfigurationError(f"unknown kernel {self.phi!r}")
        if self.epsilon <= 0:
            raise ConfigurationError("bandwidth epsilon must be > 0")
        if self.delta <= 0:
            raise ConfigurationError("threshold delta must be > 0")
        total, _ = quad(lambda t: float(_phi1(self.phi, t)), -0.5, 0.5)
        if abs(total - 1.0) > 1e-10:
            raise ConfigurationError(f"kernel does not integrate to 1: {total}")


def _axis_weights(spec: KernelSpec, k: int, x_axis: np.ndarray) -> np.ndarray:
    """W[a, b] = integral of phi_eps(x_a - z) over the b-th design cell (1D).

    Cells are the intervals of length 1/k centered at the lattice
    coordinates; the 2D cell integral is the product of the two axis
    weights (product kernel).
    """
    coords = np.arange(-k, k + 1) / k
    lo = coords - 0.5 / k
    hi = coords + 0.5 / k
    e = spec.epsilon
    x = np.asarray(x_axis, dtype=float)[:, None]
    return _phi1_cdf(spec.phi, (x - lo[None, :]) / e) - _phi1_cdf(
        spec.phi, (x - hi[None, :]) / e
    )


def _grid_values(ms_or_grid) -> tuple[int, np.ndarray]:
    if isinstance(ms_or_grid, SampleGrid):
        return ms_or_grid.k, ms_or_grid.values
    ms_or_grid.require("cov_grid")
    return ms_or_grid.k, ms_or_grid.payload


def kernel_estimate_at(ms_or_grid, spec: KernelSpec, x) -> float:
    """Gasser-Muller estimate g_k(x) = sum_i M_i * (cell integral of phi_eps)."""
    k, values = _grid_values(ms_or_grid)
    x = np.asarray(x, dtype=float).reshape(2)
    m = 2 * k + 1
    w1 = _axis_weights(spec, k, np.array([x[0]]))[0]
    w2 = _axis_weights(spec, k, np.array([x[1]]))[0]
    grid = values.reshape(m, m)  # row-major in (x2, x1)
    return float(w2 @ grid @ w1)


def kernel_estimate_grid(ms_or_grid, spec: KernelSpec) -> np.ndarray:
    """g_k at every lattice site, flattened in grid order."""
    k, values = _grid_values(ms_or_grid)
    m = 2 * k + 1
    coords = np.arange(-k, k + 1) / k
    w = _axis_weights(spec, k, coords)  # same for both axes
    grid = values.reshape(m, m)
    return (w @ grid @ w.T).ravel()


def threshold_difference_hull(ms_or_grid, spec: KernelSpec) -> Polygon:
    """S_k = {x_ik : g_k >= delta_k};  Q_k = (1/2)(conv S_k + (-conv S_k))."""
    k, _ = _grid_values(ms_or_grid)
    gk = kernel_estimate_grid(ms_or_grid, spec)
    sites = grid_sites(k)
    s = sites[gk >= spec.delta]
    if len(s) == 0:
        return Polygon.empty()
    hull = Polygon.convex_hull(s, allow_degenerate=True)
    v = hull.vertices
    diffs = 0.5 * (v[:, None, :] - v[None, :, :]).reshape(-1, 2)
    return Polygon.convex_hull(diffs, allow_degenerate=True)


def brightness_from_cov_diffs(ms: MeasurementSet) -> list[tuple[np.ndarray, float]]:
    """Sample means y_ik of k(M^(1) - M^(2)): brightness estimates b(u_i)."""
    ms.require("cov_blaschke")
    if ms.payload.ndim != 3 or ms.payload.shape[2] != 2:
        raise ShapeError("cov_blaschke payload must have shape (k, reps, 2)")
    diffs = ms.k * (ms.payload[:, :, 0] - ms.payload[:, :, 1])
    y = diffs.mean(axis=1)
    return [(u, float(v)) for u, v in zip(ms.directions, y)]


def _mod2_values(ms: MeasurementSet) -> tuple[FrequencyGrid, np.ndarray]:
    ms.require("mod2")
    if ms.gamma is None:
        raise ShapeError("mod2 measurement set is missing gamma")
    grid = FrequencyGrid(k=ms.k, gamma=ms.gamma)
    if ms.payload.ndim != 1 or len(ms.payload) != grid.n_half + 1:
        raise ShapeError(
            f"mod2 payload needs {grid.n_half + 1} values, got {ms.payload.shape}"
        )
    return grid, ms.payload


def phase_grid_estimates(ms: MeasurementSet) -> SampleGrid:
    """Synthesize M_k at every covariogram grid site: a drop-in SampleGrid."""
    grid, values = _mod2_values(ms)
    xs = grid_sites(ms.k)
    synth = synthesize_partial_sum(grid, values, xs)
    return SampleGrid(k=ms.k, values=synth, meta={"gamma": ms.gamma, "seed": ms.seed})


def combine_mod_pairs(ms: MeasurementSet) -> MeasurementSet:
    """Per-site product of the two independent modulus copies."""
    ms.require("mod_pair")
    if ms.payload.ndim != 2 or ms.payload.shape[0] != 2:
        raise ShapeError("mod_pair payload must have shape (2, n_sites)")
    product = ms.payload[0] * ms.payload[1]
    return MeasurementSet("mod2", ms.k, product, ms.noise, ms.seed, gamma=ms.gamma)


def brightness_from_synthesis(
    ms: MeasurementSet, h_k: float, directions: np.ndarray
) -> list[tuple[np.ndarray, float]]:
    """y_ik = (M_k(o) - M_k(h_k u_i)) / h_k from squared-modulus samples."""
    if h_k <= 0:
        raise ConfigurationError("h_k must be > 0")
    grid, values = _mod2_values(ms)
    d = np.asarray(directions, dtype=float).reshape(-1, 2)
    pts = np.concatenate([[(0.0, 0.0)], h_k * d])
    synth = synthesize_partial_sum(grid, values, pts)
    y = (synth[0] - synth[1:]) / h_k
    return [(u, float(v)) for u, v in zip(d, y)]


# -- schedules (first-stage kernel parameters) ------------------------------

def diff_schedule(k: int, alpha: float, bernstein: bool = True) -> tuple[float, float]:
    """(epsilon_k, delta_k) for the threshold stage at refinement k.

    The moment-regime threshold is delta_k = k^{-(n-3*alpha*n-3/2)/4}; under
    sub-Gaussian (Bernstein-type) noise the much smaller
    delta_k = k^{-n(1-alpha)/2} log k is admissible and is the default.
    """
    n = 2
    if not 0 < alpha < 1 / 3 - 1 / (2 * n):
        raise ConfigurationError(
            f"alpha must lie in (0, {1/3 - 1/(2*n):.6f}), got {alpha}"
        )
    eps_k = k ** (-alpha)
    if bernstein:
        delta_k = k ** (-n * (1 - alpha) / 2) * np.log(k)
    else:
        delta_k = k ** (-(n - 3 * alpha * n - 3 / 2) / 4)
    return float(eps_k), float(delta_k)
