"""Simulated measurement designs with reproducible noise."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import check_in_box
from .covariogram import covariogram_grid, covariogram_many
from .errors import ConfigurationError, ShapeError
from .geometry import Polygon
from .randstream import NoiseModel, apply_noise
from .spectral import FrequencyGrid, indicator_ft_many

DESIGNS = ("cov_grid", "cov_blaschke", "mod2", "mod_pair")


@dataclass(frozen=True)
class MeasurementSet:
    """Noisy samples for one design, with full provenance metadata.

    Payload layouts:
      cov_grid      (2k+1)^2 grid values, row-major in (x2, x1)
      cov_blaschke  (k, n_reps, 2): per direction i, repetition j, probe m
                    (m=0 at the origin, m=1 at (1/k) u_i)
      mod2          n_half+1 values on {o} ∪ (1/k^γ)Z²_k(+), lexicographic
      mod_pair      (2, n_half+1): two independent modulus copies
    """

    design: str
    k: int
    payload: np.ndarray
    noise: NoiseModel
    seed: int
    gamma: float | None = None
    directions: np.ndarray | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise ConfigurationError(f"unknown design {self.design!r}")
        p = np.asarray(self.payload, dtype=float)
        object.__setattr__(self, "payload", p)
        p.setflags(write=False)
        if self.directions is not None:
            d = np.asarray(self.directions, dtype=float).reshape(-1, 2)
            object.__setattr__(self, "directions", d)

    def require(self, design: str) -> None:
        if self.design != design:
            raise ShapeError(f"expected design {design!r}, got {self.design!r}")


def equally_spaced_directions(m: int) -> np.ndarray:
    """m equally spaced directions on the half-circle, theta_i = i*pi/m."""
    theta = np.pi * np.arange(m) / m
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _check_directions(directions: np.ndarray) -> np.ndarray:
    d = np.asarray(directions, dtype=float).reshape(-1, 2)
    norms = np.hypot(d[:, 0], d[:, 1])
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise ConfigurationError("directions must be unit vectors")
    cross = np.abs(d[:, 0, None] * d[None, :, 1] - d[:, 1, None] * d[None, :, 0])
    np.fill_diagonal(cross, 1.0)
    if cross.min() < 1e-12:
        raise ConfigurationError("directions must be mutually nonparallel")
    return d


def gen_cov_grid(p: Polygon, k: int, noise: NoiseModel, seed: int) -> MeasurementSet:
    """M_ik = g_P(x_ik) + N_ik on the full covariogram grid."""
    grid = covariogram_grid(p, k)
    values = apply_noise(grid.values, noise, seed, f"cov_grid/k{k}")
    return MeasurementSet("cov_grid", k, values, noise, seed)


def gen_cov_blaschke(
    p: Polygon,
    k: int,
    directions: np.ndarray,
    noise: NoiseModel,
    seed: int,
    n_reps: int | None = None,
) -> MeasurementSet:
    """Repeated two-point probes: k^2 repetitions at o and at (1/k)u_i."""
    check_in_box(p)
    d = _check_directions(directions)
    if len(d) < 2:
        raise ConfigurationError("need at least 2 directions")
    reps = k * k if n_reps is None else int(n_reps)
    area = p.area
    g_probe = covariogram_many(p, d / k)
    truth = np.empty((len(d), reps, 2))
    truth[:, :, 0] = area
    truth[:, :, 1] = g_probe[:, None]
    values = apply_noise(truth, noise, seed, f"cov_blaschke/k{k}")
    return MeasurementSet("cov_blaschke", k, values, noise, seed, directions=d)


def gen_mod2(p: Polygon, k: int, gamma: float, noise: NoiseModel, seed: int) -> MeasurementSet:
    """Squared-modulus samples on the half-lattice frequency design."""
    check_in_box(p)
    grid = FrequencyGrid(k=k, gamma=gamma)
    truth = np.abs(indicator_ft_many(p, grid.half_sites)) ** 2
    values = apply_noise(truth, noise, seed, f"mod2/k{k}")
    return MeasurementSet("mod2", k, values, noise, seed, gamma=gamma)


def gen_mod_pair(p: Polygon, k: int, gamma: float, noise: NoiseModel, seed: int) -> MeasurementSet:
    """Two independent modulus samples per frequency site."""
    check_in_box(p)
    grid = FrequencyGrid(k=k, gamma=gamma)
    modulus = np.abs(indicator_ft_many(p, grid.half_sites))
    values = np.stack([
        apply_noise(modulus, noise, seed, f"mod_pair/k{k}/copy1"),
        apply_noise(modulus, noise, seed, f"mod_pair/k{k}/copy2"),
    ])
    return MeasurementSet("mod_pair", k, values, noise, seed, gamma=gamma)
