"""Fourier transforms of polygon indicators and partial-sum synthesis.

The frequency design follows the covariogram lattice: sample sites x_ik on
2C_0^2 ∩ (1/k)Z^2 correspond to frequencies z_ik = k^{1-γ} x_ik, i.e. the
scaled integer lattice (1/k^γ)Z^2 restricted to [-k, k]^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import check_in_box
from .covariogram import covariogram_many, grid_sites
from .errors import ConfigurationError, ShapeError
from .geometry import Polygon, polygon_metrics, surface_area_measure


def half_lattice(k: int) -> np.ndarray:
    """Integer points of [-k,k]^2 that are lexicographically positive.

    A point (m1, m2) is included when m1 > 0, or m1 = 0 and m2 > 0; this
    satisfies the half-array property (disjoint from its negation, union
    with the negation and the origin gives the full lattice).  Points are
    listed in lexicographic order.
    """
    pts = [(m1, m2)
           for m1 in range(-k, k + 1)
           for m2 in range(-k, k + 1)
           if m1 > 0 or (m1 == 0 and m2 > 0)]
    return np.array(pts, dtype=float)


@dataclass(frozen=True)
class FrequencyGrid:
    """Half-lattice frequency sites {o} ∪ (1/k^γ)Z²_k(+)."""

    k: int
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ConfigurationError(f"gamma must lie in (0,1), got {self.gamma}")

    @property
    def n_half(self) -> int:
        return ((2 * self.k + 1) ** 2 - 1) // 2

    @property
    def half_sites(self) -> np.ndarray:
        """(n_half + 1, 2) frequencies; row 0 is the origin."""
        scale = self.k ** (-self.gamma)
        return np.concatenate([[(0.0, 0.0)], scale * half_lattice(self.k)])


def indicator_ft_many(p: Polygon, xis: np.ndarray) -> np.ndarray:
    """Closed-form ∫_P e^{-i ξ·x} dx at many frequencies.

    By the divergence theorem the integral reduces to edge terms
    (i/|ξ|²) Σ_e (ξ·n_e) L_e e^{-i ξ·m_e} sinc(ξ·(b-a)/(2π)) with m_e the
    edge midpoint; np.sinc covers the parallel-edge removable singularity.
    """
    xis = np.asarray(xis, dtype=float).reshape(-1, 2)
    area, _ = polygon_metrics(p)
    m = surface_area_measure(p)
    v = p.vertices
    edges = np.roll(v, -1, axis=0) - v
    mids = v + 0.5 * edges

    sq = np.einsum("ij,ij->i", xis, xis)
    out = np.empty(len(xis), dtype=complex)
    zero = sq == 0.0
    out[zero] = area
    nz = ~zero
    if np.any(nz):
        xi = xis[nz]
        s = xi @ edges.T                       # (nxi, nedge)
        phase = np.exp(-1j * (xi @ mids.T))
        weight = (xi @ m.normals.T) * m.masses  # (ξ·n_e) L_e
        total = np.sum(weight * phase * np.sinc(s / (2 * np.pi)), axis=1)
        out[nz] = 1j * total / sq[nz]
    return out


def indicator_ft(p: Polygon, xi) -> complex:
    return complex(indicator_ft_many(p, np.asarray(xi, float).reshape(1, 2))[0])


def squared_modulus(p: Polygon, xi) -> float:
    return float(abs(indicator_ft(p, xi)) ** 2)


def squared_modulus_many(p: Polygon, xis: np.ndarray) -> np.ndarray:
    return np.abs(indicator_ft_many(p, xis)) ** 2


def synthesize_partial_sum(grid: FrequencyGrid, half_values, xs) -> np.ndarray:
    """Square partial sum (1/(2πk^γ)²) Σ_j cos(z_j·x) v_j at points xs.

    half_values holds the origin value followed by the half-lattice values;
    the even extension v_{-j} = v_j is implicit (cosine symmetry).
    """
    half_values = np.asarray(half_values, dtype=float).reshape(-1)
    if len(half_values) != grid.n_half + 1:
        raise ShapeError(
            f"need {grid.n_half + 1} half-lattice values, got {len(half_values)}"
        )
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    sites = grid.half_sites
    coef = 1.0 / (2 * np.pi * grid.k ** grid.gamma) ** 2
    # origin counted once, each half site stands for itself and its negation
    out = np.empty(len(xs))
    chunk = 4096
    for lo in range(0, len(xs), chunk):
        x = xs[lo:lo + chunk]
        c = np.cos(x @ sites[1:].T)
        out[lo:lo + chunk] = half_values[0] + 2.0 * (c @ half_values[1:])
    return coef * out


def synthesis_residual(p: Polygon, k: int, gamma: float) -> float:
    """max_i |M_k(x_ik) - g_P(x_ik)| with exact ĝ values: the realized d_k."""
    check_in_box(p)
    grid = FrequencyGrid(k=k, gamma=gamma)
    values = squared_modulus_many(p, grid.half_sites)
    xs = grid_sites(k)
    synth = synthesize_partial_sum(grid, values, xs)
    exact = covariogram_many(p, xs)
    return float(np.max(np.abs(synth - exact)))
