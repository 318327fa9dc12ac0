"""Exact covariogram evaluation and measurement-lattice sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely

from .bodies import check_in_box
from .errors import ShapeError
from .geometry import Polygon, difference_body, to_shapely


def grid_sites(k: int) -> np.ndarray:
    """All (2k+1)^2 sites of 2C_0^2 ∩ (1/k)Z^2, row-major in (x2, x1).

    Index i = (i2 + k)*(2k+1) + (i1 + k) for the site (i1/k, i2/k).
    """
    coords = np.arange(-k, k + 1) / k
    x2, x1 = np.meshgrid(coords, coords, indexing="ij")
    return np.column_stack([x1.ravel(), x2.ravel()])


def negation_index(k: int) -> np.ndarray:
    """Involutive map i -> index of -x_i on the row-major grid."""
    m = 2 * k + 1
    idx = np.arange(m * m).reshape(m, m)
    return idx[::-1, ::-1].ravel()


@dataclass(frozen=True)
class SampleGrid:
    """Covariogram samples on the cubic array 2C_0^2 ∩ (1/k)Z^2."""

    k: int
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = (2 * self.k + 1) ** 2
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if len(v) != m:
            raise ShapeError(f"grid for k={self.k} needs {m} values, got {len(v)}")
        object.__setattr__(self, "values", v)
        v.setflags(write=False)

    @property
    def sites(self) -> np.ndarray:
        return grid_sites(self.k)

    def value_at_origin(self) -> float:
        m = 2 * self.k + 1
        return float(self.values[(m * m - 1) // 2])


def covariogram_at(p: Polygon, x) -> float:
    """g_P(x) = area(P ∩ (P + x)).

    Delegates to the batch path so single-point and grid evaluations are
    bitwise identical.
    """
    x = np.asarray(x, dtype=float)
    return float(covariogram_many(p, x[None, :])[0])


def covariogram_many(p: Polygon, xs: np.ndarray) -> np.ndarray:
    """Vectorized g_P at many displacement vectors."""
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    if p.is_degenerate or len(xs) == 0:
        return np.zeros(len(xs))
    # evaluate at the lexicographically positive representative of {x, -x}
    # so that evenness g(x) = g(-x) holds bitwise, not just to rounding
    flip = (xs[:, 0] < 0) | ((xs[:, 0] == 0) & (xs[:, 1] < 0))
    xs = np.where(flip[:, None], -xs, xs)
    out = np.zeros(len(xs))
    # cheap support prefilter: g vanishes outside the difference body
    dk = difference_body(p)
    v = dk.vertices
    e = np.roll(v, -1, axis=0) - v
    inside = np.ones(len(xs), dtype=bool)
    for j in range(len(v)):
        d = xs - v[j]
        inside &= e[j, 0] * d[:, 1] - e[j, 1] * d[:, 0] >= -1e-12
    if np.any(inside):
        base = to_shapely(p)
        translated = shapely.polygons(p.vertices[None, :, :] + xs[inside, None, :])
        out[inside] = shapely.area(shapely.intersection(base, translated))
    return out


def covariogram_grid(p: Polygon, k: int) -> SampleGrid:
    """Exact covariogram at all grid sites; body must sit inside C_0^2."""
    check_in_box(p)
    sites = grid_sites(k)
    neg = negation_index(k)
    m = 2 * k + 1
    n_sites = m * m
    half = np.arange(n_sites) <= neg[np.arange(n_sites)]
    values = np.zeros(n_sites)
    values[half] = covariogram_many(p, sites[half])
    values[neg[half]] = values[half]
    return SampleGrid(k=k, values=values, meta={"body_area": p.area})
