"""Independent brute-force references for tests.

Implemented without calling the modules they validate: geometry is limited
to point-in-polygon half-plane tests and raw vertex arithmetic.
"""

from __future__ import annotations

import warnings

import numpy as np


def _vertices(p) -> np.ndarray:
    return np.asarray(getattr(p, "vertices", p), dtype=float).reshape(-1, 2)


def _inside(verts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Membership test against the ccw edge half-planes."""
    e = np.roll(verts, -1, axis=0) - verts
    ok = np.ones(len(pts), dtype=bool)
    for j in range(len(verts)):
        d = pts - verts[j]
        ok &= e[j, 0] * d[:, 1] - e[j, 1] * d[:, 0] >= 0.0
    return ok


def covariogram_bruteforce(p, x, n_samples: int = 10**6, seed: int = 0):
    """Monte-Carlo estimate of area(P ∩ (P+x)) with its standard error."""
    verts = _vertices(p)
    x = np.asarray(x, dtype=float)
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    box_area = float(np.prod(hi - lo))
    rng = np.random.default_rng(np.random.SeedSequence([0x636F7661, seed]))
    pts = lo + rng.random((int(n_samples), 2)) * (hi - lo)
    hit = _inside(verts, pts) & _inside(verts + x, pts)
    frac = hit.mean()
    est = box_area * frac
    se = box_area * np.sqrt(max(frac * (1 - frac), 1e-300) / n_samples)
    return float(est), float(se)


def _triangles(verts: np.ndarray) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    c = verts.mean(axis=0)
    return [(c, verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))]


def _ft_fixed_nodes(verts: np.ndarray, xi: np.ndarray, n_nodes: int) -> complex:
    """Gauss-Legendre tensor quadrature of exp(-i xi.x) over a fan triangulation."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    u = 0.5 * (nodes + 1.0)
    wu = 0.5 * weights
    total = 0.0 + 0.0j
    uu, vv = np.meshgrid(u, u, indexing="ij")
    ww = np.outer(wu, wu)
    for a, b, c in _triangles(verts):
        # Duffy map of the unit square onto the triangle (a, b, c)
        s = uu
        t = vv * uu
        pts_x = a[0] + (b[0] - a[0]) * s + (c[0] - b[0]) * t
        pts_y = a[1] + (b[1] - a[1]) * s + (c[1] - b[1]) * t
        jac = np.abs(
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        ) * uu
        total += np.sum(ww * jac * np.exp(-1j * (xi[0] * pts_x + xi[1] * pts_y)))
    return complex(total)


def ft_quadrature(p, xi, n_nodes: int = 64) -> complex:
    """Quadrature value of ∫_P exp(-i xi.x) dx with a Richardson check."""
    verts = _vertices(p)
    xi = np.asarray(xi, dtype=float).reshape(2)
    coarse = _ft_fixed_nodes(verts, xi, n_nodes)
    fine = _ft_fixed_nodes(verts, xi, 2 * n_nodes)
    if abs(fine - coarse) > 1e-8:
        warnings.warn(
            f"ft_quadrature accuracy not reached: disagreement {abs(fine - coarse):.3e}",
            stacklevel=2,
        )
    return fine


def hausdorff_bruteforce(p, q, n_dirs: int = 10**4) -> float:
    """Max over uniform directions of |h_P - h_Q|; a lower bound."""
    vp, vq = _vertices(p), _vertices(q)
    theta = 2 * np.pi * np.arange(int(n_dirs)) / int(n_dirs)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    hp = np.max(dirs @ vp.T, axis=1)
    hq = np.max(dirs @ vq.T, axis=1)
    return float(np.max(np.abs(hp - hq)))
