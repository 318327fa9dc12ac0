"""Standard test bodies, all fitted inside the working box C_0^2."""

from __future__ import annotations

import numpy as np

from .errors import BodyOutOfBoxError, ConfigurationError
from .geometry import Polygon, polygon_metrics

BOX_TOL = 1e-12


def check_in_box(p: Polygon, tol: float = BOX_TOL) -> None:
    """Raise unless P sits inside C_0^2 = [-1/2, 1/2]^2 (tolerance tol)."""
    if p.is_empty:
        return
    if np.abs(p.vertices).max() > 0.5 + tol:
        raise BodyOutOfBoxError(
            f"body leaves C_0^2 by {np.abs(p.vertices).max() - 0.5:.3e}"
        )


def square(half_width: float = 0.5) -> Polygon:
    return Polygon.box(half_width)


def regular_polygon(m: int, scale: float = 0.48, rotate: float = 0.0) -> Polygon:
    """Regular m-gon with circumradius `scale`, centroid at the origin.

    The default orientation puts a vertex on the positive y-axis, matching
    the usual upright pentagon picture.
    """
    if m < 3:
        raise ConfigurationError("regular polygon needs m >= 3")
    theta = np.pi / 2 + rotate + 2 * np.pi * np.arange(m) / m
    p = Polygon(scale * np.column_stack([np.cos(theta), np.sin(theta)]))
    check_in_box(p)
    return p


def pentagon(scale: float = 0.48) -> Polygon:
    return regular_polygon(5, scale)


def random_polygon(n_vertices: int, seed: int, scale: float = 0.48) -> Polygon:
    """Random convex n-gon: hull of points on a random star, rescaled into C_0^2."""
    if n_vertices < 3:
        raise ConfigurationError("need at least 3 vertices")
    rng = np.random.default_rng(np.random.SeedSequence([0x626F6479, seed]))
    for _ in range(64):
        theta = np.sort(rng.uniform(0, 2 * np.pi, size=n_vertices))
        radii = rng.uniform(0.35, 1.0, size=n_vertices)
        pts = np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])
        hull = Polygon.convex_hull(pts, allow_degenerate=True)
        if len(hull.vertices) == n_vertices:
            _, c = polygon_metrics(hull)
            v = hull.vertices - c
            v *= scale / np.abs(v).max()
            return Polygon(v)
    # fall back to angle-jittered points on the unit circle (always convex)
    # if the hull keeps losing vertices
    theta = 2 * np.pi * np.arange(n_vertices) / n_vertices
    theta = theta + rng.uniform(-0.2, 0.2, size=n_vertices) * (2 * np.pi / n_vertices)
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    p = Polygon(pts)
    _, c = polygon_metrics(p)
    v = p.vertices - c
    v *= scale / np.abs(v).max()
    return Polygon(v)


def ellipse_polygon(a: float = 0.45, b: float = 0.3, segments: int = 64) -> Polygon:
    """Inscribed polygonal approximation of the ellipse with semi-axes a, b."""
    if segments < 3:
        raise ConfigurationError("need at least 3 segments")
    theta = 2 * np.pi * (np.arange(segments) + 0.5) / segments
    p = Polygon(np.column_stack([a * np.cos(theta), b * np.sin(theta)]))
    check_in_box(p)
    return p
