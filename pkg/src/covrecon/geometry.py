"""Exact 2D convex-body kernels.

Bodies are convex polygons with counterclockwise vertex chains.  All
operations are pure functions of immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely

from .errors import DegenerateInputError, InfeasibleMeasureError

_CONVEXITY_TOL = 1e-12
_MERGE_ANGLE_TOL = 1e-9


def unit(v) -> np.ndarray:
    """Normalize a 2-vector to a Direction (unit vector)."""
    v = np.asarray(v, dtype=float)
    n = np.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


class Polygon:
    """Ordered-vertex planar convex body.

    Vertices are stored counterclockwise.  Zero, one or two vertices encode
    the empty polygon, a point, or a segment; these degenerate shapes arise
    only as intersection/threshold results and always have area 0.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices, allow_degenerate: bool = False):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if len(v) >= 3:
            v = _clean_chain(v)
        if len(v) < 3:
            if not allow_degenerate:
                raise DegenerateInputError(
                    f"convex polygon needs >= 3 vertices, got {len(v)}"
                )
        self.vertices = v
        self.vertices.setflags(write=False)

    @classmethod
    def empty(cls) -> "Polygon":
        return cls(np.zeros((0, 2)), allow_degenerate=True)

    @classmethod
    def box(cls, half_width: float = 0.5) -> "Polygon":
        """The centered square [-h, h]^2 (default the working box C_0^2)."""
        h = float(half_width)
        return cls([(-h, -h), (h, -h), (h, h), (-h, h)])

    @classmethod
    def convex_hull(cls, points, allow_degenerate: bool = False) -> "Polygon":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        hull = _hull_ccw(pts)
        return cls(hull, allow_degenerate=allow_degenerate)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def is_degenerate(self) -> bool:
        return len(self.vertices) < 3

    @property
    def area(self) -> float:
        return polygon_metrics(self)[0] if not self.is_degenerate else 0.0

    def translate(self, t) -> "Polygon":
        t = np.asarray(t, dtype=float)
        return Polygon(self.vertices + t, allow_degenerate=True)

    def scale(self, s: float) -> "Polygon":
        # scalar multiplication (including point reflection for s < 0)
        # preserves counterclockwise orientation
        p = Polygon.__new__(Polygon)
        p.vertices = self.vertices * float(s)
        p.vertices.setflags(write=False)
        return p

    def __neg__(self) -> "Polygon":
        return self.scale(-1.0)

    def __repr__(self) -> str:
        return f"Polygon({self.vertices.tolist()!r})"


def _clean_chain(v: np.ndarray) -> np.ndarray:
    """Orient counterclockwise, merge collinear triples, check convexity."""
    area2 = np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
    if area2 < 0:
        v = v[::-1]
    scale = max(1.0, float(np.abs(v).max()))
    # drop duplicate consecutive vertices
    keep = np.hypot(*(v - np.roll(v, 1, axis=0)).T) > 1e-14 * scale
    v = v[keep]
    tol = _CONVEXITY_TOL * scale * scale
    # merge collinear triples one vertex at a time: removing both endpoints
    # of a near-zero edge at once would delete a genuine vertex
    while len(v) >= 3:
        e_prev = v - np.roll(v, 1, axis=0)
        e_next = np.roll(v, -1, axis=0) - v
        cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
        if np.any(cross < -tol):
            raise DegenerateInputError("vertex chain is not convex")
        worst = int(np.argmin(cross))
        if cross[worst] > tol:
            break
        v = np.delete(v, worst, axis=0)
    return v


def _hull_ccw(pts: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns ccw hull vertices."""
    pts = np.unique(pts, axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def half(points):
        out = []
        for p in points:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3 or abs(_shoelace(hull)) < 1e-300:
        return hull[:2]
    return hull


def _shoelace(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# -- shapely bridge ---------------------------------------------------------

def to_shapely(p: Polygon):
    if p.is_degenerate:
        raise DegenerateInputError("degenerate polygon has no shapely area form")
    return shapely.polygons(p.vertices)


def _from_shapely(geom) -> Polygon:
    if geom.is_empty:
        return Polygon.empty()
    gt = geom.geom_type
    if gt == "Polygon":
        coords = np.asarray(geom.exterior.coords)[:-1]
        if _shoelace(coords) < 0:
            coords = coords[::-1]
        return Polygon(coords, allow_degenerate=True)
    if gt == "Point":
        return Polygon([[geom.x, geom.y]], allow_degenerate=True)
    if gt in ("LineString", "LinearRing"):
        coords = np.asarray(geom.coords)
        return Polygon([coords[0], coords[-1]], allow_degenerate=True)
    if gt in ("MultiPoint", "MultiLineString", "GeometryCollection", "MultiPolygon"):
        # convex inputs only touch in a connected set; take the hull of all coords
        pts = shapely.get_coordinates(geom)
        return Polygon.convex_hull(pts, allow_degenerate=True)
    raise DegenerateInputError(f"unexpected intersection type {gt}")


def intersect_convex(p: Polygon, q: Polygon) -> Polygon:
    """Intersection P ∩ Q of two convex polygons (possibly degenerate)."""
    if p.is_degenerate or q.is_degenerate:
        if p.is_empty or q.is_empty:
            return Polygon.empty()
        # clip the degenerate one against the other body by brute membership
        small, big = (p, q) if p.is_degenerate else (q, p)
        if big.is_degenerate:
            return Polygon.empty()
        inside = [v for v in small.vertices if _contains(big, v)]
        return Polygon(np.array(inside).reshape(-1, 2), allow_degenerate=True)
    return _from_shapely(shapely.intersection(to_shapely(p), to_shapely(q)))


def _contains(p: Polygon, x, tol: float = 1e-12) -> bool:
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v
    d = np.asarray(x) - v
    return bool(np.all(e[:, 0] * d[:, 1] - e[:, 1] * d[:, 0] >= -tol))


# -- metrics ----------------------------------------------------------------

def polygon_metrics(p: Polygon) -> tuple[float, np.ndarray]:
    """Shoelace area and area-weighted centroid."""
    if p.is_empty:
        raise DegenerateInputError("empty polygon has no metrics")
    v = p.vertices
    if len(v) == 1:
        return 0.0, v[0].copy()
    if len(v) == 2:
        return 0.0, v.mean(axis=0)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    area = 0.5 * float(np.sum(cr))
    if area <= 0:
        return 0.0, v.mean(axis=0)
    cx = float(np.sum((x + xn) * cr)) / (6.0 * area)
    cy = float(np.sum((y + yn) * cr)) / (6.0 * area)
    return area, np.array([cx, cy])


def support_function(p: Polygon, u) -> float:
    """h_P(u) = max over vertices of u . v."""
    if p.is_empty:
        raise DegenerateInputError("support function of the empty polygon")
    u = np.asarray(u, dtype=float)
    return float(np.max(p.vertices @ u))


@dataclass(frozen=True)
class SurfaceAreaMeasure:
    """Discrete surface area measure: one (unit normal, edge length) atom per edge."""

    normals: np.ndarray  # (m, 2), unit rows
    masses: np.ndarray   # (m,), nonnegative

    def __post_init__(self):
        object.__setattr__(self, "normals", np.asarray(self.normals, float).reshape(-1, 2))
        object.__setattr__(self, "masses", np.asarray(self.masses, float).reshape(-1))
        if len(self.normals) != len(self.masses):
            raise ValueError("normals/masses length mismatch")
        if np.any(self.masses < 0):
            raise ValueError("masses must be nonnegative")

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def balance_residual(self) -> float:
        return float(np.hypot(*(self.masses @ self.normals)))

    @property
    def is_balanced(self) -> bool:
        return self.balance_residual() <= 1e-10 * max(1.0, self.total)


def surface_area_measure(p: Polygon) -> SurfaceAreaMeasure:
    if p.is_degenerate or polygon_metrics(p)[0] <= 0:
        raise DegenerateInputError("surface area measure needs positive area")
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(e[:, 0], e[:, 1])
    normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
    return SurfaceAreaMeasure(normals, lengths)


def brightness(p: Polygon, u) -> float:
    """Width of the projection P | u^perp via the Cauchy projection sum."""
    m = surface_area_measure(p)
    u = np.asarray(u, dtype=float)
    return 0.5 * float(np.abs(m.normals @ u) @ m.masses)


def perimeter(p: Polygon) -> float:
    return surface_area_measure(p).total


def minkowski_reconstruct(m: SurfaceAreaMeasure, mass_tol: float = 0.0) -> Polygon:
    """The convex polygon with surface area measure m, centroid at origin.

    Atoms are sorted by normal angle and chained into edge vectors.
    """
    total = m.total
    keep = m.masses > max(mass_tol, 1e-15 * max(total, 1.0))
    normals, masses = m.normals[keep], m.masses[keep]
    if m.balance_residual() > 1e-8 * max(1.0, total):
        raise InfeasibleMeasureError(
            f"measure unbalanced: residual {m.balance_residual():.3e}"
        )
    angles = np.arctan2(normals[:, 1], normals[:, 0])
    order = np.argsort(angles)
    normals, masses, angles = normals[order], masses[order], angles[order]
    # merge near-identical directions
    merged_n, merged_m = [], []
    for n, mass, a in zip(normals, masses, angles):
        if merged_n and abs(a - merged_n[-1][1]) < _MERGE_ANGLE_TOL:
            merged_m[-1] += mass
        else:
            merged_n.append((n, a))
            merged_m.append(mass)
    if len(merged_n) < 3:
        raise InfeasibleMeasureError("fewer than 3 effective atoms")
    normals = np.array([n for n, _ in merged_n])
    masses = np.array(merged_m)
    edges = masses[:, None] * np.column_stack([-normals[:, 1], normals[:, 0]])
    verts = np.concatenate([[np.zeros(2)], np.cumsum(edges, axis=0)[:-1]])
    poly = Polygon(verts)
    _, c = polygon_metrics(poly)
    return poly.translate(-c)


def difference_body(p: Polygon) -> Polygon:
    """DP = P + (-P): hull of all vertex differences."""
    if p.is_empty:
        raise DegenerateInputError("difference body of the empty polygon")
    v = p.vertices
    diffs = (v[:, None, :] - v[None, :, :]).reshape(-1, 2)
    return Polygon.convex_hull(diffs, allow_degenerate=p.is_degenerate)


def blaschke_body(p: Polygon) -> Polygon:
    """The o-symmetric body with measure (1/2)S(P,.) + (1/2)S(-P,.)."""
    m = surface_area_measure(p)
    normals = np.concatenate([m.normals, -m.normals])
    masses = np.concatenate([m.masses, m.masses]) * 0.5
    return minkowski_reconstruct(SurfaceAreaMeasure(normals, masses))


# -- Hausdorff distance -----------------------------------------------------

def _support_at_angles(p: Polygon, theta: np.ndarray) -> np.ndarray:
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    return np.max(dirs @ p.vertices.T, axis=1)


def _breakpoint_angles(p: Polygon) -> np.ndarray:
    """Angles where the support-function argmax vertex changes."""
    v = p.vertices
    if len(v) < 2:
        return np.empty(0)
    e = np.roll(v, -1, axis=0) - v
    if len(v) == 2:
        e = np.array([e[0], -e[0]])
    # outward normal angle of each edge
    return np.mod(np.arctan2(-e[:, 0], e[:, 1]), 2 * np.pi)


def hausdorff_distance(p: Polygon, q: Polygon, tol: float = 1e-9) -> float:
    """sup over the circle of |h_P - h_Q|, exact up to rounding.

    Between consecutive edge-normal angles of the two bodies the active
    vertices are fixed, so the difference is a single sinusoid whose arc
    maximum is available in closed form; the result is far inside the
    1e-9 accuracy budget.
    """
    if p.is_empty or q.is_empty:
        raise DegenerateInputError("Hausdorff distance needs nonempty bodies")
    if len(p.vertices) == 1 and len(q.vertices) == 1:
        return float(np.hypot(*(p.vertices[0] - q.vertices[0])))
    angles = np.concatenate([_breakpoint_angles(p), _breakpoint_angles(q), [0.0]])
    angles = np.unique(np.mod(angles, 2 * np.pi))
    starts = angles
    ends = np.concatenate([angles[1:], [angles[0] + 2 * np.pi]])
    mids = 0.5 * (starts + ends)
    dirs = np.column_stack([np.cos(mids), np.sin(mids)])
    vp = p.vertices[np.argmax(dirs @ p.vertices.T, axis=1)]
    vq = q.vertices[np.argmax(dirs @ q.vertices.T, axis=1)]
    d = vp - vq                       # f(theta) = d . u(theta) on each arc
    best = float(np.max(np.abs(_support_at_angles(p, angles) - _support_at_angles(q, angles))))
    phi = np.arctan2(d[:, 1], d[:, 0])
    rho = np.hypot(d[:, 0], d[:, 1])
    for crit in (phi, phi + np.pi):
        c = np.mod(crit - starts, 2 * np.pi) + starts
        inside = c <= ends
        if np.any(inside):
            best = max(best, float(np.max(rho[inside])))
    return best


def mirror_min_distance(p: Polygon, truth: Polygon) -> float:
    """min{ delta(truth, P), delta(-truth, P) }: the reflection-aware error."""
    return min(hausdorff_distance(p, truth), hausdorff_distance(-p, truth))


def chebyshev_radius(p: Polygon) -> float:
    """Radius of the largest disk inscribed in P (any center)."""
    from scipy.optimize import linprog

    m = surface_area_measure(p)
    h = np.array([support_function(p, n) for n in m.normals])
    # max r  s.t.  n_j . c + r <= h_j
    a_ub = np.column_stack([m.normals, np.ones(len(h))])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=h, bounds=[(None, None)] * 3)
    if not res.success:
        raise DegenerateInputError("inscribed-disk LP failed")
    return float(res.x[2])
