"""Least squares engines: the linear brightness fit and the nonlinear
covariogram fit over facet variables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .covariogram import SampleGrid, covariogram_many, negation_index
from .errors import (
    ConfigurationError,
    DegenerateInputError,
    InfeasibleMeasureError,
    ReconstructionFailureError,
)
from .geometry import (
    Polygon,
    SurfaceAreaMeasure,
    intersect_convex,
    minkowski_reconstruct,
    polygon_metrics,
    surface_area_measure,
)

BALANCE_TOL = 1e-10


@dataclass(frozen=True)
class FacetVariables:
    """Facet measures a = (a_1^+, a_1^-, ..., a_s^+, a_s^-).

    normals holds one representative u_j per antipodal pair; a_plus[j] is
    the mass at +u_j, a_minus[j] the mass at -u_j.
    """

    normals: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "normals", np.asarray(self.normals, float).reshape(-1, 2))
        object.__setattr__(self, "a_plus", np.asarray(self.a_plus, float).reshape(-1))
        object.__setattr__(self, "a_minus", np.asarray(self.a_minus, float).reshape(-1))
        s = len(self.normals)
        if len(self.a_plus) != s or len(self.a_minus) != s:
            raise ConfigurationError("facet variable length mismatch")

    @property
    def flat(self) -> np.ndarray:
        """Interleaved (a_1^+, a_1^-, ..., a_s^+, a_s^-)."""
        return np.column_stack([self.a_plus, self.a_minus]).ravel()

    def with_flat(self, flat: np.ndarray) -> "FacetVariables":
        f = np.asarray(flat, float).reshape(-1, 2)
        return FacetVariables(self.normals, f[:, 0], f[:, 1])

    def balance_residual(self) -> float:
        r = (self.a_plus - self.a_minus) @ self.normals
        return float(np.hypot(r[0], r[1]))

    def swapped(self) -> "FacetVariables":
        return FacetVariables(self.normals, self.a_minus.copy(), self.a_plus.copy())


@dataclass
class FitReport:
    objective: float
    iterations: int
    restarts_used: int
    converged: bool
    restart_objectives: list = field(default_factory=list)


def project_to_balanced_cone(a: FacetVariables) -> FacetVariables:
    """Euclidean projection onto {a >= 0, sum (a_j^+ - a_j^-) u_j = o}.

    Solved exactly by a primal active-set method: only two equality
    constraints, so each KKT system is a 2x2 solve.
    """
    u = a.normals
    s = len(u)
    if s < 2 or np.linalg.matrix_rank(u, tol=1e-12) < 2:
        raise ConfigurationError("normals must span the plane (s >= 2)")
    # column j of b: coefficient of flat variable j in the balance constraint
    b = np.empty((2, 2 * s))
    b[:, 0::2] = u.T
    b[:, 1::2] = -u.T
    a0 = a.flat
    active = np.zeros(2 * s, dtype=bool)
    x = a0.copy()
    for _ in range(8 * s + 16):
        free = ~active
        bf = b[:, free]
        gram = bf @ bf.T
        mu = np.linalg.lstsq(gram, bf @ a0[free], rcond=None)[0]
        x = np.zeros(2 * s)
        x[free] = a0[free] - b[:, free].T @ mu
        neg = free & (x < -1e-14)
        if np.any(neg):
            # add the most violating bound to the active set
            active[np.argmin(np.where(neg, x, np.inf))] = True
            continue
        x[x < 0] = 0.0
        # multipliers of active bounds must be nonnegative at the optimum
        lam = b[:, active].T @ mu - a0[active]
        if len(lam) and lam.min() < -1e-12:
            idx = np.flatnonzero(active)[np.argmin(lam)]
            active[idx] = False
            continue
        break
    return a.with_flat(x)


def polygon_from_facets(a: FacetVariables) -> Polygon:
    """P(a): the polygon with measure {(u_j, a_j^+), (-u_j, a_j^-)}."""
    if a.balance_residual() > 1e-8 * max(1.0, a.flat.sum()):
        raise InfeasibleMeasureError("facet variables are not balanced")
    normals = np.concatenate([a.normals, -a.normals])
    masses = np.concatenate([a.a_plus, a.a_minus])
    keep = masses > 1e-12 * max(masses.sum(), 1e-300)
    return minkowski_reconstruct(SurfaceAreaMeasure(normals[keep], masses[keep]))


def bright_lsq_fit(samples, prune_ratio: float = 1e-8) -> Polygon:
    """Nonnegative least squares fit of an o-symmetric polygon to
    brightness samples (u_i, y_i).

    Candidate normal pairs ±v_j are the symmetrized measurement
    directions; the pair mass c_j is split equally over ±v_j, which makes
    the measure balanced by construction.
    """
    dirs = np.array([np.asarray(u, float) for u, _ in samples])
    y = np.array([v for _, v in samples], dtype=float)
    if len(dirs) < 2:
        raise ConfigurationError("need at least 2 brightness samples")
    # map to half-circle representatives and deduplicate
    reps = np.where((dirs[:, 1] < 0) | ((dirs[:, 1] == 0) & (dirs[:, 0] < 0)),
                    -dirs.T, dirs.T).T
    v_cands = []
    for r in reps:
        if not any(abs(r[0] * c[1] - r[1] * c[0]) < 1e-12 for c in v_cands):
            v_cands.append(r)
    v_cands = np.array(v_cands)
    if len(v_cands) < 2:
        raise ConfigurationError("brightness directions must span the plane")
    a_mat = 0.5 * np.abs(dirs @ v_cands.T)
    c, _ = nnls(a_mat, np.maximum(y, 0.0))
    total = c.sum()
    if total <= 0:
        raise ReconstructionFailureError("brightness fit collapsed to zero")
    keep = c > prune_ratio * total
    v_keep, c_keep = v_cands[keep], c[keep]
    normals = np.concatenate([v_keep, -v_keep])
    masses = np.concatenate([c_keep, c_keep]) * 0.5
    try:
        return minkowski_reconstruct(SurfaceAreaMeasure(normals, masses))
    except InfeasibleMeasureError as exc:
        raise ReconstructionFailureError(f"degenerate brightness fit: {exc}") from exc


def facet_pairs_from_symmetric(qk: Polygon) -> tuple[np.ndarray, np.ndarray]:
    """Representative normals u_j and pair masses of an o-symmetric polygon."""
    m = surface_area_measure(qk)
    reps, masses = [], []
    for n, mass in zip(m.normals, m.masses):
        r = -n if (n[1] < 0 or (n[1] == 0 and n[0] < 0)) else n
        for i, c in enumerate(reps):
            if abs(r[0] * c[1] - r[1] * c[0]) < 1e-9 and r @ c > 0:
                masses[i] += mass
                break
        else:
            reps.append(r)
            masses.append(mass)
    return np.array(reps), np.array(masses)


class _Objective:
    """Sum of squares (obj1): grid measurements vs covariogram of P(a)∩C_0²."""

    def __init__(self, grid: SampleGrid, normals: np.ndarray):
        self.normals = normals
        self.box = Polygon.box()
        sites = grid.sites
        neg = negation_index(grid.k)
        idx = np.arange(len(sites))
        self.half = idx[idx <= neg]
        self.weight = np.where(self.half == neg[self.half], 1.0, 2.0)
        self.sites_half = sites[self.half]
        self.m_half = grid.values[self.half]
        self.worst = float(np.sum(grid.values ** 2) + 1.0)
        self.evals = 0

    def __call__(self, a: FacetVariables) -> float:
        self.evals += 1
        try:
            p = polygon_from_facets(a)
        except (InfeasibleMeasureError, DegenerateInputError):
            return self.worst
        p = intersect_convex(p, self.box)
        if p.is_degenerate or p.area <= 0:
            return self.worst
        g = covariogram_many(p, self.sites_half)
        r = self.m_half - g
        return float(np.sum(self.weight * r * r))


def _scale_to_area(a: FacetVariables, target: float) -> FacetVariables:
    """Rescale masses so that area(P(a)) matches target (area ~ scale^2)."""
    try:
        area = polygon_from_facets(a).area
    except (InfeasibleMeasureError, DegenerateInputError):
        return a
    if area <= 0:
        return a
    t = np.sqrt(target / area)
    return a.with_flat(a.flat * t)


def _pattern_search(obj, a: FacetVariables, max_evals: int, rel_tol: float = 1e-10):
    """Projected coordinate pattern search with pair-swap moves."""
    best = project_to_balanced_cone(a)
    f_best = obj(best)
    n = len(best.flat)
    scale = max(best.flat.max(), 1e-3)
    step = 0.25 * scale
    start_evals = obj.evals
    while obj.evals - start_evals < max_evals and step > 1e-12 * scale:
        improved = False
        for j in range(n):
            for sgn in (1.0, -1.0):
                trial = best.flat.copy()
                trial[j] = max(0.0, trial[j] + sgn * step)
                cand = project_to_balanced_cone(best.with_flat(trial))
                f = obj(cand)
                if f < f_best * (1 - rel_tol):
                    best, f_best = cand, f
                    improved = True
                    break
            if obj.evals - start_evals >= max_evals:
                break
        if not improved:
            # try swapping individual antipodal pairs to escape saddles
            flat = best.flat.reshape(-1, 2)
            for j in range(len(flat)):
                trial = flat.copy()
                trial[j] = trial[j, ::-1]
                cand = project_to_balanced_cone(best.with_flat(trial.ravel()))
                f = obj(cand)
                if f < f_best * (1 - rel_tol):
                    best, f_best = cand, f
                    improved = True
                    break
        if not improved:
            step *= 0.5
    converged = step <= 1e-12 * scale or f_best <= 1e-16
    return best, f_best, converged


def cov_lsq_fit(
    grid: SampleGrid,
    qk: Polygon,
    n_restarts: int = 8,
    max_evals: int = 2000,
    facet_prune: float = 0.005,
    facet_max: int = 24,
) -> tuple[Polygon, FitReport]:
    """Algorithm stage: fit facet variables to covariogram measurements.

    Facet normals come from the o-symmetric first-stage polygon qk; the
    objective is the sum of squared misfits between the measurements and
    the covariogram of P(a) ∩ C_0², minimized by projected pattern search
    with multistart.  The returned polygon is recentered at the origin;
    the reflected solution is equally optimal and either may be returned.
    """
    if qk.is_degenerate:
        raise ConfigurationError("first-stage polygon is degenerate")
    normals, pair_masses = facet_pairs_from_symmetric(qk)
    # negligible first-stage facets cost optimizer dimensions but move the
    # output by less than their mass; drop them
    keep = pair_masses >= facet_prune * pair_masses.sum()
    if keep.sum() >= 2:
        normals, pair_masses = normals[keep], pair_masses[keep]
    if len(normals) > facet_max:
        # near-uniform first-stage masses defeat the relative prune; keep
        # only the heaviest pairs to bound the optimizer dimension
        order = np.argsort(pair_masses)[::-1][:facet_max]
        order.sort()
        normals, pair_masses = normals[order], pair_masses[order]
    if len(normals) < 2:
        raise ConfigurationError("first-stage polygon needs >= 4 facets")
    obj = _Objective(grid, normals)
    target_area = max(grid.value_at_origin(), 1e-3)

    base = FacetVariables(normals, pair_masses / 2, pair_masses / 2)
    base = _scale_to_area(base, target_area)
    rng = np.random.default_rng(np.random.SeedSequence([0x6C73712D, len(normals)]))

    # the optimum concentrates each pair's mass on one side; rank cheap
    # one-sided sign-pattern inits before spending the search budget
    s = len(normals)
    if s - 1 <= 6:
        bits = np.arange(2 ** (s - 1))
        patterns = 1 - 2 * ((bits[:, None] >> np.arange(s - 1)) & 1)
        patterns = np.column_stack([np.ones(len(bits), dtype=int), patterns])
    else:
        patterns = np.concatenate([
            np.ones((1, s), dtype=int),
            1 - 2 * rng.integers(0, 2, size=(63, s)),
        ])
    scored = [(obj(base), base)]
    for pat in patterns:
        cand = FacetVariables(normals,
                              np.where(pat > 0, pair_masses, 0.0),
                              np.where(pat > 0, 0.0, pair_masses))
        cand = _scale_to_area(project_to_balanced_cone(cand), target_area)
        scored.append((obj(cand), cand))
    scored.sort(key=lambda t: t[0])
    starts = [a for _, a in scored[:n_restarts]]
    while len(starts) < n_restarts:
        jitter = rng.lognormal(mean=0.0, sigma=0.6, size=2 * s)
        cand = project_to_balanced_cone(base.with_flat(base.flat * jitter))
        starts.append(_scale_to_area(cand, target_area))

    best = None
    stop_obj = 1e-12 * obj.worst
    report = FitReport(objective=np.inf, iterations=0, restarts_used=0,
                       converged=False)
    for a0 in starts:
        report.restart_objectives.append(obj(a0))
        report.restarts_used += 1
        sol, f, conv = _pattern_search(obj, a0, max_evals)
        if f < report.objective:
            best, report.objective, report.converged = sol, f, conv
        if report.objective <= stop_obj:
            report.converged = True
            break
    report.iterations = obj.evals
    if best is None:
        raise ReconstructionFailureError("all restarts failed")
    p = intersect_convex(polygon_from_facets(best), Polygon.box())
    if p.is_degenerate or p.area <= 0:
        raise ReconstructionFailureError("fit produced a degenerate polygon")
    _, c = polygon_metrics(p)
    return p.translate(-c), report
