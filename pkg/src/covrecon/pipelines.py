"""End-to-end reconstruction pipelines for the three problems."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .covariogram import SampleGrid
from .errors import ConfigurationError, ReconstructionFailureError
from .estimators import (
    KernelSpec,
    brightness_from_cov_diffs,
    brightness_from_synthesis,
    combine_mod_pairs,
    diff_schedule,
    kernel_estimate_grid,
    phase_grid_estimates,
    threshold_difference_hull,
)
from .geometry import (
    Polygon,
    blaschke_body,
    difference_body,
    hausdorff_distance,
    mirror_min_distance,
)
from .lsq import bright_lsq_fit, cov_lsq_fit
from .measurement import (
    MeasurementSet,
    equally_spaced_directions,
    gen_cov_blaschke,
    gen_cov_grid,
    gen_mod2,
    gen_mod_pair,
)
from .randstream import NoiseModel, derive_subseed

_PROBLEMS = ("cov", "mod2", "mod")
_FIRST_STAGES = ("blaschke", "diff")


@dataclass(frozen=True)
class PipelineConfig:
    """Full parameterization of a reconstruction run.

    gamma drives the frequency design of the final LSQ stage (mod2/mod);
    gamma_blaschke/eps_phase and gamma_diff parameterize the respective
    first stages.  alpha sets the kernel schedules epsilon_k, delta_k.
    """

    problem: str = "cov"
    first_stage: str = "blaschke"
    k: int = 8
    seed: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel.none)
    n_directions: int = 60
    gamma: float = 0.75
    gamma_blaschke: float = 0.8
    eps_phase: float = 0.1
    gamma_diff: float = 0.95
    alpha: float = 0.06
    bernstein: bool = True
    kernel: str = "uniform_box"
    n_restarts: int = 4
    max_evals: int = 600
    n_reps: int | None = None

    def validate(self) -> None:
        n = 2
        if self.problem not in _PROBLEMS:
            raise ConfigurationError(f"unknown problem {self.problem!r}")
        if self.first_stage not in _FIRST_STAGES:
            raise ConfigurationError(f"unknown first stage {self.first_stage!r}")
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if self.problem in ("mod2", "mod"):
            lo = 0.5 + 1 / (4 * n)
            if not lo < self.gamma < 1:
                raise ConfigurationError(
                    f"gamma window violated: need {lo} < gamma < 1, got {self.gamma}"
                )
            if self.first_stage == "blaschke":
                g, e = self.gamma_blaschke, self.eps_phase
                if not (0 < e < 1 - g):
                    raise ConfigurationError(
                        f"h_k window violated: need 0 < eps < 1 - gamma_blaschke, "
                        f"got eps={e}, gamma_blaschke={g}"
                    )
                if not 2 * n - 4 * n * g + 4 * (1 - g - e) < -1:
                    raise ConfigurationError(
                        f"(eeg) window violated: need 12*gamma + 4*eps > 9 at n=2, "
                        f"got gamma_blaschke={g}, eps={e}"
                    )
            else:
                bound = 3 * (1 + 1 / (2 * n)) / 4
                if not self.gamma_diff > bound:
                    raise ConfigurationError(
                        f"gamma_diff window violated: need gamma_diff > {bound}, "
                        f"got {self.gamma_diff}"
                    )
        if self.first_stage == "diff":
            # raises with the named violation if alpha is out of range
            diff_schedule(max(self.k, 2), self.alpha, self.bernstein)
        if self.n_directions < 2:
            raise ConfigurationError("need at least 2 directions")


@dataclass
class ReconstructionReport:
    polygon: Polygon
    q_k: Polygon
    error_to_truth: float | None
    first_stage_error: float | None
    diagnostics: dict
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        d = {
            "schema": "report/1",
            "polygon": self.polygon.vertices.tolist(),
            "q_k": self.q_k.vertices.tolist(),
            "error_to_truth": self.error_to_truth,
            "diagnostics": self.diagnostics,
        }
        if self.first_stage_error is not None:
            d["first_stage_error"] = self.first_stage_error
        return d


def _diff_first_stage(grid: SampleGrid, cfg: PipelineConfig, cap_delta: bool):
    eps_k, delta_k = diff_schedule(grid.k, cfg.alpha, cfg.bernstein)
    if cap_delta:
        # the partial-sum estimates are damped at desk scale; keep the
        # threshold below the observed maximum so S_k cannot be empty
        peak = float(
            kernel_estimate_grid(grid, KernelSpec(cfg.kernel, eps_k, delta_k)).max()
        )
        delta_k = min(delta_k, 0.5 * peak) if peak > 0 else delta_k
        if delta_k <= 0:
            raise ReconstructionFailureError("kernel estimate is nonpositive")
    spec = KernelSpec(cfg.kernel, eps_k, delta_k)
    qk = threshold_difference_hull(grid, spec)
    if qk.is_degenerate:
        raise ReconstructionFailureError("threshold stage produced no body")
    diag = {"epsilon_k": eps_k, "delta_k": delta_k}
    return qk, diag


def first_stage_cov(truth: Polygon, cfg: PipelineConfig, seed: int):
    """Stage 1 of Problem 1: Q_k approximating ∇K_0 (blaschke) or DK_0 (diff)."""
    if cfg.first_stage == "blaschke":
        dirs = equally_spaced_directions(cfg.n_directions)
        ms = gen_cov_blaschke(truth, cfg.n_directions, dirs, cfg.noise, seed,
                              n_reps=cfg.n_reps)
        qk = bright_lsq_fit(brightness_from_cov_diffs(ms))
        return qk, {"stage1": "cov_blaschke", "n_directions": cfg.n_directions}
    ms = gen_cov_grid(truth, cfg.k, cfg.noise, seed)
    grid = SampleGrid(k=cfg.k, values=ms.payload)
    qk, diag = _diff_first_stage(grid, cfg, cap_delta=False)
    diag["stage1"] = "cov_diff"
    return qk, diag


def _mod2_sets(truth: Polygon, cfg: PipelineConfig, gamma: float, seed: int) -> MeasurementSet:
    """A fresh squared-modulus measurement set (direct or via the pair trick)."""
    if cfg.problem == "mod":
        return combine_mod_pairs(gen_mod_pair(truth, cfg.k, gamma, cfg.noise, seed))
    return gen_mod2(truth, cfg.k, gamma, cfg.noise, seed)


def first_stage_mod(truth: Polygon, cfg: PipelineConfig, seed: int):
    """Stage 1 of Problems 2/3 from (squared-)modulus measurements."""
    if cfg.first_stage == "blaschke":
        ms = _mod2_sets(truth, cfg, cfg.gamma_blaschke, seed)
        h_k = cfg.k ** (cfg.gamma_blaschke - 1 + cfg.eps_phase)
        dirs = equally_spaced_directions(cfg.n_directions)
        qk = bright_lsq_fit(brightness_from_synthesis(ms, h_k, dirs))
        return qk, {"stage1": f"{cfg.problem}_blaschke", "h_k": h_k,
                    "gamma_blaschke": cfg.gamma_blaschke}
    ms = _mod2_sets(truth, cfg, cfg.gamma_diff, seed)
    grid = phase_grid_estimates(ms)
    qk, diag = _diff_first_stage(grid, cfg, cap_delta=True)
    diag["stage1"] = f"{cfg.problem}_diff"
    diag["gamma_diff"] = cfg.gamma_diff
    return qk, diag


def _finish(truth, cfg, qk, grid, diag, t0) -> ReconstructionReport:
    pk, fit = cov_lsq_fit(grid, qk, n_restarts=cfg.n_restarts,
                          max_evals=cfg.max_evals)
    diag = dict(diag)
    diag.update({
        "fit_objective": fit.objective,
        "fit_iterations": fit.iterations,
        "fit_converged": fit.converged,
        "fit_restarts": fit.restarts_used,
    })
    err = None
    fs_err = None
    if truth is not None:
        err = mirror_min_distance(pk, truth)
        target = blaschke_body(truth) if cfg.first_stage == "blaschke" else difference_body(truth)
        try:
            fs_err = hausdorff_distance(qk, target)
        except Exception:
            fs_err = None
    return ReconstructionReport(
        polygon=pk, q_k=qk, error_to_truth=err, first_stage_error=fs_err,
        diagnostics=diag, wall_ms=(time.time() - t0) * 1000.0,
    )


def _stage_grid_from_ms(ms: MeasurementSet, cfg: PipelineConfig) -> SampleGrid:
    if cfg.problem == "cov":
        ms.require("cov_grid")
        return SampleGrid(k=ms.k, values=ms.payload)
    if cfg.problem == "mod":
        ms = combine_mod_pairs(ms)
    return phase_grid_estimates(ms)


def _run(truth, cfg: PipelineConfig, measurements=None) -> ReconstructionReport:
    cfg.validate()
    t0 = time.time()
    if measurements is None:
        if truth is None:
            raise ConfigurationError("need either a truth body or measurements")
        seed1 = derive_subseed(cfg.seed, 1)
        seed2 = derive_subseed(cfg.seed, 2)
        if cfg.problem == "cov":
            qk, diag = first_stage_cov(truth, cfg, seed1)
            ms2 = gen_cov_grid(truth, cfg.k, cfg.noise, seed2)
        else:
            qk, diag = first_stage_mod(truth, cfg, seed1)
            if cfg.problem == "mod":
                ms2 = gen_mod_pair(truth, cfg.k, cfg.gamma, cfg.noise, seed2)
            else:
                ms2 = gen_mod2(truth, cfg.k, cfg.gamma, cfg.noise, seed2)
        grid = _stage_grid_from_ms(ms2, cfg)
    else:
        ms1, ms2 = measurements
        if ms1.seed == ms2.seed:
            raise ConfigurationError(
                "stage measurements must carry distinct seeds (independence)"
            )
        if cfg.problem == "cov":
            if cfg.first_stage == "blaschke":
                qk = bright_lsq_fit(brightness_from_cov_diffs(ms1))
                diag = {"stage1": "cov_blaschke"}
            else:
                if ms1.k != ms2.k:
                    raise ConfigurationError("stage k mismatch")
                qk, diag = _diff_first_stage(
                    SampleGrid(k=ms1.k, values=ms1.payload), cfg, cap_delta=False
                )
        else:
            if ms1.k != ms2.k:
                raise ConfigurationError("stage k mismatch")
            m1 = combine_mod_pairs(ms1) if ms1.design == "mod_pair" else ms1
            if cfg.first_stage == "blaschke":
                h_k = cfg.k ** (cfg.gamma_blaschke - 1 + cfg.eps_phase)
                dirs = equally_spaced_directions(cfg.n_directions)
                qk = bright_lsq_fit(brightness_from_synthesis(m1, h_k, dirs))
                diag = {"stage1": f"{cfg.problem}_blaschke", "h_k": h_k}
            else:
                qk, diag = _diff_first_stage(
                    phase_grid_estimates(m1), cfg, cap_delta=True
                )
        grid = _stage_grid_from_ms(ms2, cfg)
    return _finish(truth, cfg, qk, grid, diag, t0)


def run_problem1(cfg: PipelineConfig, truth: Polygon | None = None,
                 measurements=None) -> ReconstructionReport:
    if cfg.problem != "cov":
        raise ConfigurationError("run_problem1 needs cfg.problem='cov'")
    return _run(truth, cfg, measurements)


def run_problem2(cfg: PipelineConfig, truth: Polygon | None = None,
                 measurements=None) -> ReconstructionReport:
    if cfg.problem != "mod2":
        raise ConfigurationError("run_problem2 needs cfg.problem='mod2'")
    return _run(truth, cfg, measurements)


def run_problem3(cfg: PipelineConfig, truth: Polygon | None = None,
                 measurements=None) -> ReconstructionReport:
    if cfg.problem != "mod":
        raise ConfigurationError("run_problem3 needs cfg.problem='mod'")
    return _run(truth, cfg, measurements)


RUNNERS = {"cov": run_problem1, "mod2": run_problem2, "mod": run_problem3}


def convergence_experiment(truth: Polygon, cfg: PipelineConfig,
                           ks: list, seeds: list) -> list[dict]:
    """Per-(k, seed) errors and diagnostics, in deterministic order."""
    rows = []
    for k in ks:
        for seed in seeds:
            c = replace(cfg, k=int(k), seed=int(seed))
            rep = RUNNERS[c.problem](c, truth=truth)
            rows.append({
                "k": int(k),
                "seed": int(seed),
                "error": rep.error_to_truth,
                "first_stage_error": rep.first_stage_error,
                "objective": rep.diagnostics.get("fit_objective"),
                "wall_ms": rep.wall_ms,
                "delta_k": rep.diagnostics.get("delta_k"),
            })
    return rows


def median_errors(rows: list[dict]) -> dict[int, float]:
    ks = sorted({r["k"] for r in rows})
    return {
        k: float(np.median([r["error"] for r in rows if r["k"] == k]))
        for k in ks
    }
