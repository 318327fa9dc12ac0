"""Command-line interface: body / measure / reconstruct / experiment.

Exit codes: 0 success, 2 configuration error, 3 reconstruction failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace

import numpy as np

from . import io as cio
from .bodies import (
    check_in_box,
    ellipse_polygon,
    pentagon,
    random_polygon,
    regular_polygon,
    square,
)
from .errors import (
    BodyOutOfBoxError,
    ConfigurationError,
    CovreconError,
    DegenerateInputError,
    InfeasibleMeasureError,
    ReconstructionFailureError,
    ShapeError,
)
from .measurement import (
    equally_spaced_directions,
    gen_cov_blaschke,
    gen_cov_grid,
    gen_mod2,
    gen_mod_pair,
)
from .pipelines import RUNNERS, PipelineConfig, convergence_experiment
from .randstream import NoiseModel

_SHAPES = ("square", "regular-m-gon", "random-polygon", "ellipse-polygon")
_DESIGNS = ("cov-grid", "cov-blaschke", "mod2", "mod")
_NOISES = ("none", "gaussian", "poisson", "poisson-gaussian")

# PipelineConfig knobs settable from the command line / experiment config.
_CFG_FLOATS = ("gamma", "gamma_blaschke", "eps_phase", "gamma_diff", "alpha")
_CFG_INTS = ("n_directions", "n_restarts", "max_evals", "n_reps")


def _noise_from_flags(kind: str, sigma: float, poisson_scale: float) -> NoiseModel:
    if kind == "none":
        return NoiseModel.none()
    if kind == "gaussian":
        return NoiseModel.gaussian(sigma)
    if kind == "poisson":
        return NoiseModel.poisson(poisson_scale)
    return NoiseModel.poisson_gaussian(poisson_scale, sigma)


def _make_body(args) -> "np.ndarray":
    if args.shape == "square":
        return square(args.half_width)
    if args.shape == "regular-m-gon":
        return regular_polygon(args.m, scale=args.scale)
    if args.shape == "random-polygon":
        return random_polygon(args.vertices, seed=args.seed, scale=args.scale)
    return ellipse_polygon(args.a, args.b, args.segments)


def cmd_body(args) -> int:
    p = _make_body(args)
    check_in_box(p)
    cio.dump_json(cio.body_to_dict(p), args.out)
    return 0


def cmd_measure(args) -> int:
    body = cio.body_from_dict(cio.load_json(args.body))
    noise = _noise_from_flags(args.noise, args.sigma, args.poisson_scale)
    if args.design == "cov-grid":
        ms = gen_cov_grid(body, args.k, noise, args.seed)
    elif args.design == "cov-blaschke":
        dirs = equally_spaced_directions(args.directions)
        ms = gen_cov_blaschke(body, args.k, dirs, noise, args.seed,
                              n_reps=args.n_reps)
    elif args.design == "mod2":
        ms = gen_mod2(body, args.k, args.gamma, noise, args.seed)
    else:
        ms = gen_mod_pair(body, args.k, args.gamma, noise, args.seed)
    cio.dump_json(cio.measurement_to_dict(ms), args.out)
    return 0


def _config_from_args(args, ms2) -> PipelineConfig:
    kwargs = {
        "problem": args.problem,
        "first_stage": args.first_stage,
        "k": ms2.k,
        "seed": ms2.seed,
        "noise": ms2.noise,
    }
    if ms2.gamma is not None:
        kwargs["gamma"] = ms2.gamma
    for name in _CFG_FLOATS + _CFG_INTS:
        val = getattr(args, name, None)
        if val is not None:
            kwargs[name] = val
    return PipelineConfig(**kwargs)


def cmd_reconstruct(args) -> int:
    ms1 = cio.measurement_from_dict(cio.load_json(args.stage1))
    ms2 = cio.measurement_from_dict(cio.load_json(args.stage2))
    truth = None
    if args.truth is not None:
        truth = cio.body_from_dict(cio.load_json(args.truth))
    cfg = _config_from_args(args, ms2)
    rep = RUNNERS[cfg.problem](cfg, truth=truth, measurements=(ms1, ms2))
    cio.dump_json(rep.to_dict(), args.out)
    if args.svg is not None:
        with open(args.svg, "w") as fh:
            fh.write(cio.reconstruction_svg(rep, truth=truth))
    return 0


def _body_from_config(spec: dict):
    if "file" in spec:
        return cio.body_from_dict(cio.load_json(spec["file"]))
    shape = spec.get("shape")
    if shape == "square":
        return square(spec.get("half_width", 0.5))
    if shape == "pentagon":
        return pentagon(spec.get("scale", 0.48))
    if shape == "regular-m-gon":
        return regular_polygon(spec["m"], scale=spec.get("scale", 0.48))
    if shape == "random-polygon":
        return random_polygon(spec["vertices"], seed=spec.get("seed", 0),
                              scale=spec.get("scale", 0.48))
    if shape == "ellipse-polygon":
        return ellipse_polygon(spec.get("a", 0.45), spec.get("b", 0.3),
                               spec.get("segments", 64))
    raise ConfigurationError(f"unknown body spec {spec!r}")


def cmd_experiment(args) -> int:
    spec = cio.load_json(args.config)
    body = _body_from_config(spec.get("body", {"shape": "pentagon"}))
    kwargs = {
        "problem": spec.get("problem", "cov"),
        "first_stage": spec.get("first_stage", "blaschke"),
        "noise": NoiseModel.from_dict(spec.get("noise", {"kind": "none"})),
    }
    allowed = {f.name for f in fields(PipelineConfig)}
    for name, val in spec.items():
        if name in allowed and name not in ("problem", "first_stage", "noise"):
            kwargs[name] = val
    cfg = PipelineConfig(**kwargs)
    ks = [int(k) for k in spec.get("ks", [])]
    seeds = [int(s) for s in spec.get("seeds", [0])]
    rows = convergence_experiment(body, cfg, ks, seeds) if ks else []
    columns = ["k", "seed", "error", "first_stage_error", "objective", "wall_ms"]
    if cfg.first_stage == "diff":
        b = float(spec.get("b", 0.9))
        for r in rows:
            r["bound"] = float(np.sqrt(2.0) * np.sqrt(2.0 / b)
                               * np.sqrt(r["delta_k"]))
            r["pass"] = r["first_stage_error"] <= r["bound"]
        columns += ["bound", "pass"]
    with open(args.out, "w") as fh:
        fh.write(cio.rows_to_csv(rows, columns))
    if args.svg is not None and rows:
        with open(args.svg, "w") as fh:
            fh.write(cio.experiment_svg(rows))
    return 0


def _add_config_flags(sub) -> None:
    for name in _CFG_FLOATS:
        sub.add_argument(f"--{name.replace('_', '-')}", dest=name,
                         type=float, default=None)
    for name in _CFG_INTS:
        sub.add_argument(f"--{name.replace('_', '-')}", dest=name,
                         type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covrecon")
    sp = ap.add_subparsers(dest="command", required=True)

    b = sp.add_parser("body", help="generate a body file")
    b.add_argument("--shape", choices=_SHAPES, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--half-width", dest="half_width", type=float, default=0.5)
    b.add_argument("--m", type=int, default=5)
    b.add_argument("--scale", type=float, default=0.48)
    b.add_argument("--vertices", type=int, default=7)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--a", type=float, default=0.45)
    b.add_argument("--b", type=float, default=0.3)
    b.add_argument("--segments", type=int, default=64)
    b.set_defaults(func=cmd_body)

    m = sp.add_parser("measure", help="simulate a measurement file")
    m.add_argument("--body", required=True)
    m.add_argument("--design", choices=_DESIGNS, required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--gamma", type=float, default=0.75)
    m.add_argument("--noise", choices=_NOISES, default="none")
    m.add_argument("--sigma", type=float, default=0.0)
    m.add_argument("--poisson-scale", dest="poisson_scale", type=float,
                   default=1e4)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--directions", type=int, default=60)
    m.add_argument("--n-reps", dest="n_reps", type=int, default=None)
    m.set_defaults(func=cmd_measure)

    r = sp.add_parser("reconstruct", help="run a two-stage reconstruction")
    r.add_argument("--problem", choices=("cov", "mod2", "mod"), required=True)
    r.add_argument("--first-stage", dest="first_stage",
                   choices=("blaschke", "diff"), required=True)
    r.add_argument("--stage1", required=True)
    r.add_argument("--stage2", required=True)
    r.add_argument("--truth", default=None)
    r.add_argument("--out", required=True)
    r.add_argument("--svg", default=None)
    _add_config_flags(r)
    r.set_defaults(func=cmd_reconstruct)

    e = sp.add_parser("experiment", help="run a convergence experiment")
    e.add_argument("--config", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--svg", default=None)
    e.set_defaults(func=cmd_experiment)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except (ReconstructionFailureError, InfeasibleMeasureError) as exc:
        print(f"reconstruction failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, DegenerateInputError, BodyOutOfBoxError,
            ShapeError, CovreconError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
