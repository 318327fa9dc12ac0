"""File formats: JSON bodies/measurements/reports, CSV tables, SVG figures.

All writers are deterministic: identical in-memory values produce
byte-identical files (floats encoded by shortest round-trip repr).
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigurationError
from .geometry import Polygon
from .measurement import MeasurementSet
from .pipelines import ReconstructionReport
from .randstream import NoiseModel


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dump_json(data: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(data), fh, indent=1)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


# -- bodies -----------------------------------------------------------------

def body_to_dict(p: Polygon) -> dict:
    return {"schema": "body/1", "vertices": p.vertices.tolist()}


def body_from_dict(d: dict) -> Polygon:
    if d.get("schema") != "body/1":
        raise ConfigurationError(f"not a body file (schema {d.get('schema')!r})")
    return Polygon(d["vertices"])


# -- measurements -----------------------------------------------------------

def measurement_to_dict(ms: MeasurementSet) -> dict:
    d = {
        "schema": "meas/1",
        "design": ms.design,
        "k": ms.k,
        "noise": ms.noise.to_dict(),
        "seed": ms.seed,
        "values": ms.payload.ravel().tolist(),
    }
    if ms.gamma is not None:
        d["gamma"] = ms.gamma
    if ms.directions is not None:
        d["directions"] = ms.directions.tolist()
    if ms.design == "cov_blaschke":
        d["n_reps"] = int(ms.payload.shape[1])
    return d


def measurement_from_dict(d: dict) -> MeasurementSet:
    if d.get("schema") != "meas/1":
        raise ConfigurationError(f"not a measurement file (schema {d.get('schema')!r})")
    design = d["design"]
    k = int(d["k"])
    values = np.asarray(d["values"], dtype=float)
    directions = np.asarray(d["directions"], float) if "directions" in d else None
    if design == "cov_blaschke":
        values = values.reshape(len(directions), int(d["n_reps"]), 2)
    elif design == "mod_pair":
        values = values.reshape(2, -1)
    return MeasurementSet(
        design=design,
        k=k,
        payload=values,
        noise=NoiseModel.from_dict(d["noise"]),
        seed=int(d["seed"]),
        gamma=d.get("gamma"),
        directions=directions,
    )


# -- reports ----------------------------------------------------------------

def report_to_dict(rep: ReconstructionReport) -> dict:
    return rep.to_dict()


# -- CSV --------------------------------------------------------------------

def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (float, np.floating)):
            return repr(float(v))
        return str(v)

    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join(cell(r.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


# -- SVG --------------------------------------------------------------------

def _path(vertices: np.ndarray, style: str) -> str:
    pts = " ".join(f"{float(x)!r},{float(y)!r}" for x, y in vertices)
    return f'<polygon points="{pts}" style="{style}" />'


def svg_overlay(polygons: list[tuple[Polygon, str]], size: int = 480) -> str:
    """Overlay of outlines in body coordinates (viewport fits 1.1*C_0^2)."""
    half = 0.55
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{-half} {-half} {2*half} {2*half}">',
        f'<g transform="scale(1,-1)">',
        f'<rect x="{-half}" y="{-half}" width="{2*half}" height="{2*half}" '
        'style="fill:white" />',
    ]
    for poly, style in polygons:
        if not poly.is_degenerate:
            parts.append(_path(poly.vertices, style + ";fill:none;stroke-width:0.004"))
    parts.append("</g></svg>")
    return "\n".join(parts) + "\n"


def reconstruction_svg(rep: ReconstructionReport, truth: Polygon | None = None,
                       show_ghost: bool = True) -> str:
    layers = []
    if truth is not None:
        layers.append((truth, "stroke:#888888;stroke-dasharray:0.01 0.01"))
    layers.append((rep.polygon, "stroke:#0044cc"))
    if show_ghost:
        layers.append((-rep.polygon, "stroke:#cc8800;stroke-dasharray:0.004 0.008"))
    return svg_overlay(layers)


def experiment_svg(rows: list[dict], size: int = 480) -> str:
    """Log-log plot of median error vs k."""
    ks = sorted({r["k"] for r in rows})
    meds = [float(np.median([r["error"] for r in rows if r["k"] == k])) for k in ks]
    if not ks:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="10" height="10">'
                "</svg>\n")
    lx = np.log10(ks)
    ly = np.log10(np.maximum(meds, 1e-12))
    pad = 40
    span = size - 2 * pad

    def sx(v):
        lo, hi = lx.min(), lx.max()
        return float(pad + (0.5 * span if hi == lo else (v - lo) / (hi - lo) * span))

    def sy(v):
        lo, hi = ly.min(), ly.max()
        return float(size - pad
                     - (0.5 * span if hi == lo else (v - lo) / (hi - lo) * span))

    pts = " ".join(f"{sx(a)!r},{sy(b)!r}" for a, b in zip(lx, ly))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
        f'<rect width="{size}" height="{size}" style="fill:white" />',
        f'<polyline points="{pts}" style="fill:none;stroke:#0044cc;stroke-width:2" />',
    ]
    for a, b, k, m in zip(lx, ly, ks, meds):
        parts.append(f'<circle cx="{sx(a)!r}" cy="{sy(b)!r}" r="3" '
                     'style="fill:#0044cc" />')
        parts.append(f'<text x="{sx(a)!r}" y="{size - 12}" font-size="12" '
                     f'text-anchor="middle">k={k}</text>')
        parts.append(f'<text x="{sx(a)!r}" y="{sy(b) - 8!r}" font-size="10" '
                     f'text-anchor="middle">{m:.3g}</text>')
    parts.append(f'<text x="{size // 2}" y="16" font-size="13" text-anchor="middle">'
                 "median error vs k (log-log)</text>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
