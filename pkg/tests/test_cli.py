import json

import numpy as np
import pytest

from covrecon.cli import main
from covrecon.io import body_from_dict, load_json


def run(args):
    return main([str(a) for a in args])


def write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh)


@pytest.fixture
def pent_file(tmp_path):
    out = tmp_path / "pent.json"
    assert run(["body", "--shape", "regular-m-gon", "--m", 5,
                "--scale", 0.48, "--out", out]) == 0
    return out


def test_body_square(tmp_path):
    out = tmp_path / "sq.json"
    assert run(["body", "--shape", "square", "--out", out]) == 0
    p = body_from_dict(load_json(out))
    assert sorted(map(tuple, np.abs(p.vertices))) == [(0.5, 0.5)] * 4


def test_body_random_polygon_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["body", "--shape", "random-polygon", "--vertices", 7,
                    "--seed", 3, "--out", out]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_body_out_of_box_rejected(tmp_path):
    rc = run(["body", "--shape", "ellipse-polygon", "--a", 0.7, "--b", 0.3,
              "--out", tmp_path / "e.json"])
    assert rc == 2


def test_measure_counts(tmp_path, pent_file):
    out = tmp_path / "m.json"
    assert run(["measure", "--body", pent_file, "--design", "cov-grid",
                "--k", 8, "--out", out]) == 0
    assert len(load_json(out)["values"]) == 17 * 17

    assert run(["measure", "--body", pent_file, "--design", "cov-blaschke",
                "--k", 10, "--directions", 10, "--out", out]) == 0
    assert len(load_json(out)["values"]) == 10 * 100 * 2

    assert run(["measure", "--body", pent_file, "--design", "mod",
                "--k", 8, "--gamma", 0.75, "--out", out]) == 0
    assert len(load_json(out)["values"]) == 2 * (((17 ** 2 - 1) // 2) + 1)


def test_reconstruct_end_to_end(tmp_path, pent_file):
    ms1, ms2 = tmp_path / "s1.json", tmp_path / "s2.json"
    rep, fig = tmp_path / "rep.json", tmp_path / "fig.svg"
    assert run(["measure", "--body", pent_file, "--design", "cov-blaschke",
                "--k", 8, "--directions", 24, "--n-reps", 16,
                "--seed", 11, "--out", ms1]) == 0
    assert run(["measure", "--body", pent_file, "--design", "cov-grid",
                "--k", 8, "--seed", 22, "--out", ms2]) == 0
    rc = run(["reconstruct", "--problem", "cov", "--first-stage", "blaschke",
              "--stage1", ms1, "--stage2", ms2, "--truth", pent_file,
              "--out", rep, "--svg", fig,
              "--n-restarts", 2, "--max-evals", 150])
    assert rc == 0
    d = load_json(rep)
    assert d["schema"] == "report/1"
    assert d["error_to_truth"] <= 0.2
    assert fig.read_text().startswith("<svg")

    # byte-identical rerun
    rep2, fig2 = tmp_path / "rep2.json", tmp_path / "fig2.svg"
    assert run(["reconstruct", "--problem", "cov", "--first-stage", "blaschke",
                "--stage1", ms1, "--stage2", ms2, "--truth", pent_file,
                "--out", rep2, "--svg", fig2,
                "--n-restarts", 2, "--max-evals", 150]) == 0
    assert rep.read_bytes() == rep2.read_bytes()
    assert fig.read_bytes() == fig2.read_bytes()


def test_reconstruct_seed_collision_exit_2(tmp_path, pent_file):
    ms1 = tmp_path / "s1.json"
    assert run(["measure", "--body", pent_file, "--design", "cov-blaschke",
                "--k", 4, "--directions", 8, "--seed", 11, "--out", ms1]) == 0
    rc = run(["reconstruct", "--problem", "cov", "--first-stage", "blaschke",
              "--stage1", ms1, "--stage2", ms1, "--out", tmp_path / "r.json"])
    assert rc == 2


def test_reconstruct_missing_file_exit_4(tmp_path):
    rc = run(["reconstruct", "--problem", "cov", "--first-stage", "blaschke",
              "--stage1", tmp_path / "nope.json",
              "--stage2", tmp_path / "nope2.json",
              "--out", tmp_path / "r.json"])
    assert rc == 4


def test_experiment_empty_ks(tmp_path):
    cfg = tmp_path / "cfg.json"
    write_json(cfg, {"body": {"shape": "square"}, "problem": "cov",
                     "first_stage": "diff", "ks": [], "seeds": [0]})
    out, svg = tmp_path / "t.csv", tmp_path / "p.svg"
    assert run(["experiment", "--config", cfg, "--out", out,
                "--svg", svg]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1  # header only
    assert not svg.exists()


def test_experiment_diff_bound_columns(tmp_path):
    cfg = tmp_path / "cfg.json"
    write_json(cfg, {"body": {"shape": "square"}, "problem": "cov",
                     "first_stage": "diff", "ks": [8], "seeds": [0],
                     "noise": {"kind": "none"},
                     "n_restarts": 2, "max_evals": 150})
    out = tmp_path / "t.csv"
    assert run(["experiment", "--config", cfg, "--out", out]) == 0
    header, row = out.read_text().strip().splitlines()
    cols = header.split(",")
    assert cols == ["k", "seed", "error", "first_stage_error", "objective",
                    "wall_ms", "bound", "pass"]
    vals = dict(zip(cols, row.split(",")))
    assert vals["pass"] == "True"
