import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covrecon.bodies import pentagon, random_polygon, square
from covrecon.covariogram import (
    covariogram_at,
    covariogram_grid,
    covariogram_many,
    grid_sites,
    negation_index,
)
from covrecon.errors import BodyOutOfBoxError
from covrecon.geometry import Polygon, brightness, difference_body, support_function
from covrecon.oracle import covariogram_bruteforce


def square_cov(x):
    """Closed form for C_0^2: g((t,s)) = max(0,1-|t|) * max(0,1-|s|)."""
    x = np.asarray(x, dtype=float)
    return max(0.0, 1 - abs(x[0])) * max(0.0, 1 - abs(x[1]))


def test_square_closed_form_spot():
    c = square()
    assert covariogram_at(c, (0.25, 0.0)) == pytest.approx(0.75, abs=1e-14)
    assert covariogram_at(c, (0.0, 0.0)) == pytest.approx(1.0, abs=1e-14)
    assert covariogram_at(c, (1.5, 0.0)) == 0.0


def test_value_at_origin_is_area(body_corpus):
    for p in body_corpus:
        assert covariogram_at(p, (0.0, 0.0)) == pytest.approx(p.area, abs=1e-12)


def test_grid_layout_and_negation():
    k = 4
    sites = grid_sites(k)
    assert sites.shape == ((2 * k + 1) ** 2, 2)
    # row-major in (x2, x1)
    assert np.allclose(sites[0], (-1.0, -1.0))
    assert np.allclose(sites[1], (-0.75, -1.0))
    idx = negation_index(k)
    assert np.allclose(sites[idx], -sites)
    assert np.array_equal(idx[idx], np.arange(len(sites)))


def test_grid_matches_pointwise():
    p = pentagon()
    g = covariogram_grid(p, 4)
    for s, v in zip(g.sites, g.values):
        assert v == covariogram_at(p, s)


def test_grid_evenness():
    g = covariogram_grid(pentagon(), 6)
    assert np.allclose(g.values[negation_index(6)], g.values, atol=1e-12)


def test_out_of_box_rejected():
    big = Polygon.box().scale(1.5)
    with pytest.raises(BodyOutOfBoxError):
        covariogram_grid(big, 4)


def test_monte_carlo_oracle_spot(rng):
    p = random_polygon(6, seed=77)
    for _ in range(3):
        x = rng.uniform(-1, 1, size=2)
        est, se = covariogram_bruteforce(p, x, n_samples=10**5, seed=5)
        assert abs(covariogram_at(p, x) - est) <= 4 * se + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_evenness_random(seed):
    r = np.random.default_rng(seed)
    p = random_polygon(3 + seed % 8, seed=seed)
    x = r.uniform(-1, 1, size=2)
    assert covariogram_at(p, x) == pytest.approx(covariogram_at(p, -x),
                                                 abs=1e-12)


def test_lipschitz_bounds(body_corpus, rng):
    for p in body_corpus[:5]:
        t = rng.uniform(0, np.pi, 64)
        dirs = np.column_stack([np.cos(t), np.sin(t)])
        bmax = max(brightness(p, u) for u in dirs)
        xs = rng.uniform(-1, 1, size=(50, 2))
        ys = rng.uniform(-1, 1, size=(50, 2))
        gx = covariogram_many(p, xs)
        gy = covariogram_many(p, ys)
        d = np.hypot(*(xs - ys).T)
        assert np.all(np.abs(gx - gy) <= np.sqrt(2) * d + 1e-12)
        # the sharper constant needs the true max brightness; pad the
        # sampled max by the direction-grid resolution
        assert np.all(np.abs(gx - gy) <= (bmax + 0.1) * d + 1e-12)


def test_sqrt_concavity(body_corpus, rng):
    for p in body_corpus[:5]:
        dk = difference_body(p)
        v = dk.vertices
        w = rng.dirichlet(np.ones(len(v)), size=40)
        xs = w @ v
        ys = (rng.dirichlet(np.ones(len(v)), size=40)) @ v
        mids = 0.5 * (xs + ys)
        sx = np.sqrt(covariogram_many(p, xs))
        sy = np.sqrt(covariogram_many(p, ys))
        sm = np.sqrt(covariogram_many(p, mids))
        assert np.all(sm >= 0.5 * (sx + sy) - 1e-10)


def radial_function(p, dirs):
    """rho_P(u) for an origin-interior polygon: first edge hit along u."""
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v
    n = np.column_stack([e[:, 1], -e[:, 0]])
    n /= np.hypot(n[:, 0], n[:, 1])[:, None]
    h = np.sum(n * v, axis=1)  # support numbers per edge
    denom = dirs @ n.T
    with np.errstate(divide="ignore"):
        t = np.where(denom > 1e-12, h[None, :] / denom, np.inf)
    return t.min(axis=1)


def test_support_characterization(body_corpus, rng):
    for p in body_corpus[:5]:
        dk = difference_body(p)
        theta = rng.uniform(0, 2 * np.pi, size=50)
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        rho = radial_function(dk, dirs)
        outside = dirs * (rho * 1.001)[:, None]
        inside = dirs * (rho * 0.995)[:, None]
        assert np.all(covariogram_many(p, outside) == 0.0)
        assert np.all(covariogram_many(p, inside) > 0.0)
