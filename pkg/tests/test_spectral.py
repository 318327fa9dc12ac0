import numpy as np
import pytest

from covrecon.bodies import pentagon, random_polygon, square
from covrecon.covariogram import covariogram_grid, grid_sites
from covrecon.oracle import ft_quadrature
from covrecon.spectral import (
    FrequencyGrid,
    half_lattice,
    indicator_ft,
    indicator_ft_many,
    squared_modulus,
    squared_modulus_many,
    synthesis_residual,
    synthesize_partial_sum,
)


def test_half_lattice_disjoint_union():
    for k in (1, 3, 8):
        half = half_lattice(k)
        assert len(half) == ((2 * k + 1) ** 2 - 1) // 2
        as_set = {tuple(z) for z in half}
        neg_set = {(-a, -b) for a, b in as_set}
        assert not (as_set & neg_set)
        full = {(a, b) for a in range(-k, k + 1) for b in range(-k, k + 1)}
        assert as_set | neg_set | {(0, 0)} == full


def test_frequency_grid_sites():
    g = FrequencyGrid(k=4, gamma=0.75)
    assert g.n_half == (9 ** 2 - 1) // 2
    assert len(g.half_sites) == g.n_half + 1  # origin + half lattice
    assert np.allclose(g.half_sites[0], 0.0)
    assert np.allclose(g.half_sites[1:], half_lattice(4) / 4 ** 0.75)


def test_indicator_ft_square_closed_form():
    v = indicator_ft(square(), (np.pi, 0.0))
    assert v == pytest.approx(2 / np.pi, abs=1e-14)
    assert indicator_ft(square(), (0.0, 0.0)) == pytest.approx(1.0, abs=1e-14)


def test_indicator_ft_origin_is_area(body_corpus):
    for p in body_corpus[:5]:
        assert indicator_ft(p, (0.0, 0.0)) == pytest.approx(p.area, abs=1e-12)


def test_indicator_ft_vs_quadrature(rng):
    p = random_polygon(5, seed=9)
    for _ in range(10):
        xi = rng.uniform(-20, 20, size=2)
        assert abs(indicator_ft(p, xi) - ft_quadrature(p, xi)) <= 1e-8


def test_hermitian_symmetry(rng):
    p = pentagon()
    xis = rng.uniform(-30, 30, size=(50, 2))
    f = indicator_ft_many(p, xis)
    g = indicator_ft_many(p, -xis)
    assert np.max(np.abs(f - np.conj(g))) <= 1e-12


def test_modulus_invariances(rng):
    p = random_polygon(6, seed=4)
    xis = rng.uniform(-20, 20, size=(30, 2))
    base = squared_modulus_many(p, xis)
    shifted = squared_modulus_many(p.translate((0.01, -0.02)), xis)
    reflected = squared_modulus_many(-p, xis)
    assert np.max(np.abs(base - shifted)) <= 1e-10
    assert np.max(np.abs(base - reflected)) <= 1e-10


def test_squared_modulus_square():
    assert squared_modulus(square(), (np.pi, 0.0)) == pytest.approx(
        4 / np.pi ** 2, abs=1e-14)
    assert squared_modulus(pentagon(), (0.0, 0.0)) == pytest.approx(
        pentagon().area ** 2, abs=1e-12)


def test_synthesize_zeros_and_linearity(rng):
    g = FrequencyGrid(k=4, gamma=0.75)
    xs = rng.uniform(-1, 1, size=(20, 2))
    zeros = synthesize_partial_sum(g, np.zeros(g.n_half + 1), xs)
    assert np.all(zeros == 0.0)
    a = rng.normal(size=g.n_half + 1)
    b = rng.normal(size=g.n_half + 1)
    lhs = synthesize_partial_sum(g, 2.0 * a - 3.0 * b, xs)
    rhs = (2.0 * synthesize_partial_sum(g, a, xs)
           - 3.0 * synthesize_partial_sum(g, b, xs))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_partial_sum_at_origin_within_residual():
    p = square()
    g = FrequencyGrid(k=8, gamma=0.75)
    values = squared_modulus_many(p, g.half_sites)
    est = synthesize_partial_sum(g, values, np.zeros((1, 2)))[0]
    d_k = synthesis_residual(p, 8, 0.75)
    assert abs(est - 1.0) <= d_k + 1e-12


def test_synthesis_residual_decreasing_median():
    p = square()
    res = [synthesis_residual(p, k, 0.75) for k in (8, 16, 32)]
    assert res[0] > res[1] > res[2] > 0
