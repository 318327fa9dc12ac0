import numpy as np
import pytest

from covrecon.bodies import pentagon, square
from covrecon.covariogram import covariogram_grid
from covrecon.errors import ConfigurationError, ShapeError
from covrecon.io import measurement_from_dict, measurement_to_dict
from covrecon.measurement import (
    equally_spaced_directions,
    gen_cov_blaschke,
    gen_cov_grid,
    gen_mod2,
    gen_mod_pair,
)
from covrecon.randstream import NoiseModel, apply_noise, derive_subseed
from covrecon.spectral import FrequencyGrid, squared_modulus_many


def test_equally_spaced_directions():
    d = equally_spaced_directions(60)
    assert d.shape == (60, 2)
    assert np.allclose(np.hypot(d[:, 0], d[:, 1]), 1.0, atol=1e-14)
    assert np.allclose(d[0], (1.0, 0.0))


def test_cov_grid_noiseless_and_shape():
    p = pentagon()
    ms = gen_cov_grid(p, 8, NoiseModel.none(), seed=0)
    assert ms.payload.shape == (17 * 17,)
    assert np.array_equal(ms.payload, covariogram_grid(p, 8).values)


def test_cov_grid_reproducible():
    p = pentagon()
    a = gen_cov_grid(p, 8, NoiseModel.gaussian(0.01), seed=7)
    b = gen_cov_grid(p, 8, NoiseModel.gaussian(0.01), seed=7)
    assert np.array_equal(a.payload, b.payload)
    c = gen_cov_grid(p, 8, NoiseModel.gaussian(0.01), seed=8)
    assert not np.array_equal(a.payload, c.payload)


def test_cov_blaschke_shape_and_square_value():
    c = square()
    dirs = equally_spaced_directions(10)
    ms = gen_cov_blaschke(c, 10, dirs, NoiseModel.none(), seed=0)
    assert ms.payload.shape == (10, 100, 2)  # k dirs x k^2 reps x 2 probes
    assert np.allclose(ms.payload[:, :, 0], 1.0)
    # first direction e1: g((1/10, 0)) = 0.9 for the unit square
    assert np.allclose(ms.payload[0, :, 1], 0.9)


def test_cov_blaschke_rejects_parallel():
    dirs = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ConfigurationError):
        gen_cov_blaschke(square(), 4, dirs, NoiseModel.none(), seed=0)


def test_mod2_noiseless_equals_squared_modulus():
    p = pentagon()
    ms = gen_mod2(p, 8, 0.75, NoiseModel.none(), seed=0)
    grid = FrequencyGrid(k=8, gamma=0.75)
    assert np.array_equal(ms.payload, squared_modulus_many(p, grid.half_sites))
    assert ms.payload[0] == pytest.approx(p.area ** 2, abs=1e-12)


def test_mod_pair_copies():
    p = pentagon()
    noiseless = gen_mod_pair(p, 8, 0.75, NoiseModel.none(), seed=0)
    assert np.array_equal(noiseless.payload[0], noiseless.payload[1])
    noisy = gen_mod_pair(p, 8, 0.75, NoiseModel.gaussian(0.01), seed=3)
    assert not np.array_equal(noisy.payload[0], noisy.payload[1])
    rerun = gen_mod_pair(p, 8, 0.75, NoiseModel.gaussian(0.01), seed=3)
    assert np.array_equal(noisy.payload, rerun.payload)


def test_noise_zero_mean():
    truth = np.full(10**4, 0.8)
    for noise in (NoiseModel.gaussian(0.02), NoiseModel.poisson(1e4),
                  NoiseModel.poisson_gaussian(1e4, 0.02)):
        vals = apply_noise(truth, noise, seed=11, tag="zero-mean")
        resid = vals - truth
        se = resid.std(ddof=1) / np.sqrt(len(resid))
        assert abs(resid.mean()) <= 5 * se
        assert np.mean(resid ** 6) < np.inf


def test_require_design():
    ms = gen_cov_grid(pentagon(), 4, NoiseModel.none(), seed=0)
    with pytest.raises(ShapeError):
        ms.require("mod2")


def test_derive_subseed_distinct():
    assert derive_subseed(42, 1) != derive_subseed(42, 2)
    assert derive_subseed(42, 1) == derive_subseed(42, 1)


@pytest.mark.parametrize("maker", [
    lambda p: gen_cov_grid(p, 4, NoiseModel.gaussian(0.01), seed=5),
    lambda p: gen_cov_blaschke(p, 4, equally_spaced_directions(6),
                               NoiseModel.poisson(1e4), seed=5),
    lambda p: gen_mod2(p, 4, 0.75, NoiseModel.gaussian(0.01), seed=5),
    lambda p: gen_mod_pair(p, 4, 0.8, NoiseModel.none(), seed=5),
])
def test_serialization_round_trip(maker):
    ms = maker(pentagon())
    back = measurement_from_dict(measurement_to_dict(ms))
    assert back.design == ms.design
    assert back.k == ms.k
    assert back.seed == ms.seed
    assert back.noise == ms.noise
    assert back.gamma == ms.gamma
    assert np.array_equal(back.payload, ms.payload)
    if ms.directions is not None:
        assert np.array_equal(back.directions, ms.directions)
