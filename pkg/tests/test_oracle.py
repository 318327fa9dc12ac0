import numpy as np
import pytest

from covrecon.bodies import random_polygon, square
from covrecon.geometry import Polygon, hausdorff_distance
from covrecon.oracle import covariogram_bruteforce, ft_quadrature, hausdorff_bruteforce


def test_covariogram_bruteforce_square():
    est, se = covariogram_bruteforce(square(), (0.25, 0.0), n_samples=10**6,
                                     seed=0)
    assert abs(est - 0.75) <= 3 * se


def test_covariogram_bruteforce_outside_support():
    est, se = covariogram_bruteforce(square(), (2.5, 0.0), n_samples=10**4,
                                     seed=0)
    assert est <= 3 * se


def test_covariogram_bruteforce_origin_area():
    p = random_polygon(7, seed=21)
    est, se = covariogram_bruteforce(p, (0.0, 0.0), n_samples=10**5, seed=1)
    assert abs(est - p.area) <= 3 * se + 1e-12


def test_ft_quadrature_square():
    assert abs(ft_quadrature(square(), (np.pi, 0.0)) - 2 / np.pi) <= 1e-10
    assert abs(ft_quadrature(square(), (0.0, 0.0)) - 1.0) <= 1e-12


def test_ft_quadrature_matches_closed_form():
    from covrecon.spectral import indicator_ft
    p = random_polygon(5, seed=33)
    assert abs(ft_quadrature(p, (7.0, -3.0)) - indicator_ft(p, (7.0, -3.0))) <= 1e-8


def test_hausdorff_bruteforce_sandwich():
    p = random_polygon(6, seed=8)
    q = random_polygon(4, seed=9)
    exact = hausdorff_distance(p, q)
    brute = hausdorff_bruteforce(p, q, 10**4)
    assert brute <= exact + 1e-12
    assert exact <= brute + 2 * np.pi * max(exact, 1.0) / 10**4


def test_hausdorff_bruteforce_identity_and_scaled():
    c = Polygon.box()
    assert hausdorff_bruteforce(c, c, 10**4) == 0.0
    v = hausdorff_bruteforce(c, c.scale(1.2), 10**6)
    assert v == pytest.approx(0.1 * np.sqrt(2), abs=1e-5)
