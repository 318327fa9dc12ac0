import numpy as np
import pytest

from covrecon.bodies import random_polygon


@pytest.fixture(scope="session")
def body_corpus():
    """A reproducible batch of random convex polygons inside C_0^2."""
    return [random_polygon(3 + (i % 10), seed=100 + i) for i in range(20)]


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
