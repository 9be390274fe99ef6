import numpy as np
import pytest

from disclosure_lab import GameSpec, uniform_prior


@pytest.fixture
def gk2016():
    """Three actions, equally spaced cutoffs, convex-ish values."""
    return GameSpec(
        uniform_prior(), (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0), (0.0, 1.0, 3.0)
    )


@pytest.fixture
def exs():
    return GameSpec(uniform_prior(), (0.0, 0.5, 0.9, 1.0), (0.0, 1.0, 1.1))


@pytest.fixture
def exy():
    return GameSpec(uniform_prior(), (0.0, 0.6, 0.7, 1.0), (0.0, 1.0, 1.3))


def random_three_action(rng: np.random.Generator) -> GameSpec:
    """Uniform-prior three action spec with cutoff gaps of at least
    0.05 and a top-to-middle value ratio between 1.1 and 4."""
    while True:
        g1, g2 = np.sort(rng.uniform(0.0, 1.0, size=2)).tolist()
        if g1 >= 0.05 and g2 - g1 >= 0.05 and 1.0 - g2 >= 0.05:
            break
    v1 = float(rng.uniform(0.5, 2.0))
    v2 = v1 * float(rng.uniform(1.1, 4.0))
    return GameSpec(uniform_prior(), (0.0, g1, g2, 1.0), (0.0, v1, v2))
