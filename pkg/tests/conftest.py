import os

import numpy as np
import pytest

# Set testing environment variable to prevent log file creation
os.environ["TOWER_TESTING"] = "1"

from src.drinfeld.errors import ConfigError, NuNotFound
from src.drinfeld.ff import make_field
from src.drinfeld.params import Mode, TowerParams, build_params


def sample_specialized(q: int, seed: int) -> TowerParams:
    """Specialized params with t drawn from F_{q^4}; retries t values that hit zeta."""
    p = 2 if q == 2 else 3
    fq4 = make_field(p, 4)
    rng = np.random.default_rng(seed)
    for _ in range(64):
        try:
            return build_params(q, mode=Mode.SPECIALIZED, t_point=fq4.random(rng))
        except (ConfigError, NuNotFound):
            continue
    raise RuntimeError(f"no specialized params for q={q}, seed={seed}")


@pytest.fixture(scope="session")
def f9():
    """F_9 = F_3[i]/(i^2 + 1)."""
    return make_field(3, 2)


@pytest.fixture(scope="session")
def q3(f9) -> TowerParams:
    """The worked example: q = 3, zeta = i, eta = 1+2i."""
    i = f9.generator
    return build_params(3, zeta=i, eta=f9.from_coeffs([1, 2]), mode=Mode.REDUCED)


@pytest.fixture(scope="session")
def q2_specialized() -> TowerParams:
    return sample_specialized(2, seed=11)


@pytest.fixture(scope="session")
def q3_specialized() -> TowerParams:
    return sample_specialized(3, seed=5)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
