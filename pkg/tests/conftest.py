import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from heatbound.core import ProblemSpec
from heatbound.operator_lab import Grid1D, assemble_operator, spectral_decompose

settings.register_profile("default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_operator(rng: np.random.Generator):
    """A small random admissible (grid, spec, spectral data) triple."""
    m = int(rng.integers(1, 4))
    potential = str(rng.choice(["canonical", "harmonic", "zero"]))
    gamma = float(rng.uniform(0.5, 3.0))
    c2 = float(rng.uniform(0.5, 3.0))
    if potential == "harmonic":
        gamma, c2 = 2.0, 1.0
    spec = ProblemSpec(N=1, m=m, c2=c2, gamma=gamma, potential=potential)
    grid = Grid1D(float(rng.uniform(2.0, 10.0)), int(rng.integers(24, 121)))
    sd = spectral_decompose(assemble_operator(grid, spec), grid.h)
    return grid, spec, sd


@pytest.fixture(scope="session")
def small_lab():
    """m = 2 canonical potential on a modest grid."""
    spec = ProblemSpec()
    grid = Grid1D(20.0, 400)
    sd = spectral_decompose(assemble_operator(grid, spec), grid.h)
    return grid, spec, sd
