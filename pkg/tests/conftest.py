import numpy as np
import pytest

from akmc import SdeConfig, TwoSaddle, rate_table_from_basin, stationary_points


@pytest.fixture(scope="session")
def two_saddle():
    return TwoSaddle(c=0.2)


@pytest.fixture(scope="session")
def testbed(two_saddle):
    """The standard search testbed: potential, basin, and its rate table."""
    basin = stationary_points(two_saddle, (-4.0, 4.0))
    rates = rate_table_from_basin(basin, beta_lo=10.0, beta_hi=2.5)
    return two_saddle, basin, rates


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels(testbed):
    """Compile the numba kernels once so per-test timings stay meaningful."""
    potential, basin, _ = testbed
    from akmc import run_until_exit, sample_qsd

    rng = np.random.default_rng(0)
    cfg = SdeConfig(beta=2.5, dt=1e-4, t_corr=0.01, max_steps=10**7)
    sample_qsd(potential, basin, cfg, rng)
    run_until_exit(basin.minimum, potential, basin, cfg, rng)
