import math

import numpy as np
import pytest

from eotransduce.params import ConventionFlags, SystemParams, derive, reference_profile


def random_params(rng, zero_temperature=False, conventions=None):
    """Log-uniform draw spanning a few decades around the reference device."""
    lu = lambda lo, hi: float(math.exp(rng.uniform(math.log(lo), math.log(hi))))
    if conventions is None:
        conventions = ConventionFlags(bool(rng.integers(2)), bool(rng.integers(2)))
    return SystemParams(
        g_o=lu(0.5, 50),
        g_e=lu(0.5, 50),
        gamma_o=lu(1e4, 1e9),
        gamma_e=lu(1e4, 1e9),
        gamma_o_int=lu(1e3, 1e8),
        gamma_e_int=lu(1e3, 1e8),
        gamma_m=lu(0.1, 1e4),
        omega_o=lu(1e14, 1e15),
        omega_e=lu(1e9, 2e10),
        omega_m=lu(1e5, 1e8),
        temperature=0.0 if zero_temperature else lu(1e-3, 1.0),
        n_pump_o=lu(1e6, 1e10),
        n_pump_e=lu(1e6, 1e10),
        conventions=conventions,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def default_dp():
    return derive(SystemParams())


@pytest.fixture
def profile_dp():
    return derive(reference_profile())
