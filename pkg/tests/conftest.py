import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260817)


@pytest.fixture
def random_density():
    """Factory for reproducible random density matrices of a given dim."""
    gen = np.random.default_rng(777)

    def make(dim, rank=None):
        rank = dim if rank is None else rank
        g = gen.normal(size=(dim, rank)) + 1j * gen.normal(size=(dim, rank))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real

    return make
