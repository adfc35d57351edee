import numpy as np
import pytest

from pebblekit.constructions import build_rplus_fma, build_savitch_pa, build_weak_rplus_pa
from pebblekit.utils.enumeration import random_automaton


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def savitch2():
    return build_savitch_pa(2)


@pytest.fixture(scope="session")
def weak_rplus():
    return {k: build_weak_rplus_pa(k) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def fma():
    return build_rplus_fma()


@pytest.fixture
def random_acyclic(rng):
    return random_automaton(rng, 2, 5, 30, universal_prob=0.3)
