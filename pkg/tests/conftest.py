import numpy as np
import pytest

from vilenkin import GeneratorSequence, GridFunction

WALSH3 = GeneratorSequence.walsh(3)
TERNARY3 = GeneratorSequence.constant(3, 3)
MIXED = GeneratorSequence((2, 3, 4))

TEST_GENERATORS = [WALSH3, TERNARY3, MIXED]


@pytest.fixture(params=TEST_GENERATORS, ids=lambda g: "x".join(map(str, g.m)))
def gen(request):
    return request.param


def random_function(gen, rng, scale=1.0):
    v = rng.normal(size=gen.size) + 1j * rng.normal(size=gen.size)
    return GridFunction(gen, scale * v)


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)
