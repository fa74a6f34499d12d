import numpy as np
import pytest

from rangecompat.algebra import GF

ALL_FIELDS = [GF(q) for q in (2, 3, 4, 5, 7, 8, 9)]
SMALL_FIELDS = [GF(q) for q in (2, 3, 4)]


@pytest.fixture(params=ALL_FIELDS, ids=lambda f: f.name)
def field(request):
    return request.param


@pytest.fixture(params=SMALL_FIELDS, ids=lambda f: f.name)
def small_field(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
