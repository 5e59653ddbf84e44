import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polystoch.latin import random_latin_hypercube
from polystoch.tensor import Tensor

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)
nonneg_fractions = st.fractions(min_value=0, max_value=4, max_denominator=6)


@st.composite
def tensors(draw, dims=(2, 3), orders=(1, 2, 3), values=small_fractions, zero_rate=0.3):
    d = draw(st.sampled_from(dims))
    n = draw(st.sampled_from(orders))
    entries = []
    for _ in range(n**d):
        if draw(st.floats(0, 1)) < zero_rate:
            entries.append(Fraction(0))
        else:
            entries.append(draw(values))
    return Tensor(d, n, entries)


@st.composite
def latin(draw, dims=(2,), orders=(2, 3, 4, 5)):
    k = draw(st.sampled_from(dims))
    n = draw(st.sampled_from(orders))
    seed = draw(st.integers(0, 10**9))
    return random_latin_hypercube(k, n, random.Random(seed))


@pytest.fixture
def rng():
    return random.Random(12345)
