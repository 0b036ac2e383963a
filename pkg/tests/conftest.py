import numpy as np
import pytest
from hypothesis import strategies as st

from dyadic_lorentz import StepFunction
from dyadic_lorentz.corpus import corpus


def step(values, m=0):
    """StepFunction on [0, 2**m) from a list whose length fixes the level."""
    values = np.asarray(values, dtype=float)
    level = int(np.log2(values.size)) - m
    return StepFunction(m, level, values)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(1234, 60, 0, 6)


@st.composite
def dyadic_steps(draw, max_m=2, max_level=5):
    """Step functions with small dyadic-rational values (exact arithmetic)."""
    m = draw(st.integers(0, max_m))
    level = draw(st.integers(0, max_level))
    n = 2 ** (m + level)
    nums = draw(st.lists(st.integers(-64, 64), min_size=n, max_size=n))
    return StepFunction(m, level, np.array(nums, dtype=float) / 8)
