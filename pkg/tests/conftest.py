import numpy as np
import pytest
from hypothesis import strategies as st

from betabounds.bounds import beta_bound_copulas
from betabounds.copula import ShuffleOfM


@pytest.fixture(scope="session")
def b_lower0():
    return beta_bound_copulas(0.0)[0]


@pytest.fixture(scope="session")
def b_upper0():
    return beta_bound_copulas(0.0)[1]


@st.composite
def shuffles(draw, max_pieces=5):
    n = draw(st.integers(1, max_pieces))
    cuts = draw(
        st.lists(st.floats(0.02, 0.98), min_size=n - 1, max_size=n - 1, unique=True)
    )
    breaks = [0.0] + sorted(cuts) + [1.0]
    if any(b - a < 1e-3 for a, b in zip(breaks, breaks[1:])):
        breaks = list(np.linspace(0.0, 1.0, n + 1))
    perm = draw(st.permutations(range(1, n + 1)))
    flips = draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
    return ShuffleOfM(tuple(breaks), tuple(perm), tuple(flips))
