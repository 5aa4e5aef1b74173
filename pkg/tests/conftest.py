import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from totalcoh.matrixlab import Rng

settings.register_profile(
    "totalcoh", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("totalcoh")

seeds = st.integers(min_value=0, max_value=2**64 - 1)


@pytest.fixture
def rng():
    return Rng(12345)


def probability_vectors(min_size=1, max_size=6):
    return (
        st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=min_size, max_size=max_size)
        .filter(lambda xs: sum(xs) > 1e-3)
        .map(lambda xs: (np.asarray(xs) / np.sum(xs)).tolist())
    )
