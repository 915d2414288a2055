import math

import numpy as np
import pytest
from hypothesis import strategies as st

from pgcubic import CubicMap, in_local_region, lambda_map

# a2 in a disk that covers every locally univalent slice, a3 in (0, 1/3)
a2_strategy = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
a3_strategy = st.floats(min_value=1e-3, max_value=1 / 3 - 1e-3)


@st.composite
def cubic_maps(draw):
    return CubicMap(1.0, draw(a2_strategy), draw(a3_strategy))


@st.composite
def local_maps(draw, margin=1e-3):
    """Maps strictly inside the locally univalent region, a1 = 1."""
    s = draw(st.floats(min_value=0.005, max_value=0.33))
    r = draw(st.floats(min_value=0.0, max_value=0.5 - margin))
    phi = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    a2 = complex(r * math.cos(phi) * (1 + 3 * s), r * math.sin(phi) * (1 - 3 * s))
    return CubicMap(1.0, a2, s)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def is_local(f):
    v = in_local_region(lambda_map(f))
    return v.member and not v.inconclusive
