"""Hypothesis strategies shared across test modules."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def square_matrices(draw, min_n=1, max_n=6, elements=finite):
    n = draw(st.integers(min_n, max_n))
    return draw(arrays(np.float64, (n, n), elements=elements))


@st.composite
def vectors(draw, min_n=1, max_n=8, lo=-5.0, hi=5.0):
    n = draw(st.integers(min_n, max_n))
    return draw(arrays(np.float64, n, elements=st.floats(lo, hi, allow_nan=False, allow_infinity=False)))


@st.composite
def seeds(draw):
    return draw(st.integers(0, 2**32 - 1))
