import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ctrlscore.errors import DimensionError, InvalidInputError, SizeError
from ctrlscore.simplex import is_on_simplex, project_simplex, project_simplex_bruteforce
from oracles import simplex_projection_kkt
from strategies import vectors


@pytest.mark.parametrize(
    "v, expected",
    [
        ((0.5, 0.5), (0.5, 0.5)),
        ((2.0, 0.0), (1.0, 0.0)),
        ((0.3, 0.3, 0.3), (1 / 3, 1 / 3, 1 / 3)),
    ],
)
def test_projection_examples(v, expected):
    assert np.allclose(project_simplex(v), expected, atol=1e-15)


@pytest.mark.parametrize(
    "v, expected",
    [((2.0, 0.0), (1.0, 0.0)), ((1.0, 1.0), (0.5, 0.5)), ((-1.0, -1.0, 3.0), (0.0, 0.0, 1.0))],
)
def test_bruteforce_examples(v, expected):
    assert np.allclose(project_simplex_bruteforce(v), expected, atol=1e-15)


def test_errors():
    with pytest.raises(DimensionError):
        project_simplex([])
    with pytest.raises(InvalidInputError):
        project_simplex([np.nan, 1.0])
    with pytest.raises(SizeError):
        project_simplex_bruteforce(np.zeros(7))


def test_ties_map_to_exact_zero():
    p = project_simplex([1.0, 0.0, 0.0])
    assert p[1] == 0.0 and p[2] == 0.0


@given(vectors(max_n=40))
def test_output_on_simplex(v):
    p = project_simplex(v)
    assert is_on_simplex(p, atol=1e-12)


@given(vectors())
def test_idempotent(v):
    p = project_simplex(v)
    assert np.allclose(project_simplex(p), p, atol=1e-15, rtol=0)


@given(vectors(), vectors())
def test_nonexpansive(u, v):
    n = min(u.size, v.size)
    u, v = u[:n], v[:n]
    assert np.linalg.norm(project_simplex(u) - project_simplex(v)) <= np.linalg.norm(u - v) + 1e-12


@given(vectors(), st.floats(-100, 100))
def test_translation_invariance(v, s):
    assert np.max(np.abs(project_simplex(v + s) - project_simplex(v))) <= 1e-12


@given(vectors(min_n=2, max_n=6))
def test_matches_bruteforce(v):
    assert np.max(np.abs(project_simplex(v) - project_simplex_bruteforce(v))) <= 1e-12


@given(vectors(min_n=1, max_n=6))
def test_bruteforce_matches_kkt_oracle(v):
    assert np.max(np.abs(project_simplex_bruteforce(v) - simplex_projection_kkt(v))) <= 1e-12


@given(vectors(min_n=1, max_n=6))
def test_projection_is_closest_vertex_combination(v):
    p = project_simplex(v)
    # variational inequality: (v - p)^T (e_i - p) <= 0 for every vertex
    g = v - p
    assert np.max(g - g @ p) <= 1e-12 * max(1.0, np.max(np.abs(v)))
