import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctrlscore.errors import DimensionError, DomainError, InvalidInputError, StabilityError
from ctrlscore.fixtures import random_skew, random_stable
from ctrlscore.linops import (
    GramianSet,
    SystemMatrix,
    finite_gramian,
    finite_gramian_quadrature,
    full_gramian,
    infinite_gramian,
    matrix_exponential,
    tail_bound,
)
from oracles import expm_series
from strategies import seeds, square_matrices


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


# -- SystemMatrix flags


def test_flags_on_structured_matrices():
    S = SystemMatrix([[1.0, 2.0], [2.0, -1.0]])
    K = SystemMatrix([[0.0, 3.0], [-3.0, 0.0]])
    assert S.is_symmetric and not S.is_skew_symmetric
    assert K.is_skew_symmetric and not K.is_symmetric
    assert SystemMatrix(-np.eye(3)).is_stable
    assert not SystemMatrix(np.zeros((2, 2))).is_stable


def test_symmetry_tolerance_scales_with_magnitude():
    A = np.array([[0.0, 1e6], [1e6 + 1e-5, 0.0]])
    assert SystemMatrix(A).is_symmetric
    assert not SystemMatrix(np.array([[0.0, 1.0], [1.0 + 1e-8, 0.0]])).is_symmetric


def test_system_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        SystemMatrix(np.zeros((2, 3)))
    with pytest.raises(InvalidInputError):
        SystemMatrix([[np.nan]])


# -- matrix exponential


def test_expm_examples():
    assert np.array_equal(matrix_exponential(np.zeros((2, 2)), 5.0), np.eye(2))
    assert np.allclose(matrix_exponential([[0.0, 1.0], [0.0, 0.0]], 1.0), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)
    assert matrix_exponential([[-1.0]], 1.0)[0, 0] == pytest.approx(expm_series([[-1.0]])[0, 0], rel=1e-14)
    assert matrix_exponential([[-1.0]], 1.0)[0, 0] == pytest.approx(0.36787944117144233, rel=1e-15)


def test_expm_errors():
    with pytest.raises(DimensionError):
        matrix_exponential(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        matrix_exponential([[np.inf]])
    with pytest.raises(InvalidInputError):
        matrix_exponential([[1.0]], math.nan)


@given(square_matrices(max_n=6), st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_expm_semigroup(A, s, t):
    lhs = matrix_exponential(A, s + t)
    rhs = matrix_exponential(A, s) @ matrix_exponential(A, t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


@given(square_matrices(max_n=5), st.floats(0.0, 3.0))
def test_expm_matches_series_oracle(A, t):
    ref = expm_series(A, t)
    assert rel(matrix_exponential(A, t), ref) <= 1e-12


# -- finite Gramians


def test_gramian_examples():
    assert finite_gramian([[0.0]], 0, 2.0)[0, 0] == pytest.approx(2.0, rel=1e-15)
    assert finite_gramian([[-1.0]], 0, 1.0)[0, 0] == pytest.approx((1 - math.exp(-2)) / 2, rel=1e-14)
    assert finite_gramian([[-1.0]], 0, 1.0)[0, 0] == pytest.approx(0.432332, abs=1e-6)
    R = [[0.0, 1.0], [-1.0, 0.0]]
    T = 3.7
    W = 0.5 * (finite_gramian(R, 0, T) + finite_gramian(R, 1, T))
    assert np.allclose(W, T / 2 * np.eye(2), atol=1e-13)


def test_quadrature_examples():
    assert finite_gramian_quadrature([[0.0]], 0, 2.0, steps=64)[0, 0] == pytest.approx(2.0, abs=1e-12)
    q = finite_gramian_quadrature([[-1.0]], 0, 1.0, steps=256)
    assert abs(q[0, 0] - finite_gramian([[-1.0]], 0, 1.0)[0, 0]) <= 1e-10
    W = finite_gramian_quadrature([[0.0, 1.0], [-1.0, 0.0]], 0, 3.0, steps=512)
    assert np.allclose(W, W.T)
    assert np.min(np.linalg.eigvalsh(W)) >= -1e-12
    assert np.trace(W) == pytest.approx(3.0, abs=1e-10)


def test_quadrature_fourth_order():
    A = np.array([[-0.3, 1.0], [-0.7, -0.2]])
    exact = finite_gramian(A, 0, 2.0)
    e1 = rel(finite_gramian_quadrature(A, 0, 2.0, steps=16), exact)
    e2 = rel(finite_gramian_quadrature(A, 0, 2.0, steps=32), exact)
    assert 12 < e1 / e2 < 20


def test_quadrature_step_validation():
    with pytest.raises((DomainError, ValueError)):
        finite_gramian_quadrature([[0.0]], 0, 1.0, steps=3)


def test_gramian_errors():
    with pytest.raises(DomainError):
        finite_gramian([[0.0]], 0, 0.0)
    with pytest.raises(DomainError):
        finite_gramian([[0.0]], 0, -1.0)
    with pytest.raises(DimensionError):
        finite_gramian([[0.0]], 1, 1.0)


@settings(max_examples=25)
@given(square_matrices(min_n=1, max_n=8), st.sampled_from([0.1, 1.0, 10.0]), st.data())
def test_gramian_matches_quadrature(A, T, data):
    i = data.draw(st.integers(0, A.shape[0] - 1))
    assert rel(finite_gramian(A, i, T), finite_gramian_quadrature(A, i, T, steps=2048)) <= 1e-8


@given(square_matrices(max_n=6), st.floats(0.05, 5.0))
def test_gramianset_invariants(A, T):
    gs = GramianSet.compute(A, T)
    total = np.zeros_like(A)
    for W in gs.W:
        tr = np.trace(W)
        assert tr > 0
        assert np.array_equal(W, W.T)
        assert np.min(np.linalg.eigvalsh(W)) >= -1e-10 * tr
        total = total + W
    assert rel(total, full_gramian(A, T)) <= 1e-8


@given(square_matrices(max_n=5), st.floats(0.05, 3.0), st.floats(1.01, 3.0))
def test_gramian_monotone_in_T(A, T1, factor):
    for i in range(A.shape[0]):
        W1, W2 = finite_gramian(A, i, T1), finite_gramian(A, i, T1 * factor)
        assert np.min(np.linalg.eigvalsh(W2 - W1)) >= -1e-10 * np.trace(W2)


@given(seeds(), st.integers(1, 7), st.floats(0.1, 20.0))
def test_skew_trace_equals_T(seed, n, T):
    A = random_skew(n, seed)
    for i in range(n):
        assert abs(np.trace(finite_gramian(A, i, T)) - T) <= 1e-10 * max(1.0, T)


@given(seeds(), st.integers(1, 6))
def test_small_T_expansion(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    A /= max(np.linalg.norm(A, 2), 1e-12)
    p = rng.dirichlet(np.ones(n))

    def err(T):
        W = np.tensordot(p, GramianSet.compute(A, T).W, axes=1)
        return np.linalg.norm(W - T * np.diag(p), 2)

    C1, C2 = err(0.01) / 0.01**2, err(0.005) / 0.005**2
    # the quadratic term dominates: the ratio test gives the same constant
    assert C2 <= 1.1 * C1 + 1e-12
    assert err(0.01) <= 1.1 * C1 * 0.01**2


def test_large_horizon_no_overflow():
    A = random_stable(6, 3)
    W = finite_gramian(A, 2, 100.0)
    assert np.all(np.isfinite(W))
    assert rel(W, infinite_gramian(A, 2)) < 1e-8


# -- infinite Gramian and tail bound


def test_infinite_gramian_examples():
    assert infinite_gramian([[-1.0]], 0)[0, 0] == pytest.approx(0.5, rel=1e-14)
    assert np.allclose(infinite_gramian(-np.eye(2), 0), np.diag([0.5, 0.0]), atol=1e-15)
    assert np.allclose(infinite_gramian(np.diag([-1.0, -2.0]), 1), np.diag([0.0, 0.25]), atol=1e-15)
    with pytest.raises(StabilityError):
        infinite_gramian(np.zeros((2, 2)), 0)


@given(seeds(), st.integers(1, 6), st.floats(0.1, 10.0))
def test_stable_split(seed, n, T):
    A = random_stable(n, seed)
    W_inf = infinite_gramian(A, 0)
    W_T = finite_gramian(A, 0, T)
    tail = W_inf - W_T
    # the tail equals e^{AT} W_inf e^{A^T T}
    E = matrix_exponential(A, T)
    assert np.linalg.norm(tail - E @ W_inf @ E.T) <= 1e-8 * max(1.0, np.linalg.norm(W_inf))
    assert np.min(np.linalg.eigvalsh(tail)) >= -1e-10


def test_tail_bound_scalar_tight():
    rep = tail_bound([[-1.0]], 1.0)
    assert rep.alpha == -1.0
    assert rep.c == pytest.approx(0.5, rel=1e-15)
    assert rep.residual_norm == pytest.approx(math.exp(-2) / 2, rel=1e-12)
    assert rep.bound == pytest.approx(0.5 * math.exp(-2), rel=1e-15)
    assert abs(rep.residual_norm - rep.bound) <= 1e-12
    assert rep.holds


def test_tail_bound_T_star():
    rep = tail_bound([[-1.0]], 1.0, eps=0.01)
    assert rep.T_star == pytest.approx(math.log(0.02) / -2, rel=1e-14)
    assert rep.T_star == pytest.approx(1.9560, abs=1e-4)


@pytest.mark.parametrize("T", [0.1, 1.0, 5.0])
def test_tail_bound_identity(T):
    rep = tail_bound(-np.eye(2), T)
    assert rep.c > 0 and rep.holds


def test_tail_bound_errors():
    with pytest.raises(StabilityError):
        tail_bound([[0.5]], 1.0)
    with pytest.raises(DomainError):
        tail_bound([[-1.0]], 1.0, eps=0.5)
    with pytest.raises(DomainError):
        tail_bound([[-1.0, 1.0], [0.0, -1.0]], 1.0)  # Jordan block
