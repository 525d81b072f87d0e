"""Dense kernels: matrix exponential, controllability Gramians, Lyapunov solves.

Node indices are 0-based throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from ctrlscore.errors import DimensionError, DomainError, InvalidInputError, StabilityError

TOL_STRUCT = 1e-10
MAX_EIGVEC_COND = 1e8
# Van Loan is applied on a sub-interval short enough that e^{-A tau} stays tame.
_VANLOAN_NORM_LIMIT = 1.0


def as_matrix(A) -> np.ndarray:
    """Validate and return ``A`` as a finite square float array."""
    if isinstance(A, SystemMatrix):
        return A.entries
    M = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix contains NaN or Inf entries")
    return M


@dataclass(frozen=True, eq=False)
class SystemMatrix:
    """State matrix ``A`` of ``dx/dt = A x`` with cached structural flags."""

    entries: np.ndarray
    tol_struct: float = TOL_STRUCT
    laplacian_derived: bool = False

    def __post_init__(self):
        M = as_matrix(self.entries).copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def _scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.entries))))

    @cached_property
    def is_symmetric(self) -> bool:
        A = self.entries
        return float(np.max(np.abs(A - A.T))) <= self.tol_struct * self._scale

    @cached_property
    def is_skew_symmetric(self) -> bool:
        A = self.entries
        return float(np.max(np.abs(A + A.T))) <= self.tol_struct * self._scale

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.entries)

    @cached_property
    def spectral_abscissa(self) -> float:
        return float(np.max(self.eigenvalues.real))

    @cached_property
    def is_stable(self) -> bool:
        return self.spectral_abscissa < -self.tol_struct


def matrix_exponential(A, t: float = 1.0) -> np.ndarray:
    """Return ``exp(A t)`` (scaling and squaring with a degree-13 Pade approximant)."""
    M = as_matrix(A)
    if not math.isfinite(t):
        raise InvalidInputError("t must be finite")
    return scipy.linalg.expm(M * t)


def _check_index(i: int, n: int) -> int:
    if not 0 <= int(i) < n:
        raise DimensionError(f"node index {i} out of range for n={n}")
    return int(i)


def _check_time(T: float) -> float:
    T = float(T)
    if not (math.isfinite(T) and T > 0):
        raise DomainError(f"terminal time must be positive and finite, got {T}")
    return T


def _symmetrize(W: np.ndarray) -> np.ndarray:
    return 0.5 * (W + W.T)


def _vanloan(M: np.ndarray, Q: np.ndarray, tau: float):
    """Return (int_0^tau e^{Ms} Q e^{M^T s} ds, e^{M tau}) via one block exponential."""
    n = M.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -M
    block[:n, n:] = Q
    block[n:, n:] = M.T
    E = scipy.linalg.expm(block * tau)
    F3 = E[n:, n:]
    G2 = E[:n, n:]
    return F3.T @ G2, F3.T


def _gramian(M: np.ndarray, Q: np.ndarray, T: float) -> np.ndarray:
    # W(2t) = W(t) + e^{Mt} W(t) e^{M^T t}
    norm = float(np.linalg.norm(M, 1))
    halvings = 0
    if norm * T > _VANLOAN_NORM_LIMIT:
        halvings = int(math.ceil(math.log2(norm * T / _VANLOAN_NORM_LIMIT)))
    tau = T / 2.0**halvings
    W, E = _vanloan(M, Q, tau)
    for _ in range(halvings):
        W = W + E @ W @ E.T
        E = E @ E
    return _symmetrize(W)


def finite_gramian(A, i: int, T: float) -> np.ndarray:
    """Single-input finite-horizon Gramian ``W_i(T) = int_0^T e^{At} e_i e_i^T e^{A^T t} dt``.

    Uses Van Loan's block exponential on a short sub-interval, then doubles
    the horizon with ``W(2t) = W(t) + e^{At} W(t) e^{A^T t}``.
    """
    M = as_matrix(A)
    n = M.shape[0]
    i = _check_index(i, n)
    T = _check_time(T)
    Q = np.zeros((n, n))
    Q[i, i] = 1.0
    return _gramian(M, Q, T)


def full_gramian(A, T: float) -> np.ndarray:
    """All-input Gramian ``int_0^T e^{At} e^{A^T t} dt``."""
    M = as_matrix(A)
    return _gramian(M, np.eye(M.shape[0]), _check_time(T))


def _simpson_weights(steps: int, h: float) -> np.ndarray:
    w = np.ones(steps + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def finite_gramians_quadrature(A, T: float, steps: int) -> np.ndarray:
    """Composite Simpson estimate of every ``W_i(T)``; shape ``(n, n, n)``."""
    M = as_matrix(A)
    T = _check_time(T)
    if steps < 2 or steps % 2:
        raise DomainError("steps must be an even integer >= 2")
    n = M.shape[0]
    h = T / steps
    weights = _simpson_weights(steps, h)
    out = np.zeros((n, n, n))
    for k, w in enumerate(weights):
        P = scipy.linalg.expm(M * (k * h))
        # Z_i(t) = P[:, i] P[:, i]^T
        out += w * np.einsum("ai,bi->iab", P, P)
    return 0.5 * (out + out.transpose(0, 2, 1))


def finite_gramian_quadrature(A, i: int, T: float, steps: int = 2048) -> np.ndarray:
    """Simpson-rule oracle for :func:`finite_gramian` (independent of Van Loan)."""
    M = as_matrix(A)
    i = _check_index(i, M.shape[0])
    return finite_gramians_quadrature(M, T, steps)[i]


def infinite_gramian(A, i: int) -> np.ndarray:
    """Infinite-horizon Gramian: PSD solution of ``A W + W A^T + e_i e_i^T = 0``."""
    sysm = A if isinstance(A, SystemMatrix) else SystemMatrix(A)
    if not sysm.is_stable:
        raise StabilityError("infinite-horizon Gramian requires a stable A")
    n = sysm.n
    i = _check_index(i, n)
    Q = np.zeros((n, n))
    Q[i, i] = 1.0
    W = scipy.linalg.solve_continuous_lyapunov(sysm.entries, -Q)
    return _symmetrize(W)


@dataclass(frozen=True, eq=False)
class GramianSet:
    """The ``n`` single-input Gramians ``W_i(T)`` for one ``(A, T)``, computed once."""

    A: np.ndarray
    T: float
    W: np.ndarray = field(repr=False)

    @classmethod
    def compute(cls, A, T: float) -> "GramianSet":
        M = as_matrix(A)
        T = _check_time(T)
        W = np.stack([finite_gramian(M, i, T) for i in range(M.shape[0])])
        M = M.copy()
        M.setflags(write=False)
        W.setflags(write=False)
        return cls(A=M, T=T, W=W)

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> np.ndarray:
        return self.W[i]

    def traces(self) -> np.ndarray:
        return np.einsum("iaa->i", self.W)


@dataclass(frozen=True)
class TailBoundReport:
    alpha: float
    c: float
    T: float
    bound: float
    residual_norm: float
    T_star: float | None = None
    eps: float | None = None

    @property
    def holds(self) -> bool:
        return self.residual_norm <= self.bound * (1 + 1e-12)


def tail_bound(A, T: float, eps: float | None = None) -> TailBoundReport:
    """Check ``||W_i^inf - W_i(T)|| <= c e^{2 alpha T}`` for every input node.

    ``c = -||P||^2 ||P^{-1}||^2 / (2 alpha)`` with ``P`` built from unit-norm
    eigenvectors, so ``||P|| ||P^{-1}||`` is the eigenvector condition number.
    When ``eps`` is given, also report the smallest horizon ``T_star`` at
    which the bound drops to ``eps``.
    """
    sysm = A if isinstance(A, SystemMatrix) else SystemMatrix(A)
    if not sysm.is_stable:
        raise StabilityError("tail bound requires a stable A")
    T = _check_time(T)
    evals, V = np.linalg.eig(sysm.entries)
    V = V / np.linalg.norm(V, axis=0)
    kappa = float(np.linalg.cond(V))
    if not math.isfinite(kappa) or kappa > MAX_EIGVEC_COND:
        raise DomainError(f"A is not (numerically) diagonalizable: cond(P) = {kappa:.3g}")
    alpha = float(np.max(evals.real))
    c = -(kappa**2) / (2.0 * alpha)
    T_star = None
    if eps is not None:
        if not 0 < eps < c:
            raise DomainError(f"eps must lie in (0, c={c:.6g})")
        T_star = math.log(eps / c) / (2.0 * alpha)
    residual = 0.0
    for i in range(sysm.n):
        tail = infinite_gramian(sysm, i) - finite_gramian(sysm.entries, i, T)
        residual = max(residual, float(np.linalg.norm(tail, 2)))
    return TailBoundReport(
        alpha=alpha,
        c=c,
        T=T,
        bound=c * math.exp(2.0 * alpha * T),
        residual_norm=residual,
        T_star=T_star,
        eps=eps,
    )
