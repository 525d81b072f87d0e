"""Scoring objectives ``f_T = -log det W(p,T)`` (VCS) and ``g_T = tr W(p,T)^{-1}`` (AECS).

Gradients and Hessians follow directly from the Gramian set; the weighted
Gramian is factored once per evaluation and never explicitly inverted
except through Cholesky solves.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from ctrlscore.errors import DimensionError, DomainError
from ctrlscore.linops import GramianSet

OUT_OF_DOMAIN = sys.float_info.max


class Kind(str, Enum):
    VCS = "vcs"
    AECS = "aecs"


def as_kind(kind) -> Kind:
    return kind if isinstance(kind, Kind) else Kind(str(kind).lower())


@dataclass(frozen=True)
class ScoringProblem:
    """One scoring problem: objective, Gramians, line-search and stopping constants."""

    kind: Kind
    gramians: GramianSet
    tol_psd: float = 1e-12
    sigma: float = 1e-4
    rho: float = 0.5
    alpha0: float = 1.0
    eps_step: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "kind", as_kind(self.kind))
        if not (0 < self.sigma < 1 and 0 < self.rho < 1):
            raise DomainError("sigma and rho must lie in (0, 1)")
        if not self.alpha0 > 0:
            raise DomainError("alpha0 must be positive")
        if self.eps_step < 0:
            raise DomainError("eps_step must be nonnegative")

    @property
    def T(self) -> float:
        return self.gramians.T

    @property
    def n(self) -> int:
        return self.gramians.n

    @classmethod
    def build(cls, A, T: float, kind, **kwargs) -> "ScoringProblem":
        return cls(kind=as_kind(kind), gramians=GramianSet.compute(A, T), **kwargs)


@dataclass(frozen=True, eq=False)
class ObjectiveEval:
    value: float
    gradient: np.ndarray | None
    in_domain: bool
    gramian_weighted: np.ndarray
    chol: np.ndarray | None = field(default=None, repr=False)
    inverse: np.ndarray | None = field(default=None, repr=False)


def weighted_gramian(p, gramians: GramianSet) -> np.ndarray:
    """``W(p,T) = sum_i p_i W_i(T)``, symmetrized."""
    p = np.asarray(p, dtype=float)
    if p.shape != (gramians.n,):
        raise DimensionError(f"weights of shape {p.shape} do not match n={gramians.n}")
    W = np.tensordot(p, gramians.W, axes=1)
    return 0.5 * (W + W.T)


def _factor(W: np.ndarray, tol_psd: float):
    """Cholesky factor of ``W`` or ``None`` when a pivot falls below the guard."""
    n = W.shape[0]
    scale = np.trace(W) / n
    if not (np.isfinite(scale) and scale > 0):
        return None
    try:
        L = np.linalg.cholesky(W)
    except np.linalg.LinAlgError:
        return None
    if np.min(np.diag(L)) ** 2 <= tol_psd * scale:
        return None
    return L


def _inverse(L: np.ndarray) -> np.ndarray:
    Winv = scipy.linalg.cho_solve((L, True), np.eye(L.shape[0]))
    return 0.5 * (Winv + Winv.T)


def eval_objective(p, prob: ScoringProblem) -> ObjectiveEval:
    """Value and gradient of the chosen objective at ``p``.

    Outside the domain (``W(p,T)`` not numerically positive definite) the
    value is the largest finite float and ``in_domain`` is False.
    """
    W = weighted_gramian(p, prob.gramians)
    L = _factor(W, prob.tol_psd)
    if L is None:
        return ObjectiveEval(OUT_OF_DOMAIN, None, False, W)
    Winv = _inverse(L)
    Wi = prob.gramians.W
    if prob.kind is Kind.VCS:
        value = -2.0 * float(np.sum(np.log(np.diag(L))))
        # -tr(W^{-1} W_i); both factors symmetric
        grad = -np.einsum("ab,iab->i", Winv, Wi)
    else:
        value = float(np.trace(Winv))
        W2 = Winv @ Winv
        grad = -np.einsum("ab,iab->i", 0.5 * (W2 + W2.T), Wi)
    return ObjectiveEval(value, grad, True, W, L, Winv)


def tangent_step(p, q) -> np.ndarray:
    """``q - p`` with its mean removed, so it sums to zero."""
    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    return d - d.mean()


def objective_change(p, q, ev_p: ObjectiveEval, ev_q: ObjectiveEval, prob: ScoringProblem) -> float:
    """``h(q) - h(p)`` for two simplex points, evaluated from ``W(q - p)``.

    Subtracting two nearly equal objective values loses every significant
    digit near the optimum; both identities below keep relative accuracy.
    The component of ``q - p`` along the ones vector is sum round-off and is
    dropped (see :func:`tangent_step`).
    """
    if not (ev_p.in_domain and ev_q.in_domain):
        return math.inf
    dW = weighted_gramian(tangent_step(p, q), prob.gramians)
    if prob.kind is Kind.VCS:
        # log det W_q - log det W_p = log det(I + L^{-1} dW L^{-T})
        X = scipy.linalg.solve_triangular(ev_p.chol, dW, lower=True)
        X = scipy.linalg.solve_triangular(ev_p.chol, X.T, lower=True)
        mu = np.linalg.eigvalsh(0.5 * (X + X.T))
        return -float(np.sum(np.log1p(mu)))
    # W_q^{-1} - W_p^{-1} = -W_p^{-1} dW W_q^{-1}
    return -float(np.sum((ev_p.inverse @ dW) * ev_q.inverse.T))


def eval_hessian(p, prob: ScoringProblem) -> np.ndarray:
    W = weighted_gramian(p, prob.gramians)
    L = _factor(W, prob.tol_psd)
    if L is None:
        raise DomainError("W(p,T) is singular; Hessian undefined")
    Winv = _inverse(L)
    B = np.einsum("ab,ibc->iac", Winv, prob.gramians.W)  # W^{-1} W_i
    if prob.kind is Kind.VCS:
        H = np.einsum("iab,jba->ij", B, B)
    else:
        C = np.einsum("iab,bc->iac", B, Winv)  # W^{-1} W_j W^{-1}, symmetric
        H = 2.0 * np.einsum("iab,jba->ij", B, C)
    return 0.5 * (H + H.T)


def eval_surrogate(p, T: float, kind) -> float:
    """Small-horizon surrogate, exact when ``A = 0``: ``W ~ T diag(p)``."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise DomainError("surrogate objectives need strictly positive weights")
    if not T > 0:
        raise DomainError("T must be positive")
    if as_kind(kind) is Kind.VCS:
        return -p.size * math.log(T) - float(np.sum(np.log(p)))
    return float(np.sum(1.0 / p)) / T


def surrogate_minimizer(n: int) -> np.ndarray:
    """Unique minimizer of both surrogates on the open simplex: the uniform vector."""
    if n < 1:
        raise DimensionError("n must be at least 1")
    return np.full(n, 1.0 / n)
