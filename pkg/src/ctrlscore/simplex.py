"""Euclidean projection onto the standard simplex."""

from __future__ import annotations

import itertools

import numpy as np

from ctrlscore.errors import DimensionError, InvalidInputError, SizeError

BRUTEFORCE_MAX_N = 6


def _as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector contains NaN or Inf entries")
    return v


def project_simplex(v) -> np.ndarray:
    """Return ``argmin_{p in simplex} ||p - v||``.

    Sort-based threshold: ``p_i = max(v_i - tau, 0)`` with ``tau`` chosen so the
    entries sum to one. The result is renormalized to remove round-off drift.
    """
    v = _as_vector(v)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    tau = css[rho] / (rho + 1)
    p = np.maximum(v - tau, 0.0)
    return p / p.sum()


def project_simplex_bruteforce(v) -> np.ndarray:
    """Active-set enumeration oracle for :func:`project_simplex` (``n <= 6``)."""
    v = _as_vector(v)
    n = v.size
    if n > BRUTEFORCE_MAX_N:
        raise SizeError(f"brute-force projection supports n <= {BRUTEFORCE_MAX_N}, got {n}")
    best, best_dist = None, np.inf
    for k in range(1, n + 1):
        for support in itertools.combinations(range(n), k):
            idx = list(support)
            p = np.zeros(n)
            # min ||p_S - v_S|| s.t. sum p_S = 1  =>  p_S = v_S - (sum v_S - 1)/|S|
            p[idx] = v[idx] - (v[idx].sum() - 1.0) / k
            if np.any(p[idx] < 0):
                continue
            dist = float(np.sum((p - v) ** 2))
            if dist < best_dist:
                best, best_dist = p, dist
    return best / best.sum()


def is_on_simplex(p, atol: float = 1e-12) -> bool:
    p = np.asarray(p, dtype=float)
    return bool(p.ndim == 1 and p.size >= 1 and np.all(p >= 0) and abs(p.sum() - 1.0) <= atol)
