"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np


def expm_series(A, t=1.0, terms=40):
    """Taylor series with scaling and squaring (no Pade)."""
    M = np.asarray(A, dtype=float) * t
    norm = np.linalg.norm(M, 1)
    s = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0 else 0
    X = M / 2.0**s
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, terms):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def simplex_projection_kkt(v):
    """Enumerate supports; solve each KKT system with a dense linear solve."""
    v = np.asarray(v, dtype=float)
    n = v.size
    best, best_d = None, math.inf
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            # unknowns: p_S (k) and multiplier mu; p_S - v_S + mu = 0, sum p_S = 1
            K = np.zeros((k + 1, k + 1))
            K[:k, :k] = np.eye(k)
            K[:k, k] = 1.0
            K[k, :k] = 1.0
            rhs = np.concatenate([v[list(S)], [1.0]])
            sol = np.linalg.solve(K, rhs)
            p = np.zeros(n)
            p[list(S)] = sol[:k]
            if np.any(p < -1e-15):
                continue
            d = float(np.sum((p - v) ** 2))
            if d < best_d - 1e-15:
                best, best_d = np.maximum(p, 0.0), d
    return best


def betweenness_bruteforce(C, binarize=False):
    """Unnormalized directed betweenness by enumerating every simple path."""
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    length = {}
    for i in range(n):
        for j in range(n):
            if i != j and C[i, j] > 0:
                length[(i, j)] = 1.0 if binarize else 1.0 / C[i, j]
    bc = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            paths = []
            others = [v for v in range(n) if v not in (s, t)]
            for k in range(len(others) + 1):
                for mid in itertools.permutations(others, k):
                    path = (s, *mid, t)
                    hops = list(zip(path[:-1], path[1:]))
                    if all(h in length for h in hops):
                        paths.append((sum(length[h] for h in hops), path))
            if not paths:
                continue
            best = min(L for L, _ in paths)
            shortest = [p for L, p in paths if L <= best * (1 + 1e-12)]
            for p in shortest:
                for v in p[1:-1]:
                    bc[v] += 1.0 / len(shortest)
    return bc


def pagerank_linear(C, damping=0.85):
    """Stationary vector of the Google matrix by a direct linear solve."""
    C = np.asarray(C, dtype=float).copy()
    np.fill_diagonal(C, 0.0)
    n = C.shape[0]
    out = C.sum(axis=1)
    P = np.zeros((n, n))
    for i in range(n):
        P[i] = C[i] / out[i] if out[i] > 0 else 1.0 / n
    G = damping * P + (1 - damping) / n
    # x^T G = x^T, sum x = 1
    M = np.vstack([G.T - np.eye(n), np.ones(n)])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    return np.linalg.lstsq(M, rhs, rcond=None)[0]


def tangent_direction(rng, n):
    d = rng.normal(size=n)
    d -= d.mean()
    return d / np.linalg.norm(d)


def central_difference(fun, p, d, h=1e-6):
    return (fun(p + h * d) - fun(p - h * d)) / (2 * h)
