"""Seeded synthetic systems and connectivity data for tests and scripts."""

from __future__ import annotations

import numpy as np


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_connected_undirected(n: int, seed=None, density: float = 0.4, weights=(0.5, 2.0)) -> np.ndarray:
    """Symmetric weighted adjacency of a connected graph (random spanning tree plus extra edges)."""
    rng = rng_from(seed)
    adj = np.zeros((n, n))
    order = rng.permutation(n)
    for k in range(1, n):
        i, j = order[k], order[rng.integers(k)]
        adj[i, j] = adj[j, i] = rng.uniform(*weights)
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j] == 0 and rng.random() < density:
                adj[i, j] = adj[j, i] = rng.uniform(*weights)
    return adj


def undirected_laplacian(adj: np.ndarray) -> np.ndarray:
    return np.diag(adj.sum(axis=1)) - adj


def random_stable(n: int, seed=None, abscissa=(-1.0, -0.2)) -> np.ndarray:
    """Gaussian matrix shifted so its spectral abscissa is uniform in ``abscissa``."""
    rng = rng_from(seed)
    R = rng.normal(size=(n, n)) / np.sqrt(n)
    target = rng.uniform(*abscissa)
    return R - (np.max(np.linalg.eigvals(R).real) - target) * np.eye(n)


def random_skew(n: int, seed=None, scale: float = 1.0) -> np.ndarray:
    rng = rng_from(seed)
    R = rng.normal(scale=scale, size=(n, n))
    return R - R.T


def random_unit_norm(n: int, seed=None) -> np.ndarray:
    """Gaussian matrix rescaled to spectral norm one."""
    rng = rng_from(seed)
    R = rng.normal(size=(n, n))
    return R / np.linalg.norm(R, 2)


def random_connectivity(n: int, seed=None, density: float = 0.3) -> np.ndarray:
    """Directed connection-probability matrix, strongly connected via a random cycle."""
    rng = rng_from(seed)
    C = rng.uniform(0.0, 1.0, (n, n)) * (rng.random((n, n)) < density)
    order = rng.permutation(n)
    for a, b in zip(order, np.roll(order, -1)):
        if C[a, b] == 0:
            C[a, b] = rng.uniform(0.05, 1.0)
    np.fill_diagonal(C, 0.0)
    return C


# One degree-6 hub (node index 4) and two degree-1 leaves (indices 5 and 7).
HUB_GRAPH_EDGES = (
    (4, 0), (4, 1), (4, 2), (4, 3), (4, 5), (4, 6),
    (0, 1), (1, 2), (2, 3), (3, 9), (6, 8), (8, 9), (8, 7),
)
HUB_NODE = 4
LEAF_NODES = (5, 7)


def hub_graph() -> np.ndarray:
    """Unit-weight 10-node undirected graph with a hub and two leaves."""
    adj = np.zeros((10, 10))
    for i, j in HUB_GRAPH_EDGES:
        adj[i, j] = adj[j, i] = 1.0
    return adj
