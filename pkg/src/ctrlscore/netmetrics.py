"""Graph construction from connectivity data and node-level centrality metrics.

Orientation convention: ``C[i, j]`` is the weight of the connection from
region ``i`` to region ``j``. The Laplacian dynamics use ``Adj = C^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from ctrlscore.errors import ConvergenceError, DegenerateError, DimensionError, DomainError, SchemaError
from ctrlscore.linops import GramianSet, SystemMatrix, finite_gramian

METRICS = ("indegree", "outdegree", "betweenness", "pagerank", "avg_ctrl", "vce", "ace", "vcs", "aecs")
CLASSICAL = ("indegree", "outdegree", "betweenness", "pagerank", "avg_ctrl")
SCORES = ("aecs", "vcs")
PAGERANK_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class ConnectivityMatrix:
    C: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] == 0:
            raise DimensionError(f"connectivity must be a non-empty square matrix, got {C.shape}")
        if not np.all(np.isfinite(C)):
            raise DomainError("connectivity contains NaN or Inf")
        if np.any(C < 0):
            raise DomainError("connectivity weights must be nonnegative")
        C = C.copy()
        np.fill_diagonal(C, 0.0)
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != C.shape[0]:
                raise DimensionError("label count does not match matrix size")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True, eq=False)
class LaplacianSystem:
    L: np.ndarray
    mode: str
    A: SystemMatrix = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "A", SystemMatrix(-self.L, laplacian_derived=True))

    @property
    def n(self) -> int:
        return self.L.shape[0]


@dataclass
class CentralityReport:
    metric: str
    values: np.ndarray
    params: dict = field(default_factory=dict)


def _as_conn(C) -> ConnectivityMatrix:
    return C if isinstance(C, ConnectivityMatrix) else ConnectivityMatrix(C)


def build_laplacian(C, mode: str = "directed") -> LaplacianSystem:
    """Graph Laplacian ``L = diag(row sums of Adj) - Adj`` and dynamics ``A = -L``.

    ``directed`` uses ``Adj = C^T``; ``undirected`` uses ``(C + C^T) / 2``.
    """
    conn = _as_conn(C)
    if mode == "directed":
        adj = conn.C.T
    elif mode == "undirected":
        adj = 0.5 * (conn.C + conn.C.T)
    else:
        raise ValueError(f"unknown Laplacian mode {mode!r}")
    L = np.diag(adj.sum(axis=1)) - adj
    return LaplacianSystem(L=L, mode=mode)


def degree_centrality(C) -> tuple[np.ndarray, np.ndarray]:
    """Weighted (in-degree, out-degree): column sums and row sums of ``C``."""
    conn = _as_conn(C)
    return conn.C.sum(axis=0), conn.C.sum(axis=1)


def to_digraph(C, binarize: bool = False) -> nx.DiGraph:
    conn = _as_conn(C)
    G = nx.DiGraph()
    G.add_nodes_from(range(conn.n))
    for i, j in zip(*np.nonzero(conn.C > 0)):
        w = 1.0 if binarize else float(conn.C[i, j])
        G.add_edge(int(i), int(j), weight=w, length=1.0 / w)
    return G


def betweenness(C, binarize: bool = False) -> np.ndarray:
    """Unnormalized directed betweenness with edge length ``1 / weight``."""
    conn = _as_conn(C)
    bc = nx.betweenness_centrality(to_digraph(conn, binarize), weight="length", normalized=False)
    return np.array([bc[i] for i in range(conn.n)])


def pagerank(C, damping: float = 0.85, tol: float = 1e-10) -> np.ndarray:
    """Power-iteration PageRank following edges ``i -> j`` with weight ``C[i, j]``.

    Dangling nodes spread their mass uniformly. Iterates until the L1 change
    drops below ``tol``.
    """
    conn = _as_conn(C)
    if not 0 < damping < 1:
        raise DomainError("damping must lie in (0, 1)")
    n = conn.n
    out = conn.C.sum(axis=1)
    dangling = out == 0
    P = np.divide(conn.C, out[:, None], out=np.zeros_like(conn.C), where=~dangling[:, None])
    x = np.full(n, 1.0 / n)
    for _ in range(PAGERANK_MAX_ITER):
        nxt = damping * (x @ P + x[dangling].sum() / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        if np.abs(nxt - x).sum() < tol:
            return nxt
        x = nxt
    raise ConvergenceError(f"PageRank did not converge in {PAGERANK_MAX_ITER} iterations")


def _sys_matrix(sys) -> np.ndarray:
    if isinstance(sys, LaplacianSystem):
        return sys.A.entries
    if isinstance(sys, SystemMatrix):
        return sys.entries
    return np.asarray(sys, dtype=float)


def average_controllability(sys, j: int, T: float) -> float:
    """``tr W_j(T)`` for the single-input system actuated at node ``j``."""
    return float(np.trace(finite_gramian(_sys_matrix(sys), j, T)))


def _gramian_spectrum(sys, j: int, T: float, gramian: np.ndarray | None) -> np.ndarray:
    W = finite_gramian(_sys_matrix(sys), j, T) if gramian is None else gramian
    lam = np.linalg.eigvalsh(0.5 * (W + W.T))
    if lam[-1] <= 0:
        raise DegenerateError("Gramian is zero")
    return lam


def _rank_cut(lam: np.ndarray, rank_tol: float | None) -> np.ndarray:
    n = lam.size
    tol = np.finfo(float).eps if rank_tol is None else rank_tol
    return lam[lam > tol * lam[-1] * n]


def vce_centrality(sys, j: int, T: float, rank_tol: float | None = None, gramian=None) -> float:
    """Sum of log eigenvalues of ``W_j(T)`` over its numerical rank.

    Eigenvalues at or below ``rank_tol * n * lambda_max`` (default
    ``rank_tol`` = machine epsilon) are treated as zero.
    """
    lam = _rank_cut(_gramian_spectrum(sys, j, T, gramian), rank_tol)
    return float(np.sum(np.log(lam)))


def ace_centrality(sys, j: int, T: float, rank_tol: float | None = None, gramian=None) -> float:
    """``tr(W_j(T)^+)`` with the same rank cut as :func:`vce_centrality`."""
    lam = _rank_cut(_gramian_spectrum(sys, j, T, gramian), rank_tol)
    return float(np.sum(1.0 / lam))


def gramian_rank(sys, j: int, T: float, rank_tol: float | None = None) -> int:
    return int(_rank_cut(_gramian_spectrum(sys, j, T, None), rank_tol).size)


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError("pearson needs two vectors of equal length")
    if x.size < 2:
        raise DimensionError("pearson needs at least two samples")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise DegenerateError("correlation undefined for a constant input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def node_metrics(C, T: float = 100.0, metrics=CLASSICAL, damping: float = 0.85, gramians: GramianSet | None = None):
    """Classical per-node metrics for one individual; returns ``{metric: values}``."""
    conn = _as_conn(C)
    out = {}
    indeg, outdeg = degree_centrality(conn)
    for m in metrics:
        if m == "indegree":
            out[m] = indeg
        elif m == "outdegree":
            out[m] = outdeg
        elif m == "betweenness":
            out[m] = betweenness(conn)
        elif m == "pagerank":
            out[m] = pagerank(conn, damping)
        elif m in ("avg_ctrl", "vce", "ace"):
            if gramians is None:
                gramians = GramianSet.compute(build_laplacian(conn).A.entries, T)
            if m == "avg_ctrl":
                out[m] = gramians.traces()
            elif m == "vce":
                out[m] = np.array([vce_centrality(None, j, T, gramian=gramians[j]) for j in range(conn.n)])
            else:
                out[m] = np.array([ace_centrality(None, j, T, gramian=gramians[j]) for j in range(conn.n)])
        else:
            raise ValueError(f"unknown metric {m!r}")
    return out


def correlation_study(reports, pairs=None, ddof: int = 1) -> list[dict]:
    """Mean and standard deviation across individuals of per-individual Pearson correlations.

    ``reports`` is a sequence of ``{metric: values}`` mappings, one per
    individual. The default pairs are every score (AECS, VCS) against every
    classical metric, in that order.
    """
    reports = list(reports)
    if len(reports) < 2:
        raise SchemaError("correlation study needs at least two individuals")
    if pairs is None:
        pairs = [(s, m) for s in SCORES for m in CLASSICAL]
    n = None
    for rep in reports:
        for key, vals in rep.items():
            size = np.asarray(vals).shape[0]
            if n is None:
                n = size
            elif size != n:
                raise SchemaError(f"metric {key!r} has {size} nodes, expected {n}")
    rows = []
    for a, b in pairs:
        try:
            r = np.array([pearson(rep[a], rep[b]) for rep in reports])
        except KeyError as exc:
            raise SchemaError(f"missing metric {exc.args[0]!r}") from None
        rows.append(
            {
                "score": a,
                "metric": b,
                "mean": float(r.mean()),
                "std": float(r.std(ddof=ddof)) if r.size > ddof else 0.0,
                "count": int(r.size),
            }
        )
    return rows
