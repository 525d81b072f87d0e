"""Numerical certificates for uniqueness and the symmetric / skew-symmetric special cases."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg

from ctrlscore.errors import DimensionError, DomainError, StructureError
from ctrlscore.linops import GramianSet, SystemMatrix, as_matrix
from ctrlscore.objective import Kind, ScoringProblem, eval_objective

TOL_CERT = 1e-10
TOL_SPECTRAL = 1e-8
TOL_UNIFORM = 1e-5
R_RTOL = 1e-10
R_MAX_INTERVALS = 2**20
R_MIN_INTERVALS = 16


@dataclass(frozen=True)
class UniquenessCertificate:
    T: float
    detR: float
    margin: float
    verdict: str  # "certified-unique" | "inconclusive"
    common_eigs: bool
    intervals: int

    @property
    def spectral_unique(self) -> bool:
        """No shared eigenvalue of ``A`` and ``-A``: unique for every ``T``."""
        return not self.common_eigs

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spectral_unique"] = self.spectral_unique
        return d


def _squared_exp(A: np.ndarray, t: float) -> np.ndarray:
    return scipy.linalg.expm(A * t) ** 2


def _panel(M: np.ndarray, a: float, b: float, rtol: float, max_intervals: int):
    """Simpson estimate on ``[a, b]`` with step halving and node reuse."""
    n = M.shape[0]
    m = R_MIN_INTERVALS
    h = (b - a) / m
    vals = [_squared_exp(M, a + k * h) for k in range(m + 1)]
    ends = vals[0] + vals[-1]
    odd = sum(vals[1:-1:2])
    even = sum(vals[2:-1:2]) if m > 2 else np.zeros((n, n))
    est = (ends + 4 * odd + 2 * even) * h / 3
    while m < max_intervals:
        m *= 2
        h = (b - a) / m
        even = even + odd
        odd = sum(_squared_exp(M, a + k * h) for k in range(1, m, 2))
        new = (ends + 4 * odd + 2 * even) * h / 3
        delta = np.linalg.norm(new - est) / max(np.linalg.norm(new), np.finfo(float).tiny)
        est = new
        if delta < rtol:
            break
    return est, m


def _panel_edges(M: np.ndarray, T: float) -> list[float]:
    # geometric panels: short where fast transients live, long afterwards
    first = min(T, 1.0 / max(np.linalg.norm(M, 1), 1e-300))
    edges = [0.0, first]
    while edges[-1] < T:
        edges.append(min(T, 2.0 * edges[-1]))
    return edges


def r_matrix(A, T: float, rtol: float = R_RTOL, max_intervals: int = R_MAX_INTERVALS, return_intervals=False):
    """``R(T)_ij = int_0^T (e^{At})_ij^2 dt`` by adaptive composite Simpson.

    ``[0, T]`` is cut into geometrically growing panels; each panel halves
    its step until successive estimates differ by less than ``rtol``
    (relative Frobenius norm). ``R(0)`` is the zero matrix.
    """
    M = as_matrix(A)
    T = float(T)
    if not math.isfinite(T) or T < 0:
        raise DomainError(f"T must be nonnegative and finite, got {T}")
    n = M.shape[0]
    if T == 0:
        return (np.zeros((n, n)), 0) if return_intervals else np.zeros((n, n))
    R = np.zeros((n, n))
    total = 0
    edges = _panel_edges(M, T)
    for a, b in zip(edges[:-1], edges[1:]):
        part, m = _panel(M, a, b, rtol, max_intervals)
        R += part
        total += m
    return (R, total) if return_intervals else R


def has_common_eigenvalue(A, tol: float = TOL_SPECTRAL) -> bool:
    """True when ``A`` and ``-A`` share an eigenvalue (``lambda_i + lambda_j ~ 0``)."""
    ev = np.linalg.eigvals(as_matrix(A))
    return bool(np.any(np.abs(ev[:, None] + ev[None, :]) <= tol))


def uniqueness_certificate(A, T: float, tol_cert: float = TOL_CERT) -> UniquenessCertificate:
    """Certify a unique optimum at horizon ``T`` via ``det R(T) != 0``.

    The margin is ``|det R| / prod_j ||R e_j||`` (Hadamard ratio, in [0, 1]).
    A small margin gives "inconclusive", never "non-unique": the test is
    only sufficient.
    """
    M = as_matrix(A)
    R, m = r_matrix(M, T, return_intervals=True)
    if T == 0:
        detR, margin = 0.0, 0.0
    else:
        sign, logdet = np.linalg.slogdet(R)
        detR = float(sign * math.exp(logdet)) if sign != 0 else 0.0
        col = np.linalg.norm(R, axis=0)
        if sign == 0 or np.any(col == 0):
            margin = 0.0
        else:
            margin = float(math.exp(logdet - np.sum(np.log(col))))
    verdict = "certified-unique" if margin > tol_cert else "inconclusive"
    return UniquenessCertificate(
        T=float(T), detR=detR, margin=margin, verdict=verdict, common_eigs=has_common_eigenvalue(M), intervals=m
    )


def det_r_nth_derivative_at_zero(A, h: float = 1e-3) -> float:
    """Forward-difference estimate of ``d^n/dT^n det R(T)`` at ``T = 0`` (exact value ``n!``)."""
    M = as_matrix(A)
    n = M.shape[0]
    phi = [0.0] + [float(np.linalg.det(r_matrix(M, k * h))) for k in range(1, n + 1)]
    diff = sum((-1) ** (n - k) * math.comb(n, k) * phi[k] for k in range(n + 1))
    return diff / h**n


def _uniform_gradient(A: np.ndarray, T: float, kind: Kind, gramians: GramianSet | None):
    gs = gramians if gramians is not None else GramianSet.compute(A, T)
    n = gs.n
    ev = eval_objective(np.full(n, 1.0 / n), ScoringProblem(kind=kind, gramians=gs))
    if not ev.in_domain:
        raise DomainError("W(1/n, T) is singular")
    return ev.gradient


def check_symmetric_stationarity(A, T: float, gramians: GramianSet | None = None) -> float:
    """``||grad f_T(1/n) + n 1||_inf`` for symmetric ``A`` (zero in exact arithmetic)."""
    sysm = A if isinstance(A, SystemMatrix) else SystemMatrix(A)
    if not sysm.is_symmetric:
        raise StructureError("A is not symmetric")
    g = _uniform_gradient(sysm.entries, T, Kind.VCS, gramians)
    return float(np.max(np.abs(g + sysm.n)))


def check_skew_uniform(A, T: float, gramians: GramianSet | None = None) -> tuple[float, float]:
    """Residuals of ``grad f = -n 1`` and ``grad g = -(n^2/T) 1`` at the uniform point."""
    sysm = A if isinstance(A, SystemMatrix) else SystemMatrix(A)
    if not sysm.is_skew_symmetric:
        raise StructureError("A is not skew-symmetric")
    gs = gramians if gramians is not None else GramianSet.compute(sysm.entries, T)
    n = sysm.n
    gf = _uniform_gradient(sysm.entries, T, Kind.VCS, gs)
    gg = _uniform_gradient(sysm.entries, T, Kind.AECS, gs)
    return float(np.max(np.abs(gf + n))), float(np.max(np.abs(gg + n * n / gs.T)))


def classify_table1(A, vcs, aecs, tol: float = TOL_UNIFORM) -> dict:
    """Compare solved scores with the symmetric / skew-symmetric uniformity pattern."""
    sysm = A if isinstance(A, SystemMatrix) else SystemMatrix(A)
    vcs = np.asarray(vcs, dtype=float)
    aecs = np.asarray(aecs, dtype=float)
    n = sysm.n
    if vcs.shape != (n,) or aecs.shape != (n,):
        raise DimensionError("score vectors do not match the system dimension")
    uniform = np.full(n, 1.0 / n)
    vcs_uniform = bool(np.max(np.abs(vcs - uniform)) <= tol)
    aecs_uniform = bool(np.max(np.abs(aecs - uniform)) <= tol)
    consistent = True
    if sysm.is_symmetric and not vcs_uniform:
        consistent = False
    if sysm.is_skew_symmetric and not (vcs_uniform and aecs_uniform):
        consistent = False
    return {
        "symmetric": sysm.is_symmetric,
        "skew_symmetric": sysm.is_skew_symmetric,
        "vcs_uniform": vcs_uniform,
        "aecs_uniform": aecs_uniform,
        "consistent": consistent,
    }
