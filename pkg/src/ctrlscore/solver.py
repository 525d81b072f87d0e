"""Projected gradient method with the Armijo rule along the projection arc."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ctrlscore.errors import DimensionError, DomainError, InsufficientDataError, StallError
from ctrlscore.objective import ObjectiveEval, ScoringProblem, eval_hessian, eval_objective, objective_change, tangent_step
from ctrlscore.simplex import project_simplex

log = logging.getLogger(__name__)

MAX_BACKTRACKS = 60
MIN_RATE_ITERATES = 10


@dataclass
class SolveTrace:
    iterates: list[np.ndarray]
    values: list[float]
    step_sizes: list[float]
    converged: bool
    final_step_norm: float = float("nan")

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        return len(self.step_sizes)


@dataclass(frozen=True)
class RateReport:
    L_est: float
    m_est: float
    alpha_min: float
    alpha_max: float
    r_theoretical: float
    r_empirical: float
    fit_r2: float
    slope: float


def armijo_step(p, ev: ObjectiveEval, prob: ScoringProblem):
    """One backtracking search along ``alpha -> Pi(p - alpha grad)``.

    Returns ``(p_next, alpha, eval_next, change)`` where ``change`` is the
    (nonpositive) objective decrease. Trial points outside the domain count
    as failures. If backtracking shrinks the trial step below
    ``prob.eps_step`` without sufficient decrease, ``p`` is returned
    unchanged so the caller's stopping test fires.
    """
    if not ev.in_domain:
        raise DomainError("Armijo step requires an in-domain starting point")
    p = np.asarray(p, dtype=float)
    g = ev.gradient
    alpha = prob.alpha0
    for _ in range(MAX_BACKTRACKS + 1):
        trial = project_simplex(p - alpha * g)
        trial_ev = eval_objective(trial, prob)
        if trial_ev.in_domain:
            change = objective_change(p, trial, ev, trial_ev, prob)
            if change <= min(0.0, prob.sigma * float(g @ tangent_step(p, trial))):
                return trial, alpha, trial_ev, change
            if np.linalg.norm(trial - p) <= prob.eps_step:
                return p, alpha, ev, 0.0
        alpha *= prob.rho
    raise StallError(f"no acceptable step after {MAX_BACKTRACKS} backtracks")


def solve(prob: ScoringProblem, p0=None) -> SolveTrace:
    """Minimize the scoring objective over the simplex starting from the uniform vector."""
    n = prob.n
    p = np.full(n, 1.0 / n) if p0 is None else np.asarray(p0, dtype=float)
    if p.shape != (n,):
        raise DimensionError(f"start point of shape {p.shape} does not match n={n}")
    ev = eval_objective(p, prob)
    if not ev.in_domain:
        raise DomainError("start point lies outside the controllable set")
    trace = SolveTrace(iterates=[p], values=[ev.value], step_sizes=[], converged=False)
    for _ in range(prob.max_iter):
        p_next, alpha, ev_next, change = armijo_step(p, ev, prob)
        step = float(np.linalg.norm(p_next - p))
        trace.iterates.append(p_next)
        # accumulate accurate decrements so the recorded values never rise
        trace.values.append(trace.values[-1] + change)
        trace.step_sizes.append(alpha)
        trace.final_step_norm = step
        p, ev = p_next, ev_next
        if step <= prob.eps_step:
            trace.converged = True
            break
    else:
        log.warning("projected gradient hit max_iter=%d (last step %.3g)", prob.max_iter, trace.final_step_norm)
    return trace


def kkt_residual(p, prob: ScoringProblem) -> float:
    """``max_i -grad^T (e_i - p)`` clipped at zero; zero exactly at an optimum."""
    ev = eval_objective(p, prob)
    if not ev.in_domain:
        raise DomainError("KKT residual requested outside the controllable set")
    g = ev.gradient
    # grad^T (e_i - p) = g_i - g.p
    return max(0.0, float(np.max(-(g - g @ np.asarray(p)))))


def fit_log_linear(distances) -> tuple[float, float]:
    """Least-squares slope of ``log d_k`` against ``k``; returns ``(slope, r2)``."""
    d = np.asarray(distances, dtype=float)
    k = np.arange(d.size, dtype=float)
    keep = d > 0
    k, y = k[keep], np.log(d[keep])
    if k.size < 2:
        raise InsufficientDataError("need at least two positive distances to fit a rate")
    slope, intercept = np.polyfit(k, y, 1)
    resid = y - (slope * k + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), r2


def theoretical_rate(L: float, m: float, alpha_min: float, alpha_max: float) -> float:
    return max(abs(1 - alpha_max * L), abs(1 - alpha_min * L), abs(1 - alpha_max * m), abs(1 - alpha_min * m))


def rate_report(trace: SolveTrace, prob: ScoringProblem, p_star=None) -> RateReport:
    """Hessian-based rate bound versus the observed geometric decay of ``||p_k - p*||``.

    ``p_star`` defaults to the final iterate; the last two iterates are left
    out of the fit since their distance to that proxy is dominated by it.
    """
    if len(trace.iterates) < MIN_RATE_ITERATES:
        raise InsufficientDataError(
            f"rate fit needs >= {MIN_RATE_ITERATES} iterates, trace has {len(trace.iterates)}"
        )
    p_star = trace.final if p_star is None else np.asarray(p_star, dtype=float)
    eigs = [np.linalg.eigvalsh(eval_hessian(p, prob)) for p in trace.iterates]
    L_est = max(float(e[-1]) for e in eigs)
    m_est = min(float(e[0]) for e in eigs)
    a_min, a_max = min(trace.step_sizes), max(trace.step_sizes)
    dist = [float(np.linalg.norm(p - p_star)) for p in trace.iterates[:-2]]
    slope, r2 = fit_log_linear(dist)
    return RateReport(
        L_est=L_est,
        m_est=m_est,
        alpha_min=a_min,
        alpha_max=a_max,
        r_theoretical=theoretical_rate(L_est, m_est, a_min, a_max),
        r_empirical=float(np.exp(slope)),
        fit_r2=r2,
        slope=slope,
    )
