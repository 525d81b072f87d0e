"""Controllability scores (VCS / AECS) for linear network systems."""

from ctrlscore.linops import (
    GramianSet,
    SystemMatrix,
    TailBoundReport,
    finite_gramian,
    finite_gramian_quadrature,
    infinite_gramian,
    matrix_exponential,
    tail_bound,
)
from ctrlscore.objective import ObjectiveEval, ScoringProblem, eval_hessian, eval_objective
from ctrlscore.simplex import project_simplex
from ctrlscore.solver import SolveTrace, kkt_residual, rate_report, solve

__all__ = [
    "GramianSet",
    "ObjectiveEval",
    "ScoringProblem",
    "SolveTrace",
    "SystemMatrix",
    "TailBoundReport",
    "eval_hessian",
    "eval_objective",
    "finite_gramian",
    "finite_gramian_quadrature",
    "infinite_gramian",
    "kkt_residual",
    "matrix_exponential",
    "project_simplex",
    "rate_report",
    "solve",
    "tail_bound",
]
