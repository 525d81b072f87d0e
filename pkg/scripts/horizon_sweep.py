"""Scores of one random system across horizons; small T approaches the uniform vector."""

import argparse
from dataclasses import dataclass, field

import numpy as np

from ctrlscore.fixtures import random_unit_norm
from ctrlscore.linops import GramianSet
from ctrlscore.objective import ScoringProblem
from ctrlscore.solver import solve


@dataclass
class Config:
    n: int = 10
    seed: int = 0
    horizons: list = field(default_factory=lambda: [0.01, 0.1, 1.0, 10.0])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(n=args.n, seed=args.seed)
    A = random_unit_norm(cfg.n, cfg.seed)
    np.set_printoptions(precision=4, suppress=True)
    for T in cfg.horizons:
        gs = GramianSet.compute(A, T)
        for kind in ("vcs", "aecs"):
            p = solve(ScoringProblem(kind=kind, gramians=gs)).final
            print(f"T={T:<6g} {kind:4s} max|p-1/n|={np.max(np.abs(p - 1 / cfg.n)):.2e}  {p}")


if __name__ == "__main__":
    main()
