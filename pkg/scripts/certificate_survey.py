"""Uniqueness-certificate margins over random ensembles and horizons.

Shows how the Hadamard margin of ``R(T)`` collapses for unstable systems on
long horizons even when ``A`` and ``-A`` share no eigenvalue.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from ctrlscore.certify import TOL_CERT, has_common_eigenvalue, uniqueness_certificate
from ctrlscore.fixtures import random_stable


@dataclass
class Config:
    count: int = 100
    seed: int = 909


def survey(name, matrices, horizons=(0.5, 1.0, 10.0)):
    for T in horizons:
        margins = [uniqueness_certificate(A, T).margin for A in matrices]
        below = sum(m <= TOL_CERT for m in margins)
        print(f"{name:9s} T={T:<5g} uncertified={below:3d}/{len(margins)}  min margin={min(margins):.1e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args()))
    rng = np.random.default_rng(cfg.seed)
    general = []
    while len(general) < cfg.count:
        n = int(rng.integers(2, 6))
        A = rng.normal(size=(n, n)) / math.sqrt(n)
        if not has_common_eigenvalue(A):
            general.append(A)
    stable = [random_stable(int(rng.integers(2, 6)), rng) for _ in range(cfg.count)]
    unstable = [A for A in general if np.max(np.linalg.eigvals(A).real) > 0]
    survey("gaussian", general)
    survey("unstable", unstable)
    survey("stable", stable)


if __name__ == "__main__":
    main()
