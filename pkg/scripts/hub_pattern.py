"""VCS and AECS on the 10-node hub graph (one degree-6 hub, two leaves)."""

import argparse
from dataclasses import dataclass

import numpy as np

from ctrlscore.fixtures import HUB_NODE, LEAF_NODES, hub_graph, undirected_laplacian
from ctrlscore.linops import GramianSet
from ctrlscore.objective import ScoringProblem
from ctrlscore.solver import solve


@dataclass
class Config:
    T: float = 100.0


def run(cfg: Config) -> dict:
    A = -undirected_laplacian(hub_graph())
    gs = GramianSet.compute(A, cfg.T)
    return {k: solve(ScoringProblem(kind=k, gramians=gs)).final for k in ("vcs", "aecs")}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=Config.T)
    cfg = Config(**vars(ap.parse_args()))
    scores = run(cfg)
    degree = (hub_graph() > 0).sum(axis=1)
    print("node  degree     VCS      AECS")
    for i in range(10):
        tag = " hub" if i == HUB_NODE else (" leaf" if i in LEAF_NODES else "")
        print(f"{i:4d}  {degree[i]:6d}  {scores['vcs'][i]:.4f}  {scores['aecs'][i]:.4f}{tag}")
    print(f"AECS hub above leaves: {all(scores['aecs'][HUB_NODE] > scores['aecs'][j] for j in LEAF_NODES)}")
    print(f"VCS uniform: {np.allclose(scores['vcs'], 0.1, atol=1e-6)}")


if __name__ == "__main__":
    main()
