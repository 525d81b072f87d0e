"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 parse, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ctrlscore import fileio
from ctrlscore.certify import uniqueness_certificate
from ctrlscore.errors import CtrlScoreError, InsufficientDataError, ParseError
from ctrlscore.fixtures import random_connected_undirected, random_connectivity, random_stable, rng_from
from ctrlscore.linops import GramianSet
from ctrlscore.netmetrics import (
    CLASSICAL,
    METRICS,
    ace_centrality,
    build_laplacian,
    correlation_study,
    node_metrics,
    vce_centrality,
)
from ctrlscore.objective import ScoringProblem
from ctrlscore.solver import MIN_RATE_ITERATES, fit_log_linear, kkt_residual, rate_report, solve

log = logging.getLogger("ctrlscore")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERICAL = 0, 1, 2, 3
OBJECTIVES = {"vcs": ("vcs",), "aecs": ("aecs",), "both": ("vcs", "aecs")}
# p* for rate diagnostics comes from a run with this much tighter step tolerance
PSTAR_TIGHTEN = 100.0


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    matrix: Path | None = None
    connectivity: Path | None = None
    dir: Path | None = None
    T: float = 100.0
    objective: str | None = None
    metrics: tuple[str, ...] = CLASSICAL
    damping: float = 0.85
    rank_tol: float | None = None
    tol: float = 1e-10
    max_iter: int = 10_000
    format: str = "json"
    out: Path | None = None
    jobs: int = 1
    seed: int = 0
    mode: str = "directed"
    count: int = 10
    n: int = 20
    kind: str = "connectivity"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise UsageError(f"--T must be positive, got {self.T}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.max_iter < 1:
            raise UsageError("--max-iter must be at least 1")
        if not self.tol >= 0:
            raise UsageError("--tol must be nonnegative")
        bad = [m for m in self.metrics if m not in METRICS]
        if bad:
            raise UsageError(f"unknown metric(s): {', '.join(bad)}")


# ---------------------------------------------------------------- helpers


def _existing(path: Path | None, flag: str) -> Path:
    if path is None:
        raise UsageError(f"{flag} is required")
    if not Path(path).is_file():
        raise UsageError(f"{flag}: no such file {path}")
    return Path(path)


def _load_dynamics(cfg: RunConfig):
    """Dynamics matrix from ``--matrix`` or, failing that, a Laplacian from ``--connectivity``."""
    if cfg.matrix is not None:
        path = _existing(cfg.matrix, "--matrix")
        A, labels = fileio.read_matrix(path)
        return A, labels, path
    if cfg.connectivity is not None:
        path = _existing(cfg.connectivity, "--connectivity")
        C, labels = fileio.read_matrix(path)
        return build_laplacian(C, cfg.mode).A.entries, labels, path
    raise UsageError("--matrix or --connectivity is required")


def _problem(gs: GramianSet, kind: str, cfg: RunConfig, tighten: float = 1.0) -> ScoringProblem:
    return ScoringProblem(kind=kind, gramians=gs, eps_step=cfg.tol / tighten, max_iter=cfg.max_iter)


def _rate_dict(trace, prob, cfg, gs, kind):
    if len(trace.iterates) < MIN_RATE_ITERATES:
        return None, f"trace has {len(trace.iterates)} iterates; rate fit skipped"
    p_star = solve(_problem(gs, kind, cfg, PSTAR_TIGHTEN), p0=trace.final).final
    try:
        rep = rate_report(trace, prob, p_star)
    except InsufficientDataError as exc:
        return None, str(exc)
    return vars(rep), None


def score_gramians(gs: GramianSet, kinds, cfg: RunConfig, with_rate: bool = True) -> tuple[dict, dict]:
    """Solve each objective on a shared Gramian set; returns ``(scores, diagnostics)``."""
    scores, diags = {}, {}
    for kind in kinds:
        prob = _problem(gs, kind, cfg)
        trace = solve(prob)
        p = trace.final
        d = {
            "iterations": trace.iterations,
            "converged": trace.converged,
            "final_step_norm": trace.final_step_norm,
            "kkt_residual": kkt_residual(p, prob),
            "objective_value": trace.values[-1],
        }
        if with_rate:
            d["rate"], note = _rate_dict(trace, prob, cfg, gs, kind)
            if note:
                d["rate_note"] = note
        scores[kind] = p
        diags[kind] = d
    return scores, diags


def _certificate(A, T):
    cert = uniqueness_certificate(A, T)
    if cert.verdict != "certified-unique":
        log.warning("uniqueness certificate inconclusive at T=%g (margin %.3g)", T, cert.margin)
    return cert.to_dict()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text, encoding="utf-8")


def _node_names(n, labels):
    return list(labels) if labels is not None else [str(i) for i in range(n)]


# ---------------------------------------------------------------- commands


def cmd_score(cfg: RunConfig) -> int:
    A, labels, path = _load_dynamics(cfg)
    kinds = OBJECTIVES[cfg.objective or "both"]
    gs = GramianSet.compute(A, cfg.T)
    scores, diags = score_gramians(gs, kinds, cfg)
    report = {
        "schema_version": fileio.SCHEMA_VERSION,
        "command": "score",
        "T": cfg.T,
        "n": gs.n,
        "labels": _node_names(gs.n, labels),
        "input_sha256": fileio.fingerprint(path),
        "scores": scores,
        "diagnostics": diags,
        "certificate": _certificate(A, cfg.T),
    }
    if cfg.format == "json":
        _emit(cfg, fileio.dumps(report))
    else:
        names = report["labels"]
        rows = [[names[i], *(float(scores[k][i]) for k in kinds)] for i in range(gs.n)]
        _emit(cfg, fileio.table_to_text(["node", *kinds], rows))
    return EXIT_OK


def cmd_laplacian(cfg: RunConfig) -> int:
    path = _existing(cfg.connectivity, "--connectivity")
    C, labels = fileio.read_matrix(path)
    sys_ = build_laplacian(C, cfg.mode)
    log.info("Laplacian row-sum residual ||L 1||_inf = %.3g", float(np.max(np.abs(sys_.L.sum(axis=1)))))
    _emit(cfg, fileio.matrix_to_text(sys_.A.entries, labels))
    return EXIT_OK


def individual_metrics(C, cfg: RunConfig, with_rate: bool = True) -> tuple[dict, dict]:
    """Classical metrics plus both scores for one connectivity matrix."""
    sys_ = build_laplacian(C, cfg.mode)
    gs = GramianSet.compute(sys_.A.entries, cfg.T)
    wanted = [m for m in cfg.metrics if m not in ("vcs", "aecs")]
    kinds = [k for k in ("vcs", "aecs") if k in cfg.metrics or cfg.command == "batch"]
    metrics = node_metrics(C, cfg.T, wanted, cfg.damping, gramians=gs)
    if cfg.rank_tol is not None:
        for name, fn in (("vce", vce_centrality), ("ace", ace_centrality)):
            if name in metrics:
                metrics[name] = np.array([fn(None, j, cfg.T, cfg.rank_tol, gramian=gs[j]) for j in range(gs.n)])
    scores, diags = score_gramians(gs, kinds, cfg, with_rate)
    metrics.update(scores)
    return metrics, {"diagnostics": diags, "certificate": _certificate(sys_.A.entries, cfg.T) if kinds else None}


def cmd_centrality(cfg: RunConfig) -> int:
    path = _existing(cfg.connectivity, "--connectivity")
    C, labels = fileio.read_matrix(path)
    metrics, _ = individual_metrics(C, cfg, with_rate=False)
    names = _node_names(C.shape[0], labels)
    order = [m for m in cfg.metrics if m in metrics]
    if cfg.format == "json":
        report = {
            "schema_version": fileio.SCHEMA_VERSION,
            "command": "centrality",
            "T": cfg.T,
            "damping": cfg.damping,
            "rank_tol": cfg.rank_tol,
            "labels": names,
            "input_sha256": fileio.fingerprint(path),
            "metrics": {m: metrics[m] for m in order},
        }
        _emit(cfg, fileio.dumps(report))
    else:
        rows = [[names[i], *(float(metrics[m][i]) for m in order)] for i in range(len(names))]
        _emit(cfg, fileio.table_to_text(["node", *order], rows))
    return EXIT_OK


def _batch_one(args):
    path, cfg = args
    try:
        C, labels = fileio.read_matrix(path)
        metrics, extra = individual_metrics(C, cfg)
    except (CtrlScoreError, OSError) as exc:
        return path.name, None, f"{type(exc).__name__}: {exc}"
    report = {
        "schema_version": fileio.SCHEMA_VERSION,
        "command": "batch",
        "individual": path.stem,
        "T": cfg.T,
        "n": C.shape[0],
        "labels": _node_names(C.shape[0], labels),
        "input_sha256": fileio.fingerprint(path),
        "scores": {k: metrics[k] for k in ("vcs", "aecs")},
        "metrics": {k: v for k, v in metrics.items() if k not in ("vcs", "aecs")},
        **extra,
    }
    return path.name, report, None


def cmd_batch(cfg: RunConfig) -> int:
    if cfg.dir is None or not Path(cfg.dir).is_dir():
        raise UsageError("--dir must name an existing directory")
    if cfg.out is None:
        raise UsageError("--out (output directory) is required for batch")
    files = sorted(p for p in Path(cfg.dir).iterdir() if p.is_file() and p.suffix == ".csv")
    if not files:
        raise UsageError(f"no .csv files in {cfg.dir}")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(p, cfg) for p in files]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_batch_one, jobs))
    else:
        results = [_batch_one(j) for j in jobs]

    # sequential, filename-ordered reduce
    reports, failures = [], {}
    for name, report, err in results:
        if report is None:
            log.warning("skipping %s: %s", name, err)
            failures[name] = err
            continue
        fileio.write_json(out / f"{Path(name).stem}.json", report)
        reports.append({**report["metrics"], **report["scores"]})
    fileio.write_json(out / "failures.json", {"schema_version": fileio.SCHEMA_VERSION, "failures": failures})
    if len(reports) < 2:
        log.error("aggregate needs at least two successful individuals, got %d", len(reports))
        return EXIT_NUMERICAL
    classical = [m for m in CLASSICAL if m in cfg.metrics]
    rows = correlation_study(reports, pairs=[(s, m) for s in ("aecs", "vcs") for m in classical])
    if cfg.format == "json":
        fileio.write_json(
            out / "correlation.json",
            {"schema_version": fileio.SCHEMA_VERSION, "T": cfg.T, "individuals": len(reports), "rows": rows},
        )
    else:
        table = [[r["score"], r["metric"], r["mean"], r["std"], r["count"]] for r in rows]
        (out / "correlation.csv").write_text(
            fileio.table_to_text(["score", "metric", "mean", "std", "count"], table), encoding="utf-8"
        )
    return EXIT_OK


def convergence_table(distances, fit_upto: int | None = None) -> str:
    """Two-column ``k, log distance`` CSV with a ``# slope=..., r2=...`` footer.

    Zero distances are omitted. The fit uses the first ``fit_upto`` entries
    (all by default).
    """
    d = np.asarray(distances, dtype=float)
    rows = [[k, float(np.log(x))] for k, x in enumerate(d) if x > 0]
    try:
        slope, r2 = fit_log_linear(d if fit_upto is None else d[:fit_upto])
        footer = f"slope={fileio.fmt(slope)}, r2={fileio.fmt(r2)}"
    except InsufficientDataError as exc:
        footer = f"fit unavailable: {exc}"
    return fileio.table_to_text(["k", "log_dist"], rows, footer)


def cmd_convergence(cfg: RunConfig) -> int:
    if cfg.objective == "both":
        raise UsageError("convergence needs a single --objective (vcs or aecs)")
    kind = cfg.objective or "aecs"
    A, _, _ = _load_dynamics(cfg)
    gs = GramianSet.compute(A, cfg.T)
    trace = solve(_problem(gs, kind, cfg))
    if len(trace.iterates) < MIN_RATE_ITERATES:
        log.warning("short trace (%d iterates); slope is not meaningful", len(trace.iterates))
    p_star = solve(_problem(gs, kind, cfg, PSTAR_TIGHTEN), p0=trace.final).final
    dist = [float(np.linalg.norm(p - p_star)) for p in trace.iterates]
    # the last two iterates sit at the p* proxy's own accuracy
    _emit(cfg, convergence_table(dist, fit_upto=max(len(dist) - 2, 0)))
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    path = _existing(cfg.matrix, "--matrix")
    A, _ = fileio.read_matrix(path)
    cert = uniqueness_certificate(A, cfg.T).to_dict()
    if cfg.format == "json":
        report = {
            "schema_version": fileio.SCHEMA_VERSION,
            "command": "certify",
            "input_sha256": fileio.fingerprint(path),
            "certificate": cert,
        }
        _emit(cfg, fileio.dumps(report))
    else:
        rows = [[k, fileio.fmt(v) if isinstance(v, float) else v] for k, v in sorted(cert.items())]
        _emit(cfg, fileio.table_to_text(["field", "value"], rows))
    return EXIT_OK


def cmd_synth(cfg: RunConfig) -> int:
    """Seeded synthetic fixtures: one CSV per individual."""
    if cfg.out is None:
        raise UsageError("--out (output directory) is required for synth")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = rng_from(cfg.seed)
    gen = {
        "connectivity": lambda: random_connectivity(cfg.n, rng),
        "undirected": lambda: random_connected_undirected(cfg.n, rng),
        "stable": lambda: random_stable(cfg.n, rng),
    }[cfg.kind]
    width = max(3, len(str(cfg.count - 1)))
    for k in range(cfg.count):
        fileio.write_matrix(out / f"sub_{k:0{width}d}.csv", gen())
    return EXIT_OK


COMMANDS = {
    "score": cmd_score,
    "laplacian": cmd_laplacian,
    "batch": cmd_batch,
    "centrality": cmd_centrality,
    "convergence": cmd_convergence,
    "certify": cmd_certify,
    "synth": cmd_synth,
}


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _metric_list(text: str) -> tuple[str, ...]:
    return tuple(m.strip().lower() for m in text.split(",") if m.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctrlscore", description="Finite-time controllability scores for networked systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--T", type=float, default=100.0, help="time horizon (default 100)")
    common.add_argument("--out", type=Path, help="output file (directory for batch/synth); stdout if omitted")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--seed", type=int, default=0)
    solver = _Parser(add_help=False)
    solver.add_argument("--objective", choices=tuple(OBJECTIVES))
    solver.add_argument("--tol", type=float, default=1e-10, help="step-norm stopping tolerance")
    solver.add_argument("--max-iter", type=int, default=10_000)
    inputs = _Parser(add_help=False)
    inputs.add_argument("--matrix", type=Path, help="dynamics matrix CSV")
    inputs.add_argument("--connectivity", type=Path, help="connectivity CSV (Laplacian dynamics)")
    inputs.add_argument("--mode", choices=("directed", "undirected"), default="directed")
    metrics = _Parser(add_help=False)
    metrics.add_argument("--metrics", type=_metric_list, default=CLASSICAL, help="comma-separated metric names")
    metrics.add_argument("--damping", type=float, default=0.85)
    metrics.add_argument("--rank-tol", type=float)

    sub.add_parser("score", parents=[common, solver, inputs], help="solve VCS and/or AECS")
    sub.add_parser("laplacian", parents=[common, inputs], help="write -L for a connectivity matrix")
    b = sub.add_parser("batch", parents=[common, solver, inputs, metrics], help="score a directory of individuals")
    b.add_argument("--dir", type=Path, required=True)
    b.add_argument("--jobs", type=int, default=1)
    sub.add_parser("centrality", parents=[common, solver, inputs, metrics], help="node centrality table")
    sub.add_parser("convergence", parents=[common, solver, inputs], help="plot-ready convergence data")
    sub.add_parser("certify", parents=[common, inputs], help="uniqueness certificate")
    s = sub.add_parser("synth", parents=[common], help="write seeded synthetic fixtures")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--kind", choices=("connectivity", "undirected", "stable"), default="connectivity")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    keys = {f for f in RunConfig.__dataclass_fields__ if f != "extra"}
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in keys and v is not None})


def _setup_logging() -> None:
    level = os.environ.get("CTRLSCORE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CtrlScoreError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run(cfg: RunConfig, **overrides) -> int:
    """Programmatic entry point with the same exit-code contract as :func:`main`."""
    try:
        cfg = replace(cfg, **overrides)
        return COMMANDS[cfg.command](cfg)
    except UsageError:
        return EXIT_USAGE
    except ParseError:
        return EXIT_PARSE
    except (CtrlScoreError, np.linalg.LinAlgError, FloatingPointError):
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
