"""Experiment orchestration behind the command-line subcommands.

Each ``run_*`` function writes its result files into ``out_dir`` and also
returns the in-memory results, which the tests use directly.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import plotting
from .baseline import PrimalPG
from .config import ConfigError, ExperimentConfig
from .dissimilarity import batch_dissimilarity
from .dual import SolveReport, initial_dual, solve_batch
from .edges import apply_S_transpose, n_nodes_from_pairs, read_edge_vector, write_edge_list
from .io import (DataError, read_signal_matrix, write_json, write_signal_matrix, write_table,
                 zscore_columns)
from .metrics import (RECORD_HEADER, closeness_centrality, edge_threshold, f_measure,
                      grid_search, tracking_error)
from .online import OnlineDPG
from .synth import generate_stream

log = logging.getLogger(__name__)

WEIGHTS_HEADER = ("t", "time_s", "total_weight", "marker")
CENTRALITY_HEADER = ("node", "closeness", "connected")
SCORES_HEADER = ("alpha", "beta", "f_measure")


def make_tracker(method: str, n_nodes: int, cfg: ExperimentConfig):
    s = cfg.solver
    if method == "dpg":
        return OnlineDPG(n_nodes, s.alpha, s.beta, memory=s.memory, gamma=s.gamma,
                         ewma_init=s.ewma_init, init=s.init, seed=cfg.seed,
                         inner_steps=s.inner_steps)
    if method == "primal_pg":
        b = cfg.baseline
        # same starting point as the dual tracker: S^T lam0 / (2 beta)
        w0 = apply_S_transpose(initial_dual(n_nodes, s.init, cfg.seed)) / (2.0 * s.beta)
        return PrimalPG(n_nodes, s.alpha, s.beta, step_size=b.step_size, memory=s.memory,
                        gamma=s.gamma, ewma_init=s.ewma_init, degree_floor=b.degree_floor,
                        w0=w0)
    raise ValueError(f"unknown method {method!r}")


def segment_references(X: np.ndarray, bounds, alpha: float, beta: float, tol: float,
                       max_iter: int) -> list[SolveReport]:
    """Batch solution on the mean dissimilarity of every constant-graph segment."""
    reports = []
    for first, last in bounds:
        e = batch_dissimilarity(X[first - 1:last]) / (last - first + 1)
        reports.append(solve_batch(e, alpha, beta, tol=tol, max_iter=max_iter, history=False))
    return reports


@dataclass
class SynthResult:
    signals: np.ndarray
    graphs: list
    references: list
    errors: dict = field(default_factory=dict)
    total_weight: dict = field(default_factory=dict)
    f_measures: dict = field(default_factory=dict)
    rejected_steps: dict = field(default_factory=dict)
    final: dict = field(default_factory=dict)


def run_synth(cfg: ExperimentConfig, out_dir, fmt: str = "csv") -> SynthResult:
    """Track a generated scenario with every configured method."""
    if cfg.scenario is None:
        raise ConfigError("synth needs a 'scenario' section")
    sc = cfg.scenario
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    s = cfg.solver

    X, graphs = generate_stream(sc)
    bounds = sc.segment_bounds()
    refs = segment_references(X, bounds, s.alpha, s.beta, s.tol, s.max_iter)
    for k, rep in enumerate(refs):
        if not rep.converged:
            log.warning("reference solve for segment %d stopped after %d iterations", k, rep.iterations)
    segment = np.repeat(np.arange(sc.n_segments), [last - first + 1 for first, last in bounds])

    result = SynthResult(X, graphs, [r.w_star for r in refs])
    rows = []
    for method in cfg.methods:
        tracker = make_tracker(method, sc.n_nodes, cfg)
        errs = np.empty(sc.horizon)
        totals = np.empty(sc.horizon)
        fms = np.empty(sc.horizon)
        for t, x in enumerate(X, start=1):
            w = tracker.step(x)
            k = segment[t - 1]
            errs[t - 1] = tracking_error(w, result.references[k])
            totals[t - 1] = w.sum()
            fms[t - 1] = f_measure(w, graphs[k], edge_threshold(w, cfg.relative_threshold))[2]
        result.errors[method] = errs
        result.total_weight[method] = totals
        result.f_measures[method] = fms
        result.final[method] = w
        result.rejected_steps[method] = getattr(tracker, "rejected_steps", 0)
        rows.extend((t, method, errs[t - 1], totals[t - 1], fms[t - 1])
                    for t in range(1, sc.horizon + 1))

    records = write_table(out / "records", RECORD_HEADER, rows, fmt)
    write_signal_matrix(out / "signals.csv", X)
    for k in range(sc.n_segments):
        write_edge_list(out / f"truth_segment{k + 1}.csv", graphs[k])
        write_edge_list(out / f"reference_segment{k + 1}.csv", result.references[k])
    for method, w in result.final.items():
        write_edge_list(out / f"final_{method}.csv", w)
    write_json(out / "summary.json", {
        "command": "synth",
        "scenario": _scenario_dict(sc),
        "solver": dataclasses.asdict(s),
        "baseline": dataclasses.asdict(cfg.baseline),
        "methods": list(cfg.methods),
        "seed": cfg.seed,
        "segments": [
            {"first": first, "last": last, "edges": int(graphs[k].sum()),
             "reference_iterations": refs[k].iterations, "reference_converged": refs[k].converged}
            for k, (first, last) in enumerate(bounds)
        ],
        "final_error": {m: float(e[-1]) for m, e in result.errors.items()},
        "rejected_steps": result.rejected_steps,
    })
    plotting.plot_tracking_error(records, out / "error.svg", sc.switch_times)
    return result


def _scenario_dict(sc) -> dict:
    return {f.name: getattr(sc, f.name) for f in dataclasses.fields(sc) if f.init}


def load_signals(cfg: ExperimentConfig) -> tuple[np.ndarray, list[str]]:
    if cfg.data is None:
        raise ConfigError("this command needs a 'data' section")
    if cfg.data.kind != "signals":
        raise ConfigError("this command needs data.kind: signals")
    X, names = read_signal_matrix(cfg.data.path)
    if cfg.data.zscore:
        X = zscore_columns(X)
    return X, names


@dataclass
class TrackResult:
    total_weight: np.ndarray
    snapshots: dict
    centrality: dict


def run_track(cfg: ExperimentConfig, out_dir, fmt: str = "csv", signals=None) -> TrackResult:
    """Run the online tracker over a recorded signal matrix.

    ``signals`` bypasses ``cfg.data.path`` (in-memory runs); event and
    snapshot settings still come from ``cfg.data`` when present.
    """
    if signals is None:
        X, _ = load_signals(cfg)
    else:
        X = np.asarray(signals, dtype=float)
    data = cfg.data
    T, n = X.shape
    events = set(data.events) if data else set()
    snaps = set(data.snapshot_samples(T)) if data else set()
    rate = data.sampling_rate if data else None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tracker = make_tracker("dpg", n, cfg)
    totals = np.empty(T)
    snapshots, centrality = {}, {}
    for t, x in enumerate(X, start=1):
        w = tracker.step(x)
        totals[t - 1] = w.sum()
        if t in snaps:
            snapshots[t] = w
    origin = min(events) if events else 1
    rows = [(t, (t - origin) / rate if rate else float("nan"), totals[t - 1], int(t in events))
            for t in range(1, T + 1)]
    weights = write_table(out / "weights", WEIGHTS_HEADER, rows, fmt)
    plotting.plot_weight_evolution(weights, out / "weights.svg")

    for t, w in sorted(snapshots.items()):
        thr = edge_threshold(w, cfg.relative_threshold)
        c, connected = closeness_centrality(w, threshold=thr)
        centrality[t] = c
        edges_path = out / f"snapshot_t{t}_edges.csv"
        write_edge_list(edges_path, w, threshold=thr)
        cent_path = write_table(out / f"snapshot_t{t}_centrality", CENTRALITY_HEADER,
                                [(i + 1, c[i], int(connected)) for i in range(n)], "csv")
        plotting.plot_graph_snapshot(edges_path, cent_path, out / f"snapshot_t{t}.svg",
                                     title=f"t = {t}")
    write_json(out / "summary.json", {
        "command": "track",
        "n_samples": T,
        "n_nodes": n,
        "solver": dataclasses.asdict(cfg.solver),
        "events": sorted(events),
        "snapshots": sorted(snapshots),
        "seed": cfg.seed,
    })
    return TrackResult(totals, snapshots, centrality)


def run_batch(cfg: ExperimentConfig, out_dir) -> SolveReport:
    """Solve the batch problem on a signal or dissimilarity file."""
    if cfg.data is None:
        raise ConfigError("batch needs a 'data' section")
    if cfg.data.kind == "dissimilarity":
        try:
            e = read_edge_vector(cfg.data.path)
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from exc
    else:
        X, _ = load_signals(cfg)
        e = batch_dissimilarity(X) / X.shape[0]
    s = cfg.solver
    n = n_nodes_from_pairs(e.size)
    lam0 = initial_dual(n, s.init, cfg.seed)
    report = solve_batch(e, s.alpha, s.beta, tol=s.tol, max_iter=s.max_iter, lam0=lam0)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(out / "w_star.csv", report.w_star)
    report.to_json(out / "report.json")
    return report


def run_gridsearch(cfg: ExperimentConfig, out_dir, fmt: str = "csv"):
    if cfg.scenario is None:
        raise ConfigError("gridsearch needs a 'scenario' section")
    g = cfg.grid
    best, table = grid_search(cfg.scenario, g.alpha, g.beta, memory=cfg.solver.memory,
                              gamma=cfg.solver.gamma, ewma_init=cfg.solver.ewma_init,
                              window=g.window,
                              relative=cfg.relative_threshold, n_jobs=g.n_jobs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "scores", SCORES_HEADER, [(r.alpha, r.beta, r.score) for r in table], fmt)
    write_json(out / "best.json", {
        "alpha": best.alpha,
        "beta": best.beta,
        "f_measure": best.score,
        "scenario": _scenario_dict(cfg.scenario),
        "memory": cfg.solver.memory,
        "window": g.window,
    })
    return best, table
