"""Evaluation of topology estimates: tracking error, edge recovery, centrality."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .edges import n_nodes_from_pairs, pair_indices
from .online import OnlineDPG
from .synth import generate_graph, generate_stream

DEFAULT_RELATIVE_THRESHOLD = 1e-4

RECORD_HEADER = ("t", "method", "error", "total_weight", "f_measure")


@dataclass
class TrackRecord:
    """One row of a tracking log; ``error`` and ``f_measure`` are NaN when unknown."""

    t: int
    method: str
    error: float
    total_weight: float
    f_measure: float = float("nan")

    def as_row(self) -> tuple:
        return (self.t, self.method, self.error, self.total_weight, self.f_measure)


def tracking_error(w_hat: np.ndarray, w_star: np.ndarray) -> float:
    """Euclidean distance between an estimate and its reference."""
    w_hat = np.asarray(w_hat, dtype=float)
    w_star = np.asarray(w_star, dtype=float)
    if w_hat.shape != w_star.shape:
        raise ValueError(f"shape mismatch: {w_hat.shape} vs {w_star.shape}")
    return float(np.linalg.norm(w_hat - w_star))


def edge_threshold(w: np.ndarray, relative: float = DEFAULT_RELATIVE_THRESHOLD) -> float:
    """Absolute edge-presence threshold ``relative * max(w)``.

    Falls back to ``relative`` itself for an all-zero vector, so nothing is detected.
    """
    top = float(np.max(w)) if np.size(w) else 0.0
    return relative * top if top > 0 else relative


def f_measure(w_hat: np.ndarray, w_true: np.ndarray, threshold: float) -> tuple[float, float, float]:
    """Precision, recall and F-measure of the edge set ``{k : w_hat[k] > threshold}``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    pred = np.asarray(w_hat) > threshold
    truth = np.asarray(w_true) > 0
    tp = int(np.count_nonzero(pred & truth))
    n_pred = int(np.count_nonzero(pred))
    n_true = int(np.count_nonzero(truth))
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_true if n_true else 0.0
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def closeness_centrality(w: np.ndarray, threshold: float | None = None,
                         relative: float = DEFAULT_RELATIVE_THRESHOLD) -> tuple[np.ndarray, bool]:
    """Closeness centrality ``1 / sum_j d(i, j)`` with edge length ``1 / weight``.

    Edges at or below the threshold (default ``relative * max(w)``) are
    dropped. On a disconnected graph each node only sums distances inside its
    own component; isolated nodes get 0. The second return value is ``True``
    when the thresholded graph is connected.
    """
    w = np.asarray(w, dtype=float)
    n = n_nodes_from_pairs(w.size)
    thr = edge_threshold(w, relative) if threshold is None else threshold
    rows, cols = pair_indices(n)
    keep = w > thr
    lengths = csr_matrix((1.0 / w[keep], (rows[keep], cols[keep])), shape=(n, n))
    dist = shortest_path(lengths, method="D", directed=False)
    finite = np.isfinite(dist)
    totals = np.where(finite, dist, 0.0).sum(axis=1)
    with np.errstate(divide="ignore"):
        centrality = np.where(totals > 0, 1.0 / totals, 0.0)
    return centrality, bool(finite.all())


def final_window_f_measure(estimates, w_true: np.ndarray,
                           relative: float = DEFAULT_RELATIVE_THRESHOLD) -> float:
    """Mean F-measure over a sequence of estimates."""
    scores = [f_measure(w, w_true, edge_threshold(w, relative))[2] for w in estimates]
    return float(np.mean(scores))


@dataclass
class GridResult:
    alpha: float
    beta: float
    score: float


def grid_search(scenario, alphas, betas, *, memory: str = "infinite", gamma: float = 0.002,
                ewma_init: str = "first", window: int = 100, relative: float = DEFAULT_RELATIVE_THRESHOLD,
                signals: np.ndarray | None = None, n_jobs: int = 1):
    """Pick ``(alpha, beta)`` maximizing the tracker's final-window F-measure.

    Each grid point runs an independent :class:`~topotrack.online.OnlineDPG`
    over the scenario's stream and averages the F-measure of the last
    ``window`` estimates against the last segment's ground truth. Ties go to
    the smaller ``beta``, then the smaller ``alpha``, so the winner does not
    depend on grid order.

    Returns
    -------
    best : GridResult
    table : list of GridResult
        One entry per grid point, sorted by ``(alpha, beta)``.
    """
    alphas = sorted({float(a) for a in alphas})
    betas = sorted({float(b) for b in betas})
    if not alphas or not betas:
        raise ValueError("alpha and beta grids must be non-empty")
    if signals is None:
        signals, _ = generate_stream(scenario)
    w_true = generate_graph(scenario, scenario.n_segments - 1)
    window = max(1, min(window, len(signals)))

    points = list(itertools.product(alphas, betas))
    args = [(a, b, signals, w_true, memory, gamma, ewma_init, window, relative) for a, b in points]
    if n_jobs == 1:
        scores = [_score_point(*arg) for arg in args]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            scores = list(pool.map(_score_point, *zip(*args)))
    table = [GridResult(a, b, s) for (a, b), s in zip(points, scores)]
    best = max(table, key=lambda r: (r.score, -r.beta, -r.alpha))
    return best, table


def _score_point(alpha, beta, signals, w_true, memory, gamma, ewma_init, window, relative):
    tracker = OnlineDPG(signals.shape[1], alpha, beta, memory=memory, gamma=gamma,
                        ewma_init=ewma_init)
    tail = []
    first_scored = len(signals) - window
    for t, x in enumerate(signals):
        w = tracker.step(x)
        if t >= first_scored:
            tail.append(w)
    return final_window_f_measure(tail, w_true, relative)
