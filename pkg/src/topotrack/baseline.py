"""Online projected-gradient baseline working directly on the edge weights.

Each sample takes one gradient step on the smooth primal cost
``h(w) = 2 e^T w + beta ||w||^2 - alpha 1^T log(S w)`` followed by projection
onto ``w >= 0``. The cost per step matches :class:`~topotrack.online.OnlineDPG`:
one ``S`` and one ``S^T`` application over ``N(N-1)/2`` edges.
"""

from __future__ import annotations

import numpy as np

from .dissimilarity import DEFAULT_GAMMA, INFINITE, DissimilarityStream, snapshot_dissimilarity
from .edges import apply_S, apply_S_transpose, n_pairs

DEFAULT_DEGREE_FLOOR = 1e-9
MAX_BACKTRACKS = 50


def primal_gradient(w: np.ndarray, e: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Gradient of ``h`` at a point with strictly positive degrees."""
    d = apply_S(w)
    return 2.0 * e + 2.0 * beta * w - alpha * apply_S_transpose(1.0 / d)


class PrimalPG:
    """Projected-gradient tracker with degree-floor backtracking.

    Parameters
    ----------
    n_nodes : int
        Number of graph nodes.
    alpha, beta : float
        Regularization weights (same meaning as for the dual tracker).
    step_size : float, optional
        Gradient step. Defaults to ``beta / (N - 1)``, the reciprocal of the
        dual Lipschitz constant.
    memory, gamma, ewma_init
        Dissimilarity memory scheme, shared with the dual tracker.
    degree_floor : float
        Smallest admissible node degree after a step.
    w0 : array_like, optional
        Starting weights. Defaults to ``1 / beta`` on every pair, which is the
        primal point ``S^T lam / (2 beta)`` the dual tracker starts from with
        unit multipliers and no data; both trackers then start level.
    """

    method = "primal_pg"

    def __init__(self, n_nodes: int, alpha: float, beta: float, step_size: float | None = None,
                 memory: str = INFINITE, gamma: float = DEFAULT_GAMMA, ewma_init: str = "first",
                 degree_floor: float = DEFAULT_DEGREE_FLOOR, w0=None):
        if not alpha > 0 or not beta > 0:
            raise ValueError("alpha and beta must be positive")
        if n_nodes < 2:
            raise ValueError("a graph needs at least two nodes")
        self.n_nodes = n_nodes
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.step_size = beta / (n_nodes - 1) if step_size is None else float(step_size)
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        self.degree_floor = float(degree_floor)
        self.dissim = DissimilarityStream(n_nodes, memory, gamma, ewma_init)
        self.w = np.full(n_pairs(n_nodes), 1.0 / beta) if w0 is None else np.array(w0, dtype=float)
        if self.w.shape != (n_pairs(n_nodes),) or np.any(self.w < 0):
            raise ValueError("w0 must be a nonnegative edge vector of matching length")
        if apply_S(self.w, n_nodes).min() <= self.degree_floor:
            raise ValueError("w0 must give every node a degree above the floor")
        self.t = 0
        self.rejected_steps = 0
        self.last_step_rejected = False
        self.last_backtracks = 0

    def step(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_nodes,):
            raise ValueError(f"signal of shape {x.shape} does not match {self.n_nodes} nodes")
        return self.step_dissimilarity(snapshot_dissimilarity(x))

    def step_dissimilarity(self, e_t: np.ndarray) -> np.ndarray:
        """Absorb ``e_t`` and take one projected step on the updated cost.

        If no step size down to ``step_size / 2**50`` keeps every degree above
        the floor, the step is rejected: the state is left untouched and
        ``last_step_rejected`` is set.
        """
        dissim = self.dissim.copy()
        e = dissim.absorb(e_t)
        g = primal_gradient(self.w, e, self.alpha, self.beta)
        eta = self.step_size
        for halvings in range(MAX_BACKTRACKS + 1):
            w_new = np.maximum(0.0, self.w - eta * g)
            if apply_S(w_new, self.n_nodes).min() > self.degree_floor:
                break
            eta *= 0.5
        else:
            self.rejected_steps += 1
            self.last_step_rejected = True
            self.last_backtracks = MAX_BACKTRACKS
            return self.w.copy()
        self.dissim = dissim
        self.w = w_new
        self.t += 1
        self.last_step_rejected = False
        self.last_backtracks = halvings
        return self.w.copy()

    def current_estimate(self) -> np.ndarray:
        if self.t == 0:
            raise RuntimeError("no estimate before the first step")
        return self.w.copy()
