"""Online dual proximal-gradient tracking of a time-varying topology.

Each incoming signal snapshot updates the running dissimilarity and then
drives exactly one dual proximal-gradient step, so the per-sample cost is
``O(N^2)`` time and memory regardless of how many samples have been seen.
"""

from __future__ import annotations

import numpy as np

from .dissimilarity import DEFAULT_GAMMA, INFINITE, DissimilarityStream, snapshot_dissimilarity
from .dual import dual_step, initial_dual, lipschitz_constant, primal_from_dual


class OnlineDPG:
    """Streaming topology tracker.

    Parameters
    ----------
    n_nodes : int
        Number of graph nodes ``N``.
    alpha, beta : float
        Log-barrier and Frobenius regularization weights, both positive.
    memory : {"infinite", "ewma"}
        How the running dissimilarity forgets old samples.
    gamma : float
        EWMA discount factor.
    ewma_init : {"first", "debiased"}
        EWMA start-up rule, see :class:`~topotrack.dissimilarity.DissimilarityStream`.
    init : {"ones", "random"}
        Starting multipliers; ``"random"`` draws from ``seed``.
    seed : int, optional
        Seed for ``init="random"``.
    inner_steps : int
        Dual iterations per sample. The tracker is designed around 1; larger
        values are for experiments only.
    """

    method = "dpg"

    def __init__(self, n_nodes: int, alpha: float, beta: float, memory: str = INFINITE,
                 gamma: float = DEFAULT_GAMMA, ewma_init: str = "first", init: str = "ones",
                 seed: int | None = None, inner_steps: int = 1):
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        if inner_steps < 1:
            raise ValueError("inner_steps must be at least 1")
        self.L = lipschitz_constant(n_nodes, beta)
        self.n_nodes = n_nodes
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.inner_steps = int(inner_steps)
        self.dissim = DissimilarityStream(n_nodes, memory, gamma, ewma_init)
        self.lam = initial_dual(n_nodes, init, seed)
        self.t = 0

    def step(self, x: np.ndarray) -> np.ndarray:
        """Absorb snapshot ``x``, take one dual step and return the new estimate."""
        return self.step_dissimilarity(self._dissimilarity_of(x))

    def step_dissimilarity(self, e_t: np.ndarray) -> np.ndarray:
        """Same as :meth:`step` for an already computed snapshot dissimilarity."""
        e = self.dissim.absorb(e_t)
        for _ in range(self.inner_steps):
            self.lam, _ = dual_step(self.lam, e, self.alpha, self.beta, self.L)
        self.t += 1
        return self.current_estimate()

    def current_estimate(self) -> np.ndarray:
        """Topology estimate from the current multipliers and running dissimilarity."""
        if self.t == 0:
            raise RuntimeError("no estimate before the first step")
        return primal_from_dual(self.lam, self.dissim.value, self.beta)

    def _dissimilarity_of(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_nodes,):
            raise ValueError(f"signal of shape {x.shape} does not match {self.n_nodes} nodes")
        return snapshot_dissimilarity(x)

    def copy(self) -> OnlineDPG:
        other = object.__new__(OnlineDPG)
        other.__dict__.update(self.__dict__)
        other.dissim = self.dissim.copy()
        other.lam = self.lam.copy()
        return other
