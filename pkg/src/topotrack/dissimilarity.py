"""Running pairwise-dissimilarity statistic over a stream of graph signals."""

from __future__ import annotations

import numpy as np

from .edges import n_pairs, pair_indices

INFINITE = "infinite"
EWMA = "ewma"
DEFAULT_GAMMA = 0.002


def snapshot_dissimilarity(x: np.ndarray) -> np.ndarray:
    """Squared differences ``(x_i - x_j)^2`` over all node pairs, canonical order."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal snapshot must be one-dimensional")
    if not np.isfinite(x).all():
        raise ValueError("signal snapshot contains non-finite values")
    rows, cols = pair_indices(x.size)
    diff = x[rows] - x[cols]
    return diff * diff


def batch_dissimilarity(X: np.ndarray) -> np.ndarray:
    """Vectorized ``E_ij = ||xbar_i - xbar_j||^2`` for a ``(T, N)`` sample matrix.

    Rows of ``X`` are time samples, so ``xbar_i`` is column ``i``.
    """
    X = np.asarray(X, dtype=float)
    sq = np.einsum("ti,ti->i", X, X)
    gram = X.T @ X
    rows, cols = pair_indices(X.shape[1])
    return np.maximum(sq[rows] + sq[cols] - 2.0 * gram[rows, cols], 0.0)


class DissimilarityStream:
    """Running dissimilarity ``e_{1:t}`` under infinite memory or EWMA.

    Infinite memory keeps the arithmetic mean of every absorbed snapshot.
    EWMA applies ``e <- (1 - gamma) e + gamma e_t``. With ``ewma_init="first"``
    the recursion is seeded with the first snapshot. With
    ``ewma_init="debiased"`` it starts from zero and the reported value is
    divided by ``1 - (1 - gamma)^t``; this also returns ``e_1`` after one
    sample but does not keep a heavy weight on that single sample afterwards.

    Parameters
    ----------
    n_nodes : int
        Number of graph nodes.
    mode : {"infinite", "ewma"}
        Memory scheme.
    gamma : float, optional
        Discount factor in (0, 1); only used in EWMA mode.
    ewma_init : {"first", "debiased"}
        EWMA start-up rule.
    """

    def __init__(self, n_nodes: int, mode: str = INFINITE, gamma: float = DEFAULT_GAMMA,
                 ewma_init: str = "first"):
        if mode not in (INFINITE, EWMA):
            raise ValueError(f"unknown memory mode {mode!r}; expected 'infinite' or 'ewma'")
        if mode == EWMA and not 0.0 < gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
        if ewma_init not in ("first", "debiased"):
            raise ValueError(f"unknown EWMA initialization {ewma_init!r}")
        self.n_nodes = n_nodes
        self.mode = mode
        self.gamma = float(gamma)
        self.ewma_init = ewma_init
        self.count = 0
        self.value = np.zeros(n_pairs(n_nodes))
        self._acc = np.zeros_like(self.value) if self._debiased else None
        self._decay = 1.0

    @property
    def _debiased(self) -> bool:
        return self.mode == EWMA and self.ewma_init == "debiased"

    def absorb(self, e_t: np.ndarray) -> np.ndarray:
        """Fold one snapshot dissimilarity into the running statistic, in place."""
        e_t = np.asarray(e_t, dtype=float)
        if e_t.shape != self.value.shape:
            raise ValueError(
                f"dissimilarity of length {e_t.size} does not match {self.value.size} pairs"
            )
        self.count += 1
        if self.mode == INFINITE:
            # e_{1:t} = e_{1:t-1} + (e_t - e_{1:t-1}) / t
            self.value += (e_t - self.value) / self.count
        elif self._debiased:
            self._acc *= 1.0 - self.gamma
            self._acc += self.gamma * e_t
            self._decay *= 1.0 - self.gamma
            np.divide(self._acc, 1.0 - self._decay, out=self.value)
        elif self.count == 1:
            self.value[:] = e_t
        else:
            self.value *= 1.0 - self.gamma
            self.value += self.gamma * e_t
        return self.value

    def absorb_signal(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size != self.n_nodes:
            raise ValueError(f"signal of length {x.size} does not match {self.n_nodes} nodes")
        return self.absorb(snapshot_dissimilarity(x))

    def copy(self) -> DissimilarityStream:
        other = DissimilarityStream(self.n_nodes, self.mode, self.gamma, self.ewma_init)
        other.count = self.count
        other.value = self.value.copy()
        other._decay = self._decay
        if self._acc is not None:
            other._acc = self._acc.copy()
        return other

    def __repr__(self):
        extra = f", gamma={self.gamma}" if self.mode == EWMA else ""
        return f"DissimilarityStream(n_nodes={self.n_nodes}, mode={self.mode!r}{extra}, count={self.count})"
