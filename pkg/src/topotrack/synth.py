"""Seeded ground-truth graphs and smooth Gaussian signal streams.

Graphs are binary edge vectors drawn from Erdos-Renyi or stochastic block
models. A scenario may hold several piecewise-constant segments: each new
segment rewires a fraction of the previous segment's edges. Signals follow
``x ~ N(0, pinv(L) + sigma^2 I)``.

Every random draw is keyed on ``(seed, purpose, index)`` so that any single
graph or sample can be regenerated without replaying the stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .edges import laplacian, n_pairs, pair_indices, to_adjacency

MAX_RETRIES = 100
EIG_RTOL = 1e-9

# stream tags mixed into the seed sequence
_GRAPH, _REWIRE, _SIGNAL = 1, 2, 3


class GenerationError(RuntimeError):
    """Raised when a connected graph cannot be drawn within the retry budget."""


@dataclass(frozen=True)
class GraphScenario:
    """Generative description of a piecewise-constant ground-truth graph.

    ``model`` is ``"er"`` (uses ``p``) or ``"sbm"`` (uses ``blocks``, ``p_in``,
    ``p_out``). ``switch_times`` lists the 1-based sample indices at which a
    new segment starts; a switch at ``t = 1000`` means samples ``1..1000``
    come from the first graph.
    """

    model: str = "er"
    n_nodes: int = 100
    p: float = 0.2
    blocks: tuple[int, ...] = ()
    p_in: float = 0.3
    p_out: float = 0.05
    switch_times: tuple[int, ...] = ()
    resample_fraction: float = 0.1
    noise_sigma: float = 0.01
    horizon: int = 2000
    seed: int = 0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.model not in ("er", "sbm"):
            raise ValueError(f"unknown graph model {self.model!r}; expected 'er' or 'sbm'")
        if self.n_nodes < 2:
            raise ValueError("a graph needs at least two nodes")
        if self.model == "er" and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"edge probability must lie in [0, 1], got {self.p}")
        if self.model == "sbm":
            blocks = tuple(int(b) for b in self.blocks) or _even_blocks(self.n_nodes, 2)
            if sum(blocks) != self.n_nodes or min(blocks) < 1:
                raise ValueError(f"block sizes {blocks} do not partition {self.n_nodes} nodes")
            object.__setattr__(self, "blocks", blocks)
            for name in ("p_in", "p_out"):
                if not 0.0 <= getattr(self, name) <= 1.0:
                    raise ValueError(f"{name} must lie in [0, 1]")
        if not 0.0 <= self.resample_fraction <= 1.0:
            raise ValueError("resample_fraction must lie in [0, 1]")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        switches = tuple(sorted(int(t) for t in self.switch_times))
        if any(not 1 <= t < self.horizon for t in switches) or len(set(switches)) != len(switches):
            raise ValueError(f"switch times {switches} must be distinct and lie in [1, horizon)")
        object.__setattr__(self, "switch_times", switches)

    @property
    def n_segments(self) -> int:
        return len(self.switch_times) + 1

    def segment_bounds(self) -> list[tuple[int, int]]:
        """1-based inclusive ``(first, last)`` sample index of every segment."""
        edges = [0, *self.switch_times, self.horizon]
        return [(edges[s] + 1, edges[s + 1]) for s in range(self.n_segments)]

    def segment_of(self, t: int) -> int:
        """Segment index holding sample ``t`` (1-based)."""
        return int(np.searchsorted(self.switch_times, t, side="left"))

    def edge_probabilities(self) -> np.ndarray:
        """Per-pair edge probability in canonical order."""
        m = n_pairs(self.n_nodes)
        if self.model == "er":
            return np.full(m, float(self.p))
        labels = np.repeat(np.arange(len(self.blocks)), self.blocks)
        rows, cols = pair_indices(self.n_nodes)
        return np.where(labels[rows] == labels[cols], self.p_in, self.p_out)


def _even_blocks(n: int, k: int) -> tuple[int, ...]:
    return tuple(n // k + (1 if b < n % k else 0) for b in range(k))


def is_connected(w: np.ndarray) -> bool:
    W = to_adjacency(w)
    return connected_components(W > 0, directed=False)[0] == 1


def draw_graph(probabilities: np.ndarray, rng: np.random.Generator,
               retries: int = MAX_RETRIES) -> np.ndarray:
    """Independent Bernoulli edges, redrawn until the graph is connected."""
    for _ in range(retries):
        w = (rng.random(probabilities.size) < probabilities).astype(float)
        if is_connected(w):
            return w
    raise GenerationError(f"no connected graph after {retries} draws")


def resample_edges(w: np.ndarray, fraction: float, seed=None,
                   retries: int = MAX_RETRIES) -> np.ndarray:
    """Rewire ``ceil(fraction * |E|)`` edges of a binary graph, keeping the edge count.

    The chosen existing edges are removed and the same number of currently
    absent pairs, chosen uniformly, are added. Draws that disconnect the
    graph are retried.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    w = np.asarray(w, dtype=float)
    present = np.flatnonzero(w > 0)
    absent = np.flatnonzero(w == 0)
    k = math.ceil(fraction * present.size - 1e-12)
    if k == 0:
        return w.copy()
    if k > absent.size:
        raise GenerationError(f"cannot move {k} edges: only {absent.size} absent pairs")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        out = w.copy()
        out[rng.choice(present, size=k, replace=False)] = 0.0
        out[rng.choice(absent, size=k, replace=False)] = 1.0
        if is_connected(out):
            return out
    raise GenerationError(f"rewiring kept disconnecting the graph after {retries} draws")


def generate_graph(scenario: GraphScenario, segment_index: int = 0) -> np.ndarray:
    """Ground-truth binary edge vector of one segment (deterministic in the seed)."""
    if not 0 <= segment_index < scenario.n_segments:
        raise ValueError(f"segment {segment_index} out of range")
    cache = scenario._cache
    if segment_index in cache:
        return cache[segment_index].copy()
    if segment_index == 0:
        rng = np.random.default_rng([scenario.seed, _GRAPH])
        w = draw_graph(scenario.edge_probabilities(), rng)
    else:
        prev = generate_graph(scenario, segment_index - 1)
        w = resample_edges(prev, scenario.resample_fraction, [scenario.seed, _REWIRE, segment_index])
    cache[segment_index] = w
    return w.copy()


class SignalSampler:
    """Draws ``x ~ N(0, pinv(L) + sigma^2 I)`` for a fixed graph.

    The Laplacian is diagonalized once; eigenvalues below
    ``EIG_RTOL * lambda_max`` are treated as zero.
    """

    def __init__(self, w: np.ndarray, noise_sigma: float):
        if noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        evals, evecs = np.linalg.eigh(laplacian(w))
        cutoff = EIG_RTOL * max(evals[-1], 0.0)
        scale = np.zeros_like(evals)
        nz = evals > cutoff
        scale[nz] = 1.0 / np.sqrt(evals[nz])
        self.factor = evecs * scale
        self.noise_sigma = float(noise_sigma)
        self.n_nodes = evals.size

    def covariance(self) -> np.ndarray:
        return self.factor @ self.factor.T + self.noise_sigma**2 * np.eye(self.n_nodes)

    def draw(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        shape = (self.n_nodes,) if size is None else (size, self.n_nodes)
        z = rng.standard_normal(shape)
        noise = rng.standard_normal(shape)
        return z @ self.factor.T + self.noise_sigma * noise


def sample_signal(w_true: np.ndarray, noise_sigma: float, seed: int, t: int) -> np.ndarray:
    """One smooth signal sample, deterministic in ``(seed, t)``."""
    return SignalSampler(w_true, noise_sigma).draw(np.random.default_rng([seed, _SIGNAL, t]))


def generate_stream(scenario: GraphScenario) -> tuple[np.ndarray, list[np.ndarray]]:
    """Full signal matrix ``(T, N)`` and the ground-truth graph of every segment.

    Row ``t - 1`` equals ``sample_signal(graph of segment_of(t), sigma, seed, t)``.
    """
    graphs = [generate_graph(scenario, s) for s in range(scenario.n_segments)]
    X = np.empty((scenario.horizon, scenario.n_nodes))
    for s, (first, last) in enumerate(scenario.segment_bounds()):
        sampler = SignalSampler(graphs[s], scenario.noise_sigma)
        for t in range(first, last + 1):
            X[t - 1] = sampler.draw(np.random.default_rng([scenario.seed, _SIGNAL, t]))
    return X, graphs
