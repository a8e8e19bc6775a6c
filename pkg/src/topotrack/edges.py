"""Compact edge-vector algebra for undirected graphs without self-loops.

An undirected graph on ``N`` nodes is parametrized by the vector ``w`` of its
``N(N-1)/2`` upper-triangular adjacency entries, stored in lexicographic pair
order ``(0,1), (0,2), ..., (0,N-1), (1,2), ...``. Node indices are 0-based
in code and 1-based in every file written to disk.

The degree operator ``S`` (``d = S w``) and its adjoint are applied through
index arithmetic; ``S`` is never materialized.
"""

from __future__ import annotations

import csv
import functools

import numpy as np


def n_pairs(n_nodes: int) -> int:
    """Number of unordered node pairs, ``N(N-1)/2``."""
    return n_nodes * (n_nodes - 1) // 2


def n_nodes_from_pairs(m: int) -> int:
    """Invert :func:`n_pairs`; raise if ``m`` is not a triangular number."""
    n = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    if n_pairs(n) != m or n < 2:
        raise ValueError(f"{m} is not a valid edge-vector length")
    return n


@functools.lru_cache(maxsize=32)
def pair_indices(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column index arrays of the canonical pair ordering.

    The returned arrays are read-only and shared between callers.
    """
    if n_nodes < 2:
        raise ValueError("a graph needs at least two nodes")
    rows, cols = np.triu_indices(n_nodes, k=1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def index_of(i: int, j: int, n_nodes: int) -> int:
    """Position of the pair ``{i, j}`` (0-based, ``i != j``) in an edge vector."""
    if i == j or not (0 <= i < n_nodes and 0 <= j < n_nodes):
        raise ValueError(f"invalid pair ({i}, {j}) for {n_nodes} nodes")
    if i > j:
        i, j = j, i
    # pairs preceding row i: (N-1) + (N-2) + ... + (N-i)
    return i * (2 * n_nodes - i - 1) // 2 + (j - i - 1)


def pair_of(k: int, n_nodes: int) -> tuple[int, int]:
    """Inverse of :func:`index_of`."""
    if not 0 <= k < n_pairs(n_nodes):
        raise ValueError(f"pair index {k} out of range for {n_nodes} nodes")
    rows, cols = pair_indices(n_nodes)
    return int(rows[k]), int(cols[k])


def apply_S(w: np.ndarray, n_nodes: int | None = None) -> np.ndarray:
    """Degree vector ``S w``: entry ``i`` sums the weights of edges touching ``i``."""
    w = np.asarray(w, dtype=float)
    n = n_nodes_from_pairs(w.size) if n_nodes is None else n_nodes
    rows, cols = pair_indices(n)
    return np.bincount(rows, weights=w, minlength=n) + np.bincount(cols, weights=w, minlength=n)


def apply_S_transpose(lam: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`apply_S`: entry ``k`` is ``lam[i] + lam[j]`` for pair ``k = (i, j)``."""
    lam = np.asarray(lam, dtype=float)
    rows, cols = pair_indices(lam.size)
    return lam[rows] + lam[cols]


def to_adjacency(w: np.ndarray, n_nodes: int | None = None) -> np.ndarray:
    """Symmetric adjacency matrix with zero diagonal."""
    w = np.asarray(w, dtype=float)
    n = n_nodes_from_pairs(w.size) if n_nodes is None else n_nodes
    rows, cols = pair_indices(n)
    W = np.zeros((n, n))
    W[rows, cols] = w
    W[cols, rows] = w
    return W


def from_adjacency(W: np.ndarray) -> np.ndarray:
    """Upper-triangular entries of ``W`` in canonical order."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("adjacency matrix must be square")
    rows, cols = pair_indices(W.shape[0])
    return W[rows, cols].copy()


def laplacian(w: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian ``diag(S w) - W``."""
    W = to_adjacency(w)
    return np.diag(W.sum(axis=1)) - W


def total_variation(w: np.ndarray, x: np.ndarray) -> float:
    """Dirichlet energy ``x^T L x`` of signal ``x`` on the graph ``w``.

    Evaluated as ``sum_k w_k (x_i - x_j)^2`` over unordered pairs, which is
    the same as half the sum over ordered pairs.
    """
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    rows, cols = pair_indices(x.size)
    if w.size != rows.size:
        raise ValueError(f"edge vector of length {w.size} does not match {x.size} nodes")
    return float(np.dot(w, (x[rows] - x[cols]) ** 2))


def check_edge_vector(w: np.ndarray, n_nodes: int | None = None) -> np.ndarray:
    """Validate a nonnegative, finite edge vector and return it as a float array."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise ValueError("edge vector must be one-dimensional")
    if n_nodes is not None and w.size != n_pairs(n_nodes):
        raise ValueError(f"expected {n_pairs(n_nodes)} edge weights, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise ValueError("edge vector contains non-finite values")
    if np.any(w < 0):
        raise ValueError("edge weights must be nonnegative")
    return w


# -- serialization -----------------------------------------------------------

EDGE_LIST_HEADER = ("i", "j", "weight")
EDGE_VECTOR_HEADER = ("weight",)


def write_edge_list(path, w: np.ndarray, threshold: float = 0.0) -> None:
    """Write ``i,j,weight`` rows (1-based, ``i < j``) for weights above ``threshold``.

    With the default threshold every strictly positive edge is written.
    """
    w = np.asarray(w, dtype=float)
    rows, cols = pair_indices(n_nodes_from_pairs(w.size))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EDGE_LIST_HEADER)
        for k in np.flatnonzero(w > threshold):
            writer.writerow((rows[k] + 1, cols[k] + 1, repr(float(w[k]))))


def read_edge_list(path, n_nodes: int) -> np.ndarray:
    """Read an edge list written by :func:`write_edge_list`; absent pairs are zero."""
    w = np.zeros(n_pairs(n_nodes))
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != EDGE_LIST_HEADER:
            raise ValueError(f"{path}: expected header {','.join(EDGE_LIST_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            i, j, weight = int(row[0]) - 1, int(row[1]) - 1, float(row[2])
            if not i < j:
                raise ValueError(f"{path}:{lineno}: endpoints must satisfy i < j")
            w[index_of(i, j, n_nodes)] = weight
    return w


def write_edge_vector(path, w: np.ndarray) -> None:
    """Write the full edge vector, one weight per row, in canonical order."""
    with open(path, "w", newline="") as fh:
        fh.write(EDGE_VECTOR_HEADER[0] + "\n")
        for value in np.asarray(w, dtype=float):
            fh.write(repr(float(value)) + "\n")


def read_edge_vector(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != EDGE_VECTOR_HEADER[0]:
            raise ValueError(f"{path}: expected header {EDGE_VECTOR_HEADER[0]!r}")
        w = np.array([float(line) for line in fh if line.strip()])
    n_nodes_from_pairs(w.size)
    return w


__all__ = [
    "n_pairs", "n_nodes_from_pairs", "pair_indices", "index_of", "pair_of",
    "apply_S", "apply_S_transpose", "to_adjacency", "from_adjacency", "laplacian",
    "total_variation", "check_edge_vector", "write_edge_list", "read_edge_list",
    "write_edge_vector", "read_edge_vector",
]
