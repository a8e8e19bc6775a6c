"""SVG figures rendered from result tables.

Every figure is a pure function of the tables written by the experiment
commands, so plots can be regenerated offline with ``topotrack plot``.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import read_table  # noqa: E402

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 5.0

params = {
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (fig_width, fig_width * golden_mean),
    "lines.linewidth": 1.2,
    "axes.grid": True,
    "grid.alpha": 0.3,
    # fixed ids and no date stamp: identical inputs give identical SVG bytes
    "svg.hashsalt": "topotrack",
    "svg.fonttype": "none",
}

METHOD_LABELS = {"dpg": "online DPG", "primal_pg": "online PG (primal)"}
METHOD_STYLES = {"dpg": dict(color="#08589e"), "primal_pg": dict(color="#d95f0e", linestyle="--")}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_tracking_error(records_path, out_path, switch_times=()):
    """Tracking error against time, one curve per method, log-scale y axis."""
    cols = read_table(records_path)
    t = np.asarray(cols["t"])
    methods = cols["method"]
    err = np.asarray(cols["error"])
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        for method in dict.fromkeys(methods):
            sel = np.array([m == method for m in methods])
            ax.semilogy(t[sel], err[sel], label=METHOD_LABELS.get(method, method),
                        **METHOD_STYLES.get(method, {}))
        for ts in switch_times:
            ax.axvline(ts, color="0.5", linewidth=0.8, linestyle=":")
        ax.set_xlabel("time sample $t$")
        ax.set_ylabel(r"$\|\hat{w}_t - w_t^\star\|_2$")
        ax.legend(loc="upper right")
        fig.tight_layout()
        _save(fig, out_path)


def plot_weight_evolution(weights_path, out_path):
    """Total learned edge weight against time with event markers."""
    cols = read_table(weights_path)
    use_seconds = "time_s" in cols and not all(math.isnan(v) for v in cols["time_s"])
    x = np.asarray(cols["time_s"] if use_seconds else cols["t"])
    total = np.asarray(cols["total_weight"])
    marker = np.asarray(cols.get("marker", np.zeros_like(total)))
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        ax.plot(x, total, color="#08589e")
        for xm in x[marker > 0]:
            ax.axvline(xm, color="#cb181d", linewidth=1.0)
        ax.set_xlabel("time [s]" if use_seconds else "time sample $t$")
        ax.set_ylabel("total edge weight")
        fig.tight_layout()
        _save(fig, out_path)


def circular_layout(n: int) -> np.ndarray:
    angles = np.pi / 2 - 2 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(angles), np.sin(angles)])


def plot_graph_snapshot(edges_path, centrality_path, out_path, title=None):
    """Learned graph on a circular layout; node shade follows closeness centrality.

    Darker nodes have lower centrality. Edge width and opacity scale with weight.
    """
    edges = read_table(edges_path)
    cent = read_table(centrality_path)
    c = np.asarray(cent["closeness"])
    pos = circular_layout(c.size)
    weights = np.asarray(edges["weight"]) if edges["weight"] else np.zeros(0)
    top = weights.max() if weights.size else 1.0
    with plt.rc_context(params):
        fig, ax = plt.subplots(figsize=(fig_width, fig_width))
        for i, j, wt in zip(edges["i"], edges["j"], weights):
            a, b = pos[int(i) - 1], pos[int(j) - 1]
            rel = wt / top
            ax.plot([a[0], b[0]], [a[1], b[1]], color="0.2", linewidth=0.2 + 1.5 * rel,
                    alpha=0.15 + 0.6 * rel, zorder=1)
        sc = ax.scatter(pos[:, 0], pos[:, 1], c=c, cmap="Blues_r", s=40, edgecolors="k",
                        linewidths=0.4, zorder=2)
        fig.colorbar(sc, ax=ax, shrink=0.7, label="closeness centrality")
        ax.set_aspect("equal")
        ax.axis("off")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, out_path)
