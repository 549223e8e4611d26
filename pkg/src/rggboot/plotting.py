"""Matplotlib figures written next to the CSV reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_sweep(series, bounds=None, path="sweep.png", log_x=True, title=""):
    """Fully-active percentage against p, with the analytic bounds as dashed lines."""
    if not isinstance(series, dict):
        series = {"fully active": series}
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, rows in series.items():
        rows = [r for r in rows if r.p > 0 or not log_x]
        ax.plot([r.p for r in rows], [100 * r.full_fraction for r in rows], "o-", ms=3, label=label)
    if bounds is not None:
        ax.axvline(bounds.p_prime, ls="--", color="0.4", label=f"p' = {bounds.p_prime:.3g}")
        ax.axvline(bounds.p_double_prime, ls="--", color="k", label=f"p'' = {bounds.p_double_prime:.3g}")
    if log_x:
        ax.set_xscale("log")
    ax.set_ylim(-2, 102)
    ax.set_xlabel("initial activation probability p")
    ax.set_ylabel("fully active runs (%)")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_graph(graph, path="graph.png", max_edges=20000):
    """Scatter of the nodes with (a sample of) edges; for small instances."""
    pts = graph.pointset.points
    edges = graph.adjacency.edges()[:max_edges]
    fig, ax = plt.subplots(figsize=(5, 5))
    if len(edges):
        from matplotlib.collections import LineCollection

        ax.add_collection(LineCollection(pts[edges], colors="0.6", linewidths=0.4))
    ax.plot(pts[:, 0], pts[:, 1], "k.", ms=2)
    side = graph.pointset.side
    ax.set_xlim(0, side)
    ax.set_ylim(0, side)
    ax.set_aspect("equal")
    ax.set_title(f"{graph.num_nodes} nodes, r = {graph.radius:.4g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
