"""Static SVG figures: placement maps and duty-cycle sweep curves.

Output is byte-identical for identical inputs: the SVG hash salt is fixed,
the date stamp is dropped and text is embedded as paths.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_placement", "plot_sweep", "STYLE"]

STYLE = {
    "svg.hashsalt": "rfcharge",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.linewidth": 0.8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "legend.frameon": False,
}

_SVG_META = {"Date": None, "Creator": "rfcharge"}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_placement(scenario, chargers, path, r1=None, title=None):
    """Field outline, nodes as dots, chargers as triangles.

    With ``r1`` a dashed circle of that radius is drawn around each charger.
    """
    chargers = np.asarray(chargers, dtype=float).reshape(-1, 2)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.5 * scenario.height / scenario.width))
        ax.add_patch(plt.Rectangle((0, 0), scenario.width, scenario.height, fill=False, lw=1.0, color="0.3"))
        ax.scatter(scenario.nodes[:, 0], scenario.nodes[:, 1], s=8, c="tab:blue", marker="o", label="node", zorder=3, gid="nodes")
        if len(chargers):
            ax.scatter(chargers[:, 0], chargers[:, 1], s=30, c="tab:red", marker="^", label="charger", zorder=4, gid="chargers")
            if r1 is not None:
                for x, y in chargers:
                    ax.add_patch(plt.Circle((x, y), r1, fill=False, ls="--", lw=0.5, color="tab:red", alpha=0.5))
        ax.set_xlim(-0.05 * scenario.width, 1.05 * scenario.width)
        ax.set_ylim(-0.05 * scenario.height, 1.05 * scenario.height)
        ax.set_aspect("equal")
        ax.set_xlabel("x (m)")
        ax.set_ylabel("y (m)")
        ax.set_title(title or f"N={scenario.n}, K={len(chargers)}")
        fig.tight_layout()
        _save(fig, path)


def plot_sweep(rows, path, title=None):
    """Best charger count per algorithm against duty cycle."""
    from rfcharge.evaluation import best_counts

    best = best_counts(rows)
    algos = sorted({a for _, a in best})
    markers = {"greedy": "s", "pso": "D", "pso-dc": "o"}
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for algo in algos:
            alphas = sorted(a for a, name in best if name == algo)
            ax.plot(alphas, [best[(a, algo)] for a in alphas], marker=markers.get(algo, "x"), label=algo)
        ax.set_xlabel("duty cycle")
        ax.set_ylabel("chargers")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        _save(fig, path)
