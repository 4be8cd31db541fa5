"""Static figure rendering for CLI reports (PNG/PDF/SVG by file suffix).

Figures are drawn on bare ``Figure`` objects with the Agg canvas so nothing
here touches pyplot's global state or needs a display.
"""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure

REGION_COLORS = ["#ffffff", "#add8e6", "#bfbfbf", "#ff7276"]  # infeasible .. with encryption

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
}


def _figure(width=6.0, height=3.6):
    fig = Figure(figsize=(width, height), dpi=150)
    FigureCanvasAgg(fig)
    return fig


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_mtu_sweep(points, path, title=""):
    """Delay (left axis) and throughput (right axis) against MTU."""
    import matplotlib as mpl

    with mpl.rc_context(RC):
        fig = _figure()
        ax = fig.add_subplot(111)
        mtus = [p.mtu for p in points]
        ax.plot(mtus, [p.total_delay_us for p in points], color="tab:blue", marker=".", label="delay")
        ax.set_xlabel("MTU (B)")
        ax.set_ylabel("total delay (µs)", color="tab:blue")
        ax2 = ax.twinx()
        ax2.plot(mtus, [p.throughput_mbps for p in points], color="tab:red", marker=".", label="throughput")
        ax2.set_ylabel("throughput (Mb/s)", color="tab:red")
        best = min(points, key=lambda p: (p.total_delay_us, -p.mtu))
        ax.axvline(best.mtu, color="0.5", lw=0.8, ls="--")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_cdfs(cdfs: dict, path, title=""):
    import matplotlib as mpl

    with mpl.rc_context(RC):
        fig = _figure()
        ax = fig.add_subplot(111)
        for label, cdf in cdfs.items():
            xs, ys = zip(*cdf.points)
            ax.step(xs, ys, where="post", label=label)
        ax.set_xlabel("packet length (B)")
        ax.set_ylabel("CDF")
        ax.set_ylim(0, 1.02)
        ax.legend(loc="lower right")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_feasibility(classification, path, title=""):
    """Budget grid shaded by region, budget values written in each cell."""
    import matplotlib as mpl

    t = classification.table
    codes = np.array([[int(r) for r in row] for row in classification.regions])
    with mpl.rc_context(RC):
        fig = _figure(7.5, 4.5)
        ax = fig.add_subplot(111)
        ax.imshow(codes, cmap=ListedColormap(REGION_COLORS), vmin=0, vmax=3, aspect="auto")
        for i in range(codes.shape[0]):
            for j in range(codes.shape[1]):
                ax.text(j, i, f"{t.budget[i, j]:g}", ha="center", va="center", fontsize=6)
        ax.set_xticks(range(len(t.du_categories)), t.du_categories)
        ax.set_yticks(range(len(t.ru_categories)), t.ru_categories)
        ax.set_xlabel("O-DU category")
        ax.set_ylabel("O-RU category")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_profiles(profiles, path, lo=0, hi=9000):
    import matplotlib as mpl

    xs = np.linspace(lo, hi, 400)
    with mpl.rc_context(RC):
        fig = _figure()
        ax = fig.add_subplot(111)
        for p in profiles:
            ax.plot(xs, [p(x) for x in xs], label=p.name)
        ax.set_xlabel("packet length (B)")
        ax.set_ylabel("processing delay (µs)")
        ax.legend()
        return _save(fig, path)
