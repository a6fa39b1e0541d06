"""Figures for corpus experiments.

Everything renders straight to files through the Agg backend.
"""

from __future__ import annotations

import csv
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CORPUS_FIELDS = ["name", "base", "height", "rotation_number", "least_period", "max_itinerary", "splits", "log2_bound"]


def get_plot(width=7, height=None):
    """Figure and axes with the house defaults."""
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    if not height:
        height = width * golden_ratio
    fig, ax = plt.subplots(figsize=(width, height), facecolor="w")
    ax.tick_params(labelsize=10)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    return fig, ax


def write_csv(rows, path, fields=CORPUS_FIELDS):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in fields})


def plot_period_vs_height(rows, path):
    """Least period against height, with the exponential bound for base 2."""
    fig, ax = get_plot()
    by_base = {}
    for r in rows:
        by_base.setdefault(r["base"], []).append(r)
    for base, group in sorted(by_base.items()):
        ax.scatter(
            [r["height"] for r in group],
            [r["least_period"] for r in group],
            s=12,
            alpha=0.6,
            label=f"least period (n={base})",
        )
    heights = sorted({r["height"] for r in rows})
    if heights:
        xs = list(range(1, max(heights) + 1))
        ax.plot(xs, [x * x for x in xs], "k:", lw=1, label="m^2")
        ax.plot(xs[:40], [2**x * x for x in xs[:40]], "k--", lw=1, label="2^m m")
    ax.set_yscale("log")
    ax.set_xscale("log")
    ax.set_xlabel("height m")
    ax.set_ylabel("least period")
    ax.set_ylim(bottom=0.8, top=max([r["least_period"] for r in rows] + [1]) * 50)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_flow_growth(rows, path):
    """Final circle weight of the nested-sink flows against r2 (log2 axis)."""
    fig, ax = get_plot()
    series = {}
    for r in rows:
        series.setdefault((r["r1"], r["r3"]), []).append((r["r2"], r["weight"]))
    for (r1, r3), pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, lw=1, label=f"r1={r1}, r3={r3}")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("r2 (nested sink pairs)")
    ax.set_ylabel("circle weight")
    ax.legend(frameon=False, fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
