"""Matplotlib figures written next to the delimited report files."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .metrics import Distribution  # noqa: E402

__all__ = ["plot_panels", "plot_spreading", "plot_histogram"]


def _grid(d: Distribution, radius: int) -> np.ndarray:
    img = np.full((2 * radius + 1, 2 * radius + 1), np.nan)
    for (x, y), p in d.probs.items():
        if abs(x) <= radius and abs(y) <= radius:
            img[y + radius, x + radius] = p
    return img


def plot_panels(dists: Sequence[Distribution], path, title: str = "") -> Path:
    """One heatmap panel per step, sharing the lattice extent of the last step."""
    radius = max(max((max(abs(k[0]), abs(k[1])) for k in d.probs), default=0) for d in dists)
    radius = max(radius, 1)
    cols = min(len(dists), 5)
    rows = math.ceil(len(dists) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(2.6 * cols, 2.6 * rows), squeeze=False)
    ext = (-radius - 0.5, radius + 0.5, -radius - 0.5, radius + 0.5)
    for ax in axes.flat:
        ax.set_axis_off()
    for ax, d in zip(axes.flat, dists):
        ax.set_axis_on()
        im = ax.imshow(_grid(d, radius), origin="lower", extent=ext, cmap="viridis", vmin=0)
        ax.set_title(f"n = {d.step}", fontsize=10)
        ax.set_xticks(range(-radius, radius + 1, max(1, radius // 2)))
        ax.set_yticks(range(-radius, radius + 1, max(1, radius // 2)))
        ax.tick_params(labelsize=7)
        fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04).ax.tick_params(labelsize=6)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_spreading(steps, variances, path, classical=None) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot(steps, variances, "o-", label="quantum walk")
    if classical is not None:
        ax.plot(steps, classical, "s--", label="classical walk")
    ax.set_xlabel("step n")
    ax.set_ylabel("variance")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_histogram(hist, grid, path) -> Path:
    """Arrival-time histogram with the expected grid times marked."""
    fig, ax = plt.subplots(figsize=(9, 3.2))
    ax.plot(hist.bin_start_ns, hist.counts, lw=0.6, color="k")
    ymax = max(int(hist.counts.max()), 1)
    ax.vlines(grid.times, 0, ymax, colors="tab:red", lw=0.3, alpha=0.5)
    ax.set_yscale("symlog", linthresh=1)
    ax.set_xlabel("arrival time (ns)")
    ax.set_ylabel(f"counts / {hist.bin_ns * 1000:g} ps")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
