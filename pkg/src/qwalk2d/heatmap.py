"""Portable-pixmap rendering of site distributions (no plotting dependency)."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .metrics import Distribution

__all__ = ["distribution_image", "write_ppm", "render_heatmap", "read_ppm"]


def distribution_image(d: Distribution, log: bool = False) -> tuple[np.ndarray, float]:
    """Intensity array with one cell per site of the bounding box, and the max probability.

    Row 0 is the largest ``y``; column 0 the smallest ``x``. Intensities are
    scaled linearly to [0, 1] by the maximum probability, or by log10 over
    four decades when ``log`` is set.
    """
    if not d.probs:
        return np.zeros((1, 1)), 0.0
    xs = [k[0] for k in d.probs]
    ys = [k[1] for k in d.probs]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    img = np.zeros((y1 - y0 + 1, x1 - x0 + 1))
    for (x, y), p in d.probs.items():
        img[y1 - y, x - x0] = p
    pmax = float(img.max())
    if pmax <= 0:
        return img, 0.0
    if log:
        floor = pmax * 1e-4
        with np.errstate(divide="ignore"):
            scaled = (np.log10(np.maximum(img, floor)) - math.log10(floor)) / 4.0
        scaled[img <= 0] = 0.0
        return scaled, pmax
    return img / pmax, pmax


def write_ppm(path, intensity: np.ndarray, scale: int = 1, comment: str = "") -> Path:
    """Write a binary (P6) grayscale pixmap, each cell ``scale`` pixels square."""
    levels = np.clip(np.rint(intensity * 255), 0, 255).astype(np.uint8)
    if scale > 1:
        levels = np.kron(levels, np.ones((scale, scale), dtype=np.uint8))
    rgb = np.repeat(levels[:, :, None], 3, axis=2)
    h, w = levels.shape
    header = "P6\n"
    if comment:
        header += f"# {comment}\n"
    header += f"{w} {h}\n255\n"
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(rgb.tobytes())
    return path


def render_heatmap(d: Distribution, path, scale: int = 16, log: bool = False) -> float:
    """Render ``d`` to ``path`` and return the probability mapped to full white."""
    img, pmax = distribution_image(d, log=log)
    mode = "log" if log else "linear"
    write_ppm(path, img, scale=scale, comment=f"step {d.step} {mode} scale max p = {pmax:.6g}")
    return pmax


def read_ppm(path) -> np.ndarray:
    """Read a P6 file written by :func:`write_ppm` as an (h, w, 3) uint8 array."""
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        tokens.append(data[pos:end].decode("ascii"))
        pos = end
    pos += 1
    magic, w, h, _ = tokens
    if magic != "P6":
        raise ValueError("not a binary PPM")
    return np.frombuffer(data[pos:], dtype=np.uint8).reshape(int(h), int(w), 3)
