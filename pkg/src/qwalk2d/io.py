"""Delimited-text formats for distributions, time grids and histograms."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import WalkInputError
from .metrics import Distribution

__all__ = [
    "write_distributions",
    "read_distributions",
    "write_grid",
    "read_grid",
    "write_histogram",
    "read_histogram",
    "write_metadata",
    "config_digest",
]

DIST_COLUMNS = ("n", "x", "y", "p")


def write_distributions(path, dists: Iterable[Distribution]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DIST_COLUMNS)
        for d in dists:
            for (x, y), p in sorted(d.probs.items()):
                w.writerow((d.step, x, y, repr(float(p))))
    return path


def read_distributions(path) -> dict[int, Distribution]:
    """Parse a ``n,x,y,p`` file into one :class:`Distribution` per step.

    Raises
    ------
    WalkInputError
        On a missing file, wrong header, unparsable row or negative probability.
    """
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise WalkInputError(f"cannot read {path}: {exc.strerror}") from None
    out: dict[int, dict] = {}
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != DIST_COLUMNS:
            raise WalkInputError(f"{path}: expected header {','.join(DIST_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                n, x, y = (int(v) for v in row[:3])
                p = float(row[3])
                if len(row) != 4:
                    raise ValueError
            except (ValueError, IndexError):
                raise WalkInputError(f"{path}:{lineno}: malformed row {row!r}") from None
            if not p >= 0.0:
                raise WalkInputError(f"{path}:{lineno}: negative probability")
            out.setdefault(n, {})[(x, y)] = out.get(n, {}).get((x, y), 0.0) + p
    if not out:
        raise WalkInputError(f"{path}: no distribution rows")
    return {n: Distribution(n, probs) for n, probs in sorted(out.items())}


def write_grid(path, grid) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("n", "x", "y", "time_ns"))
        for (n, x, y), t in zip(grid.labels, grid.times):
            w.writerow((int(n), int(x), int(y), repr(float(t))))
    return path


def read_grid(path) -> list[tuple[int, int, int, float]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [(int(r["n"]), int(r["x"]), int(r["y"]), float(r["time_ns"])) for r in rows]


def write_histogram(path, hist) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("bin_start_ns", "counts"))
        for t, c in zip(hist.bin_start_ns, hist.counts):
            w.writerow((f"{t:.6f}", int(c)))
    return path


def read_histogram(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1].astype(np.int64)


def config_digest(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def write_metadata(path, config: dict, **extra) -> Path:
    path = Path(path)
    payload = {"config": config, "config_sha256": config_digest(config), **extra}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return path
