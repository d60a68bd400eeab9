"""Site distributions and the scalar figures of merit computed from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .state import WalkState

__all__ = [
    "Distribution",
    "distribution",
    "mean",
    "variance",
    "similarity",
    "classical_distribution",
    "max_abs_difference",
]

Site = tuple[int, ...]


@dataclass(frozen=True)
class Distribution:
    """Probability per lattice site after ``step`` steps."""

    step: int
    probs: Mapping[Site, float] = field(default_factory=dict)

    def __getitem__(self, site):
        return self.probs.get(tuple(site), 0.0)

    def __len__(self):
        return len(self.probs)

    def total(self) -> float:
        return math.fsum(self.probs.values())

    @property
    def ndim(self) -> int:
        return len(next(iter(self.probs))) if self.probs else 2

    def normalized(self) -> "Distribution":
        tot = self.total()
        return Distribution(self.step, {k: v / tot for k, v in self.probs.items()})

    def mapped(self, transform) -> "Distribution":
        """Relabel every site with ``transform(site)`` (e.g. an axis reflection)."""
        out: dict[Site, float] = {}
        for k, v in self.probs.items():
            key = tuple(transform(k))
            out[key] = out.get(key, 0.0) + v
        return Distribution(self.step, out)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Sites as an ``(M, ndim)`` int array and the matching probabilities, sorted."""
        keys = sorted(self.probs)
        sites = np.array(keys, dtype=np.int64).reshape(len(keys), -1)
        return sites, np.array([self.probs[k] for k in keys], dtype=float)


def distribution(state: WalkState, step: int | None = None) -> Distribution:
    """Born-rule site probabilities of ``state``."""
    p = state.site_probabilities()
    probs = {tuple(int(v) for v in s): float(q) for s, q in zip(state.sites, p)}
    return Distribution(state.step_count if step is None else step, probs)


def mean(d: Distribution) -> tuple[float, ...]:
    """Probability-weighted mean position."""
    sites, p = d.arrays()
    return tuple(float(v) for v in p @ sites)


def variance(d: Distribution) -> float:
    """Expected squared Euclidean distance from the mean position."""
    sites, p = d.arrays()
    mu = p @ sites
    return float(p @ np.sum((sites - mu) ** 2, axis=1))


def similarity(p: Distribution, q: Distribution) -> float:
    """Squared Bhattacharyya coefficient, summed over the union of supports.

    Both inputs are assumed normalised. Returns 1 for identical distributions
    and 0 for disjoint ones.
    """
    common = p.probs.keys() & q.probs.keys()
    bc = math.fsum(math.sqrt(max(p.probs[k], 0.0) * max(q.probs[k], 0.0)) for k in common)
    return min(bc * bc, 1.0)


def max_abs_difference(p: Distribution, q: Distribution) -> float:
    keys = p.probs.keys() | q.probs.keys()
    return max((abs(p[k] - q[k]) for k in keys), default=0.0)


def classical_distribution(n: int, ndim: int = 2) -> Distribution:
    """Unbiased classical walk taking one ±1 step per axis per step.

    P(x, y) = C(n, (n+x)/2) C(n, (n+y)/2) / 4^n on the parity lattice.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    marginal = {2 * k - n: math.comb(n, k) for k in range(n + 1)}
    denom = 2 ** (n * ndim)
    probs: dict[Site, float] = {}

    def fill(prefix, weight):
        if len(prefix) == ndim:
            probs[prefix] = weight / denom
            return
        for x, c in marginal.items():
            fill(prefix + (x,), weight * c)

    fill((), 1)
    return Distribution(n, probs)
