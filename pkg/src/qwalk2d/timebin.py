"""Time-multiplexed optical loop: lattice-to-arrival-time mapping, collision
audit, lossy photon-counting Monte Carlo and histogram reconstruction.

All times are in nanoseconds. The n = 0 event (photon leaving the loop before
any step) arrives at t = 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, WalkInputError
from .metrics import Distribution

__all__ = [
    "DelayConfig",
    "DEFAULT_DELAYS",
    "TimeGrid",
    "AuditResult",
    "Histogram",
    "DetectionRun",
    "Reconstruction",
    "arrival_time",
    "build_grid",
    "audit",
    "max_collision_free_steps",
    "fwhm_to_sigma",
    "arm_weighted",
    "detect_sim",
    "histogram",
    "reconstruct",
    "loss_slope",
]

# Slack on gap comparisons; decimal delay values do not subtract exactly in binary.
GAP_EPS = 1e-9
CHUNK = 1 << 16


@dataclass(frozen=True)
class DelayConfig:
    """Loop delays (ns), efficiencies and acquisition settings.

    ``L1``/``L2`` carry coin |1⟩/|0⟩ on the X stage (x + 1 / x - 1), ``L3``/``L4``
    the same on the Y stage. ``Lc`` is the common loop path.
    """

    L1: float = 127.8
    L2: float = 107.2
    L3: float = 4.7
    L4: float = 0.6
    Lc: float = 1.3
    eta_cycle: float = 0.207
    eta_det: float = 0.5
    jitter_fwhm_ns: float = 0.6
    window_ns: float = 2.0
    bin_ps: float = 8.0
    accidental_rate: float = 0.0
    arm_transmittances: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "arm_transmittances", tuple(float(t) for t in self.arm_transmittances))
        if not (self.L1 > self.L2 >= 0 and self.L3 > self.L4 >= 0):
            raise WalkInputError("delays must satisfy L1 > L2 >= 0 and L3 > L4 >= 0")
        if self.Lc < 0:
            raise WalkInputError("common path Lc must be non-negative")
        for name in ("eta_cycle", "eta_det"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise WalkInputError(f"{name} must lie in (0, 1], got {v}")
        if len(self.arm_transmittances) != 4 or not all(0 < t <= 1 for t in self.arm_transmittances):
            raise WalkInputError("arm_transmittances needs four values in (0, 1]")
        if self.jitter_fwhm_ns < 0 or self.accidental_rate < 0:
            raise WalkInputError("jitter and accidental rate must be non-negative")
        if self.window_ns <= 0 or self.bin_ps <= 0:
            raise WalkInputError("window and bin width must be positive")

    @property
    def bin_ns(self) -> float:
        return self.bin_ps / 1000.0

    @classmethod
    def from_dict(cls, data: dict) -> "DelayConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise WalkInputError(f"unknown delay config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["arm_transmittances"] = list(self.arm_transmittances)
        return d


DEFAULT_DELAYS = DelayConfig()


def _check_site(n: int, x: int, y: int):
    if n < 0 or abs(x) > n or abs(y) > n or (x - n) % 2 or (y - n) % 2:
        raise WalkInputError(f"site ({x}, {y}) is not reachable after {n} steps")


def arrival_time(cfg: DelayConfig, n: int, x: int, y: int) -> float:
    """Arrival time of a photon that finished ``n`` steps at ``(x, y)``.

    ``(n + x)/2`` of the X passes used L1 and ``(n + y)/2`` of the Y passes
    used L3; the order of passes does not matter.
    """
    _check_site(n, x, y)
    k1 = (n + x) // 2
    k3 = (n + y) // 2
    return n * cfg.Lc + k1 * cfg.L1 + (n - k1) * cfg.L2 + k3 * cfg.L3 + (n - k3) * cfg.L4


@dataclass(frozen=True, eq=False)
class TimeGrid:
    labels: np.ndarray  # (M, 3) rows of (n, x, y)
    times: np.ndarray
    min_gap_ns: float

    @property
    def entries(self) -> dict[tuple[int, int, int], float]:
        return {tuple(int(v) for v in lab): float(t) for lab, t in zip(self.labels, self.times)}

    @property
    def max_step(self) -> int:
        return int(self.labels[:, 0].max())

    def step_count(self, n: int) -> int:
        return int(np.count_nonzero(self.labels[:, 0] == n))

    def step(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """``(sites, times)`` for step ``n``; sites as an (M, 2) array."""
        mask = self.labels[:, 0] == n
        return self.labels[mask, 1:], self.times[mask]

    def __len__(self):
        return self.labels.shape[0]


def _min_gap(times: np.ndarray) -> float:
    if times.size < 2:
        return math.inf
    return float(np.min(np.diff(np.sort(times))))


def build_grid(cfg: DelayConfig, max_steps: int) -> TimeGrid:
    if max_steps < 0:
        raise WalkInputError("max_steps must be non-negative")
    labels, times = [], []
    for n in range(max_steps + 1):
        for x in range(-n, n + 1, 2):
            for y in range(-n, n + 1, 2):
                labels.append((n, x, y))
                times.append(arrival_time(cfg, n, x, y))
    times = np.array(times)
    return TimeGrid(np.array(labels, dtype=np.int64), times, _min_gap(times))


@dataclass(frozen=True)
class AuditResult:
    passed: bool
    min_gap_ns: float
    threshold_ns: float
    collisions: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def audit(grid: TimeGrid, min_gap_ns: float) -> AuditResult:
    """Check that every pair of grid entries is at least ``min_gap_ns`` apart.

    Collisions are returned as ``((n, x, y), (n', x', y'), separation)``.
    """
    order = np.argsort(grid.times, kind="stable")
    times = grid.times[order]
    labels = grid.labels[order]
    limit = min_gap_ns - GAP_EPS
    collisions = []
    for i in range(times.size):
        j = i + 1
        while j < times.size and times[j] - times[i] < limit:
            collisions.append(
                (tuple(int(v) for v in labels[i]), tuple(int(v) for v in labels[j]), float(times[j] - times[i]))
            )
            j += 1
    return AuditResult(not collisions, grid.min_gap_ns, min_gap_ns, collisions)


def max_collision_free_steps(cfg: DelayConfig, min_gap_ns: float, limit: int = 64) -> int:
    """Largest N for which the grid up to step N passes :func:`audit` (capped at ``limit``)."""
    best = 0
    for n in range(1, limit + 1):
        if not audit(build_grid(cfg, n), min_gap_ns).passed:
            break
        best = n
    return best


def fwhm_to_sigma(fwhm: float) -> float:
    return fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))


def arm_weighted(cfg: DelayConfig, d: Distribution) -> Distribution:
    """Reweight a step distribution by the per-arm transmittance of each site's path."""
    t1, t2, t3, t4 = cfg.arm_transmittances
    if (t1, t2, t3, t4) == (1.0, 1.0, 1.0, 1.0):
        return d
    n = d.step
    w = {}
    for (x, y), p in d.probs.items():
        k1, k3 = (n + x) // 2, (n + y) // 2
        w[(x, y)] = p * t1**k1 * t2 ** (n - k1) * t3**k3 * t4 ** (n - k3)
    return Distribution(n, w).normalized()


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_start_ns: np.ndarray
    counts: np.ndarray
    bin_ns: float

    def __len__(self):
        return self.counts.size


@dataclass(frozen=True, eq=False)
class DetectionRun:
    """Detected events. ``steps`` is -1 and ``sites`` is (0, 0) for accidentals."""

    times: np.ndarray
    steps: np.ndarray
    sites: np.ndarray
    photons: int
    span_ns: tuple[float, float]
    histogram: Histogram


def _histogram_span(cfg: DelayConfig, t_max: float) -> tuple[float, float]:
    b = cfg.bin_ns
    start = -math.ceil(cfg.window_ns / b) * b
    stop = start + math.ceil((t_max + cfg.window_ns - start) / b) * b
    return start, stop


def histogram(times: np.ndarray, cfg: DelayConfig, span: tuple[float, float]) -> Histogram:
    start, stop = span
    nbins = int(round((stop - start) / cfg.bin_ns))
    edges = start + cfg.bin_ns * np.arange(nbins + 1)
    counts, _ = np.histogram(times, bins=edges)
    return Histogram(edges[:-1], counts.astype(np.int64), cfg.bin_ns)


def _simulate_chunk(rng, size, cfg, steps_data, max_step, sigma):
    if cfg.eta_cycle >= 1.0:
        cycles = np.full(size, max_step + 1)
    else:
        cycles = rng.geometric(1.0 - cfg.eta_cycle, size=size) - 1
    detected = rng.random(size) < cfg.eta_det
    cycles = cycles[detected & (cycles <= max_step)]
    times, steps, sites = [], [], []
    for n, (site_arr, time_arr, probs) in enumerate(steps_data):
        count = int(np.count_nonzero(cycles == n))
        if count == 0:
            continue
        pick = rng.choice(probs.size, size=count, p=probs)
        t = time_arr[pick]
        if sigma > 0:
            t = t + rng.normal(0.0, sigma, size=count)
        times.append(t)
        steps.append(np.full(count, n, dtype=np.int64))
        sites.append(site_arr[pick])
    if not times:
        return np.zeros(0), np.zeros(0, np.int64), np.zeros((0, 2), np.int64)
    return np.concatenate(times), np.concatenate(steps), np.concatenate(sites)


def detect_sim(
    cfg: DelayConfig,
    per_step_theory: Sequence[Distribution],
    photons: int,
    seed: int,
    workers: int = 1,
) -> DetectionRun:
    """Monte Carlo of heralded photons through the lossy loop.

    Each photon completes ``n`` cycles with probability ``eta_cycle**n (1 - eta_cycle)``
    and is then registered with probability ``eta_det``; the site is drawn from
    the step-``n`` theory distribution. Photons leaving after the last supplied
    step fall outside the acquisition and are dropped.

    The photons are split into fixed-size chunks, each with its own substream
    spawned from ``seed``, so the output does not depend on ``workers``.
    """
    if not per_step_theory:
        raise WalkInputError("per_step_theory must contain at least the n = 0 distribution")
    if photons < 1:
        raise WalkInputError("photons must be >= 1")
    max_step = len(per_step_theory) - 1
    grid = build_grid(cfg, max_step)
    steps_data = []
    for n, dist in enumerate(per_step_theory):
        dist = arm_weighted(cfg, dist)
        lookup = {(int(x), int(y)): t for (x, y), t in zip(*grid.step(n))}
        site_arr, probs = dist.arrays()
        try:
            time_arr = np.array([lookup[(int(x), int(y))] for x, y in site_arr])
        except KeyError as exc:
            raise WalkInputError(f"theory site {exc.args[0]} is not on the step-{n} grid") from None
        probs = np.clip(probs, 0.0, None)
        steps_data.append((site_arr, time_arr, probs / probs.sum()))

    sigma = fwhm_to_sigma(cfg.jitter_fwhm_ns)
    n_chunks = -(-photons // CHUNK)
    root = np.random.SeedSequence(seed)
    photon_seq, background_seq = root.spawn(2)
    chunk_seqs = photon_seq.spawn(n_chunks)
    sizes = [min(CHUNK, photons - k * CHUNK) for k in range(n_chunks)]

    def work(k):
        return _simulate_chunk(np.random.default_rng(chunk_seqs[k]), sizes[k], cfg, steps_data, max_step, sigma)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    else:
        parts = [work(k) for k in range(n_chunks)]

    span = _histogram_span(cfg, float(grid.times.max()))
    times = [p[0] for p in parts]
    steps = [p[1] for p in parts]
    sites = [p[2] for p in parts]
    if cfg.accidental_rate > 0:
        brng = np.random.default_rng(background_seq)
        count = brng.poisson(cfg.accidental_rate * (span[1] - span[0]))
        times.append(brng.uniform(span[0], span[1], size=count))
        steps.append(np.full(count, -1, dtype=np.int64))
        sites.append(np.zeros((count, 2), dtype=np.int64))
    times = np.concatenate(times)
    return DetectionRun(
        times=times,
        steps=np.concatenate(steps),
        sites=np.concatenate(sites).reshape(-1, 2),
        photons=photons,
        span_ns=span,
        histogram=histogram(times, cfg, span),
    )


@dataclass(frozen=True)
class Reconstruction:
    distributions: dict[int, Distribution]
    raw_counts: dict[int, float]
    corrected_counts: dict[int, float]


def _window_counts(hist: Histogram, center: float, window: float) -> tuple[float, int]:
    centers = hist.bin_start_ns + 0.5 * hist.bin_ns
    lo = np.searchsorted(centers, center - 0.5 * window, side="left")
    hi = np.searchsorted(centers, center + 0.5 * window, side="left")
    return float(hist.counts[lo:hi].sum()), int(hi - lo)


def reconstruct(hist: Histogram, grid: TimeGrid, cfg: DelayConfig) -> Reconstruction:
    """Recover per-step site distributions from an arrival-time histogram.

    Counts inside a window centred on each grid time are summed, the expected
    accidental counts (rate x window) subtracted and clamped at zero, and the
    result normalised over the sites of the same step. Steps with no counts
    left are omitted from ``distributions``.

    Raises
    ------
    ConfigurationError
        If neighbouring grid entries are closer than the integration window.
    """
    if grid.min_gap_ns < cfg.window_ns - GAP_EPS:
        raise ConfigurationError(
            f"grid entries {grid.min_gap_ns:.3f} ns apart overlap a {cfg.window_ns} ns window"
        )
    dists, raw, corrected = {}, {}, {}
    for n in range(grid.max_step + 1):
        sites, times = grid.step(n)
        values = {}
        raw_n = 0.0
        for (x, y), t in zip(sites, times):
            c, nbins = _window_counts(hist, float(t), cfg.window_ns)
            raw_n += c
            values[(int(x), int(y))] = max(c - cfg.accidental_rate * nbins * hist.bin_ns, 0.0)
        total = math.fsum(values.values())
        raw[n] = raw_n
        corrected[n] = total
        if total > 0:
            dists[n] = Distribution(n, {k: v / total for k, v in values.items() if v > 0})
    return Reconstruction(dists, raw, corrected)


def loss_slope(step_counts: dict[int, float], steps: Sequence[int] = (1, 2, 3, 4)) -> float:
    """Least-squares slope of log counts against step number."""
    ns = np.array(steps, dtype=float)
    logs = np.log([step_counts[int(n)] for n in steps])
    return float(np.polyfit(ns, logs, 1)[0])
