"""Run configuration shared by the CLI subcommands."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import engine, herald
from .errors import WalkInputError
from .state import NAMED_COINS
from .timebin import DelayConfig

__all__ = ["RunConfig", "load_config", "parse_vector", "ResolvedCoin"]

WALKS = ("alternate", "grover")


def parse_vector(text: str) -> np.ndarray:
    """Parse ``"a,b[,c,d]"`` with Python complex literals (``0.5j``, ``1-1j``) and normalise it."""
    try:
        vec = np.array([complex(tok.strip().replace(" ", "")) for tok in text.split(",")])
    except ValueError:
        raise WalkInputError(f"cannot parse coin vector {text!r}") from None
    norm = np.linalg.norm(vec)
    if vec.size not in (2, 4) or norm == 0:
        raise WalkInputError("coin vector needs 2 or 4 components, not all zero")
    return vec / norm


@dataclass
class RunConfig:
    walk: str = "alternate"
    coin: str = "L"
    herald_projector: str | None = None
    werner_p: float | None = None
    steps: int = 4
    seed: int = 0
    photons: int = 1_000_000
    workers: int = 1
    gap_ns: float = 4.1
    out: str = "out"
    figures: bool = True
    delays: DelayConfig = field(default_factory=DelayConfig)

    def validate(self) -> "RunConfig":
        if self.walk not in WALKS:
            raise WalkInputError(f"walk must be one of {WALKS}, got {self.walk!r}")
        if self.steps < 0:
            raise WalkInputError("steps must be non-negative")
        if self.photons < 1:
            raise WalkInputError("photons must be positive")
        if self.werner_p is not None and not 0.0 <= self.werner_p <= 1.0:
            raise WalkInputError("werner_p must lie in [0, 1]")
        self.resolve_coin()
        return self

    def source(self) -> herald.TwoQubitDensity:
        if self.werner_p is None:
            return herald.bell_phi_plus()
        return herald.werner(self.werner_p)

    def kind(self):
        return engine.Alternate() if self.walk == "alternate" else engine.Grover()

    def resolve_coin(self) -> "ResolvedCoin":
        if self.herald_projector is not None:
            if self.walk != "alternate":
                raise WalkInputError("heralded coins drive the two-level alternate walk only")
            proj = _projector(self.herald_projector)
            herald.herald_coin(self.source(), proj)  # fails fast on impossible outcomes
            return ResolvedCoin("herald", projector=proj)
        label = self.coin.strip()
        if label.lower() == "mixed":
            if self.walk != "alternate":
                raise WalkInputError("mixed coins drive the two-level alternate walk only")
            return ResolvedCoin("mixed", ensemble=herald.reduced_coin(self.source()))
        if label.upper() in NAMED_COINS:
            if self.walk == "grover":
                raise WalkInputError("the Grover walk needs a four-component coin vector")
            return ResolvedCoin("pure", vector=np.array(NAMED_COINS[label.upper()], dtype=complex))
        vec = parse_vector(label)
        if vec.size != self.kind().coin_dim:
            raise WalkInputError(f"{self.walk} walk needs a {self.kind().coin_dim}-component coin")
        return ResolvedCoin("pure", vector=vec)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delays"] = self.delays.to_dict()
        return d


@dataclass
class ResolvedCoin:
    mode: str  # pure | mixed | herald
    vector: np.ndarray | None = None
    ensemble: tuple = ()
    projector: np.ndarray | None = None


def _projector(label: str) -> np.ndarray:
    if label.upper() in NAMED_COINS:
        return np.array(NAMED_COINS[label.upper()], dtype=complex)
    vec = parse_vector(label)
    if vec.size != 2:
        raise WalkInputError("the herald projector is a two-component polarisation state")
    return vec


def load_config(path) -> RunConfig:
    """Read a JSON run configuration; unknown keys are rejected."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise WalkInputError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise WalkInputError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise WalkInputError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise WalkInputError(f"unknown config keys: {sorted(unknown)}")
    delays = DelayConfig.from_dict(data.pop("delays", {}))
    try:
        return RunConfig(delays=delays, **data)
    except TypeError as exc:
        raise WalkInputError(str(exc)) from None
