"""Walk composition: alternate-direction walks, the four-coin Grover walk,
ancilla-entangled walks and convex mixtures of pure-coin walks.

One step ``n`` of the alternate walk is a full pass over every axis, with the
coin applied before each axis shift. For the default 2-D walk that is
``S_y · C · S_x · C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import WalkInputError
from .metrics import Distribution, distribution
from .operators import GROVER, X, Y, Shift, apply_coin, apply_shift, check_unitary, grover_coin, hadamard
from .state import JointState, WalkState, as_coin, joint_localized_state, localized_state

__all__ = [
    "Alternate",
    "Grover",
    "NONLOCALIZED_GROVER_COIN",
    "alternate_step",
    "grover_step",
    "step",
    "run",
    "run_joint",
    "run_joint_history",
    "heralded_distribution",
    "marginal_distribution",
    "run_mixture",
]

# The one initial coin for which the Grover walk does not localise.
NONLOCALIZED_GROVER_COIN = np.array([0.5, -0.5, -0.5, 0.5], dtype=np.complex128)

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Alternate:
    """Two-level coin walk shifting along each axis of ``axes`` in turn."""

    coin: np.ndarray = field(default_factory=hadamard)
    axes: tuple[Shift, ...] = (X, Y)

    def __post_init__(self):
        object.__setattr__(self, "coin", check_unitary(self.coin))
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.coin.shape != (2, 2):
            raise WalkInputError("alternate walks need a 2x2 coin")
        if not self.axes:
            raise WalkInputError("alternate walk needs at least one axis")
        if any(ax.coin_dim != 2 for ax in self.axes):
            raise WalkInputError("alternate walk axes must be two-way shifts")
        if len({ax.ndim for ax in self.axes}) != 1:
            raise WalkInputError("all axes must live on the same lattice")

    @property
    def coin_dim(self) -> int:
        return 2

    @property
    def ndim(self) -> int:
        return self.axes[0].ndim


@dataclass(frozen=True)
class Grover:
    """Four-level coin walk with the diagonal conditional shift."""

    coin: np.ndarray = field(default_factory=grover_coin)

    def __post_init__(self):
        object.__setattr__(self, "coin", check_unitary(self.coin))
        if self.coin.shape != (4, 4):
            raise WalkInputError("the Grover walk needs a 4x4 coin")

    @property
    def coin_dim(self) -> int:
        return 4

    @property
    def ndim(self) -> int:
        return 2


def alternate_step(state: WalkState, coin=None, axes: Sequence[Shift] = (X, Y)) -> WalkState:
    coin = hadamard() if coin is None else coin
    if state.coin_dim != 2:
        raise WalkInputError("alternate_step needs a two-dimensional coin")
    for ax in axes:
        state = apply_shift(apply_coin(state, coin), ax)
    return state.replace(step_count=state.step_count + 1)


def grover_step(state: WalkState, coin=None) -> WalkState:
    coin = grover_coin() if coin is None else coin
    if state.coin_dim != 4:
        raise WalkInputError("grover_step needs a four-dimensional coin")
    state = apply_shift(apply_coin(state, coin), GROVER)
    return state.replace(step_count=state.step_count + 1)


def step(state: WalkState, kind) -> WalkState:
    if isinstance(kind, Alternate):
        return alternate_step(state, kind.coin, kind.axes)
    if isinstance(kind, Grover):
        return grover_step(state, kind.coin)
    raise WalkInputError(f"unknown walk kind {kind!r}")


def _initial(kind, initial_coin, origin):
    if isinstance(initial_coin, WalkState):
        return initial_coin
    coin = as_coin(initial_coin, kind.coin_dim)
    return localized_state(coin, origin, ndim=kind.ndim)


def run(kind, initial_coin, n: int, origin=None) -> tuple[WalkState, list[Distribution]]:
    """Evolve ``n`` steps and record the site distribution after every step.

    Returns the final state and ``[P_0, P_1, ..., P_n]``.
    """
    if n < 0:
        raise WalkInputError("number of steps must be non-negative")
    state = _initial(kind, initial_coin, origin)
    history = [distribution(state)]
    for _ in range(n):
        state = step(state, kind)
        history.append(distribution(state))
    return state, history


def _source_components(source) -> list[tuple[float, np.ndarray]]:
    """Pure (weight, vector) components of a two-qubit source."""
    arr = np.asarray(getattr(source, "rho", source), dtype=np.complex128)
    if arr.shape == (4,):
        return [(1.0, arr)]
    if arr.shape != (4, 4):
        raise WalkInputError(f"two-qubit source must be a 4-vector or 4x4 matrix, got {arr.shape}")
    w, v = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    return [(float(wk), v[:, k]) for k, wk in enumerate(w) if wk > WEIGHT_TOL]


def run_joint_history(source, n: int, kind: Alternate | None = None):
    """Joint walks of every pure component of ``source``, one state per step.

    Returns a list of ``(weight, [J_0, ..., J_n])``. The walk unitary acts on
    coin and position only; the ancilla is untouched.
    """
    kind = Alternate() if kind is None else kind
    if not isinstance(kind, Alternate):
        raise WalkInputError("joint walks use a two-level coin (Alternate kind)")
    out = []
    for weight, vec in _source_components(source):
        state = joint_localized_state(vec, ndim=kind.ndim)
        states = [state]
        for _ in range(n):
            state = alternate_step(state, kind.coin, kind.axes)
            states.append(state)
        out.append((weight, states))
    return out


def run_joint(source, n: int, kind: Alternate | None = None):
    """Walk with the coin entangled to an ancilla.

    A pure two-qubit vector gives a single :class:`JointState`; a density
    matrix gives its eigen-ensemble as a list of ``(weight, JointState)``.
    """
    comps = [(w, states[-1]) for w, states in run_joint_history(source, n, kind)]
    if np.asarray(getattr(source, "rho", source)).shape == (4,):
        return comps[0][1]
    return comps


def heralded_distribution(joint, ancilla_projector) -> tuple[float, Distribution]:
    """Project the ancilla after the walk and return (probability, conditional distribution).

    ``joint`` is a :class:`JointState` or a list of ``(weight, JointState)``.
    """
    proj = as_coin(ancilla_projector, 2)
    comps = [(1.0, joint)] if isinstance(joint, JointState) else list(joint)
    probs: dict = {}
    total = 0.0
    step_count = comps[0][1].step_count
    for weight, js in comps:
        walker = js.project_ancilla(proj)
        for site, p in distribution(walker).probs.items():
            probs[site] = probs.get(site, 0.0) + weight * p
            total += weight * p
    if total <= 0.0:
        raise WalkInputError("ancilla outcome has zero probability")
    return total, Distribution(step_count, {k: v / total for k, v in probs.items()})


def marginal_distribution(joint) -> Distribution:
    """Walker distribution with the ancilla traced out."""
    comps = [(1.0, joint)] if isinstance(joint, JointState) else list(joint)
    probs: dict = {}
    for weight, js in comps:
        for site, p in distribution(js).probs.items():
            probs[site] = probs.get(site, 0.0) + weight * p
    return Distribution(comps[0][1].step_count, probs)


def run_mixture(ensemble, n: int, kind=None) -> list[Distribution]:
    """Per-step distributions of a walk whose initial coin is a weighted ensemble.

    Measurement is terminal and evolution unitary, so the result is the
    weighted sum of the pure-coin distributions.
    """
    kind = Alternate() if kind is None else kind
    ensemble = list(ensemble)
    weights = np.array([w for w, _ in ensemble], dtype=float)
    if not ensemble or np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOL:
        raise WalkInputError("ensemble weights must be non-negative and sum to 1")
    acc: list[dict] = [dict() for _ in range(n + 1)]
    for w, coin in ensemble:
        if w == 0:
            continue
        _, hist = run(kind, coin, n)
        for k, d in enumerate(hist):
            for site, p in d.probs.items():
                acc[k][site] = acc[k].get(site, 0.0) + w * p
    return [Distribution(k, probs) for k, probs in enumerate(acc)]
