"""Coin unitaries and coin-conditioned shift operators.

Coin index 0 always moves towards the smaller coordinate. For the two-level
coin that means |H⟩ (index 0) steps to ``x - 1`` and |V⟩ (index 1) to
``x + 1``; the time-bin model binds the longer delay lines L1/L3 to index 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WalkInputError
from .state import WalkState

__all__ = [
    "UNITARY_TOL",
    "Shift",
    "X",
    "Y",
    "GROVER",
    "axis_shift",
    "hadamard",
    "grover_coin",
    "check_unitary",
    "apply_coin",
    "apply_shift",
]

UNITARY_TOL = 1e-12


def check_unitary(matrix, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate a user-supplied coin and return it as a complex array.

    Raises
    ------
    WalkInputError
        If the matrix is not square 2x2 or 4x4, or ``max|U†U - I| > tol``.
    """
    u = np.asarray(matrix, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] not in (2, 4):
        raise WalkInputError(f"coin unitary must be 2x2 or 4x4, got shape {u.shape}")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > tol:
        raise WalkInputError(f"coin matrix is not unitary (max |U†U - I| = {err:.3g})")
    return u


def hadamard() -> np.ndarray:
    """Hadamard coin, (1/√2)[[1, 1], [1, -1]]."""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def grover_coin() -> np.ndarray:
    """Four-dimensional Grover diffusion coin, 2|s⟩⟨s| - I with |s⟩ uniform."""
    return 0.5 * np.ones((4, 4), dtype=np.complex128) - np.eye(4, dtype=np.complex128)


@dataclass(frozen=True)
class Shift:
    """Conditional translation: coin index ``c`` moves the walker by ``moves[c]``."""

    kind: str
    moves: tuple[tuple[int, ...], ...]

    @property
    def coin_dim(self) -> int:
        return len(self.moves)

    @property
    def ndim(self) -> int:
        return len(self.moves[0])

    def inverse(self) -> "Shift":
        return Shift(
            f"{self.kind}^-1", tuple(tuple(-d for d in mv) for mv in self.moves)
        )

    def displacements(self) -> np.ndarray:
        return np.array(self.moves, dtype=np.int64)


def axis_shift(axis: int, ndim: int = 2, name: str | None = None) -> Shift:
    """Two-way shift along one lattice axis (coin 0 -> -1, coin 1 -> +1)."""
    if not 0 <= axis < ndim:
        raise WalkInputError(f"axis {axis} out of range for a {ndim}-D lattice")
    minus = [0] * ndim
    plus = [0] * ndim
    minus[axis] = -1
    plus[axis] = 1
    if name is None:
        name = "XYZW"[axis] if axis < 4 else f"axis{axis}"
    return Shift(name, (tuple(minus), tuple(plus)))


X = axis_shift(0, 2, "X")
Y = axis_shift(1, 2, "Y")
GROVER = Shift("GROVER", ((-1, -1), (-1, 1), (1, -1), (1, 1)))


def apply_coin(state: WalkState, unitary) -> WalkState:
    """Apply ``unitary`` to the coin factor at every site.

    For a :class:`~qwalk2d.state.JointState` the ancilla factor is left alone.
    """
    u = np.asarray(unitary, dtype=np.complex128)
    if u.shape != (state.coin_dim, state.coin_dim):
        raise WalkInputError(
            f"coin of dimension {u.shape[0]} cannot act on a {state.coin_dim}-dimensional coin"
        )
    # amps[..., c] -> sum_d U[c, d] amps[..., d]
    return state.replace(amps=state.amps @ u.T)


def apply_shift(state: WalkState, shift: Shift) -> WalkState:
    if shift.coin_dim != state.coin_dim:
        raise WalkInputError(
            f"{shift.kind} shift needs a {shift.coin_dim}-dimensional coin, "
            f"state has {state.coin_dim}"
        )
    if len(state) and shift.ndim != state.ndim:
        raise WalkInputError(f"{shift.kind} shift is {shift.ndim}-D, state is {state.ndim}-D")
    disp = shift.displacements()
    m = len(state)
    # one copy of the state per coin index, keeping only that coin component
    sites = (state.sites[None, :, :] + disp[:, None, :]).reshape(-1, state.ndim)
    amps = np.zeros((shift.coin_dim,) + state.amps.shape, dtype=np.complex128)
    for c in range(shift.coin_dim):
        amps[c, ..., c] = state.amps[..., c]
    return state.replace(sites=sites, amps=amps.reshape((shift.coin_dim * m,) + state.amps.shape[1:]))
