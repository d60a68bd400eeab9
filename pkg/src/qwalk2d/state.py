"""Walker states on integer lattices.

A state is a sparse collection of lattice sites, each carrying a small complex
amplitude array. For a plain walker that array is the coin vector (length 2 or
4). For a walker entangled with an ancilla qubit it has shape ``(2, coin_dim)``,
indexed ``[ancilla, coin]``.

Internally sites are kept as a sorted ``(M, ndim)`` integer array next to an
``(M, ...)`` amplitude array, so coin and shift operations vectorise over all
occupied sites at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import WalkInputError

__all__ = [
    "NAMED_COINS",
    "PRUNE_THRESHOLD",
    "WalkState",
    "JointState",
    "named_coin",
    "as_coin",
    "localized_state",
    "joint_localized_state",
    "total_norm",
]

# Sites whose largest amplitude magnitude falls below this are dropped.
PRUNE_THRESHOLD = 1e-15
NORM_TOL = 1e-12

_S = 1.0 / np.sqrt(2.0)

# |0> = |H>, |1> = |V>
NAMED_COINS: dict[str, tuple[complex, complex]] = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "D": (_S, _S),
    "A": (_S, -_S),
    "L": (_S, 1j * _S),
    "R": (_S, -1j * _S),
}


def named_coin(label: str) -> np.ndarray:
    """Return the polarisation coin state for one of ``H, V, D, A, L, R``."""
    try:
        vec = NAMED_COINS[label.upper()]
    except (KeyError, AttributeError):
        raise WalkInputError(
            f"unknown coin label {label!r}; expected one of {', '.join(NAMED_COINS)}"
        ) from None
    return np.array(vec, dtype=np.complex128)


def as_coin(coin, dim: int | None = None) -> np.ndarray:
    """Coerce a label or sequence into a unit-norm complex coin vector.

    Raises
    ------
    WalkInputError
        If the vector is not 1-D, has the wrong dimension, or is not normalised
        to within 1e-12.
    """
    if isinstance(coin, str):
        vec = named_coin(coin)
    else:
        vec = np.asarray(coin, dtype=np.complex128)
    if vec.ndim != 1 or vec.size not in (2, 4):
        raise WalkInputError(f"coin must be a vector of length 2 or 4, got shape {vec.shape}")
    if dim is not None and vec.size != dim:
        raise WalkInputError(f"expected a {dim}-dimensional coin, got {vec.size}")
    norm = float(np.vdot(vec, vec).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise WalkInputError(f"coin is not normalised (|c|^2 = {norm!r})")
    return vec


def _merge(sites: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum amplitudes that land on the same site and drop negligible sites."""
    if sites.shape[0] == 0:
        return sites, amps
    uniq, inverse = np.unique(sites, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    out = np.zeros((uniq.shape[0],) + amps.shape[1:], dtype=np.complex128)
    np.add.at(out, inverse, amps)
    flat = np.abs(out.reshape(out.shape[0], -1))
    keep = flat.max(axis=1) >= PRUNE_THRESHOLD
    return uniq[keep], out[keep]


@dataclass(frozen=True, eq=False)
class WalkState:
    """Walker state with a coin vector attached to every occupied site.

    Construct through :func:`localized_state` or :meth:`from_mapping`; the
    coin and shift operations in :mod:`qwalk2d.operators` return new states.
    """

    sites: np.ndarray
    amps: np.ndarray
    step_count: int = 0
    _local_shape: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        sites = np.asarray(self.sites, dtype=np.int64)
        amps = np.asarray(self.amps, dtype=np.complex128)
        if sites.ndim != 2:
            raise WalkInputError("sites must be an (M, ndim) integer array")
        if amps.shape[0] != sites.shape[0]:
            raise WalkInputError("one amplitude block per site is required")
        local = amps.shape[1:]
        if local[-1:] not in ((2,), (4,)):
            raise WalkInputError(f"coin dimension must be 2 or 4, got {local}")
        self._check_local(local)
        sites, amps = _merge(sites, amps)
        sites.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "_local_shape", local)

    def _check_local(self, local):
        if len(local) != 1:
            raise WalkInputError("WalkState carries one coin vector per site")

    @classmethod
    def from_mapping(cls, amplitudes: Mapping[Sequence[int], Sequence[complex]], step_count=0):
        if not amplitudes:
            raise WalkInputError("use WalkState.empty() for a state with no sites")
        keys = [tuple(int(v) for v in k) for k in amplitudes]
        sites = np.array(keys, dtype=np.int64)
        amps = np.array([np.asarray(v, dtype=np.complex128) for v in amplitudes.values()])
        return cls(sites, amps, step_count)

    @classmethod
    def empty(cls, coin_dim: int = 2, ndim: int = 2):
        return cls(np.zeros((0, ndim), np.int64), np.zeros((0, coin_dim), np.complex128))

    @property
    def coin_dim(self) -> int:
        return self._local_shape[-1]

    @property
    def ndim(self) -> int:
        return self.sites.shape[1]

    def __len__(self):
        return self.sites.shape[0]

    @property
    def amplitudes(self) -> dict[tuple[int, ...], np.ndarray]:
        """Sparse ``site -> amplitude array`` view."""
        return {tuple(int(v) for v in s): a for s, a in zip(self.sites, self.amps)}

    def amplitude(self, site: Sequence[int]) -> np.ndarray:
        site = np.asarray(site, dtype=np.int64)
        hit = np.flatnonzero((self.sites == site).all(axis=1))
        if hit.size:
            return self.amps[hit[0]]
        return np.zeros(self._local_shape, dtype=np.complex128)

    def site_probabilities(self) -> np.ndarray:
        """Squared norm of each site's amplitude block, aligned with ``sites``."""
        local_axes = tuple(range(1, self.amps.ndim))
        return (np.abs(self.amps) ** 2).sum(axis=local_axes)

    def replace(self, sites=None, amps=None, step_count=None):
        return type(self)(
            self.sites if sites is None else sites,
            self.amps if amps is None else amps,
            self.step_count if step_count is None else step_count,
        )


class JointState(WalkState):
    """Walker entangled with an ancilla qubit.

    Each site holds a ``(2, coin_dim)`` block indexed ``[ancilla, coin]``;
    :meth:`vector` flattens it in (ancilla ⊗ coin) order.
    """

    def _check_local(self, local):
        if len(local) != 2 or local[0] != 2:
            raise WalkInputError("JointState carries a (2, coin_dim) block per site")

    @classmethod
    def empty(cls, coin_dim: int = 2, ndim: int = 2):
        return cls(np.zeros((0, ndim), np.int64), np.zeros((0, 2, coin_dim), np.complex128))

    def vector(self, site: Sequence[int]) -> np.ndarray:
        return self.amplitude(site).reshape(-1)

    def project_ancilla(self, ancilla: np.ndarray) -> WalkState:
        """Apply ``<ancilla| ⊗ I`` at every site, leaving an unnormalised walker."""
        bra = np.conj(np.asarray(ancilla, dtype=np.complex128))
        amps = np.einsum("a,mac->mc", bra, self.amps)
        if self.sites.shape[0] == 0:
            return WalkState.empty(self.coin_dim, self.ndim)
        return WalkState(self.sites, amps, self.step_count)


def _origin(origin, ndim):
    if origin is None:
        return np.zeros((1, ndim), dtype=np.int64)
    return np.asarray(origin, dtype=np.int64).reshape(1, -1)


def localized_state(coin, origin: Sequence[int] | None = None, ndim: int = 2) -> WalkState:
    """Point-mass walker at ``origin`` (default: the lattice origin) with the given coin."""
    vec = as_coin(coin)
    return WalkState(_origin(origin, ndim), vec[None, :], 0)


def joint_localized_state(two_qubit, origin: Sequence[int] | None = None, ndim: int = 2) -> JointState:
    """Walker at ``origin`` whose coin is entangled with an ancilla.

    ``two_qubit`` is a length-4 vector in (ancilla, coin) order, e.g. |Φ⁺⟩.
    """
    vec = np.asarray(two_qubit, dtype=np.complex128)
    if vec.shape != (4,):
        raise WalkInputError(f"two-qubit state must have 4 amplitudes, got shape {vec.shape}")
    norm = float(np.vdot(vec, vec).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise WalkInputError(f"two-qubit state is not normalised (|v|^2 = {norm!r})")
    return JointState(_origin(origin, ndim), vec.reshape(1, 2, 2), 0)


def total_norm(state: WalkState) -> float:
    """Sum of squared amplitude magnitudes over all sites."""
    return float(np.sum(np.abs(state.amps) ** 2))
