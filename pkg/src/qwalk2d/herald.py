"""Two-qubit polarisation sources and delayed-choice heralding.

Two-qubit matrices use the basis order |HH⟩, |HV⟩, |VH⟩, |VV⟩ with Alice's
(ancilla) qubit first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleOutcomeError, WalkInputError
from .state import as_coin

__all__ = [
    "TwoQubitDensity",
    "HeraldOutcome",
    "PHI_PLUS",
    "bell_phi_plus",
    "werner",
    "werner_for_fidelity",
    "product_state",
    "herald_coin",
    "conditional_coin_density",
    "reduced_coin",
    "ensemble_density",
    "concurrence",
    "fidelity",
]

PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)

_HERM_TOL = 1e-12
_PSD_TOL = 1e-10
_IMPOSSIBLE = 1e-15
_EIG_DROP = 1e-12


@dataclass(frozen=True, eq=False)
class TwoQubitDensity:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise WalkInputError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > _HERM_TOL:
            raise WalkInputError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > _HERM_TOL:
            raise WalkInputError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
        if np.linalg.eigvalsh(rho).min() < -_PSD_TOL:
            raise WalkInputError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_vector(cls, psi) -> "TwoQubitDensity":
        psi = np.asarray(psi, dtype=np.complex128).reshape(4)
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class HeraldOutcome:
    """Probability of Alice's outcome and Bob's conditional coin as a pure ensemble."""

    probability: float
    coin: tuple[tuple[float, np.ndarray], ...]


def bell_phi_plus() -> TwoQubitDensity:
    return TwoQubitDensity.from_vector(PHI_PLUS)


def werner(p: float) -> TwoQubitDensity:
    """``p |Φ⁺⟩⟨Φ⁺| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise WalkInputError(f"Werner parameter must lie in [0, 1], got {p}")
    return TwoQubitDensity(p * bell_phi_plus().rho + (1.0 - p) * np.eye(4) / 4.0)


def werner_for_fidelity(f: float) -> float:
    """Werner parameter whose fidelity with |Φ⁺⟩ equals ``f``; inverts F = (3p + 1)/4."""
    return (4.0 * f - 1.0) / 3.0


def product_state(alice, bob) -> TwoQubitDensity:
    return TwoQubitDensity.from_vector(np.kron(as_coin(alice, 2), as_coin(bob, 2)))


def _rho(state) -> np.ndarray:
    arr = np.asarray(getattr(state, "rho", state), dtype=np.complex128)
    if arr.shape == (4,):
        return np.outer(arr, arr.conj())
    return arr


def _eigen_ensemble(sigma: np.ndarray) -> tuple[tuple[float, np.ndarray], ...]:
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    keep = [(float(wk), v[:, k].copy()) for k, wk in enumerate(w) if wk > _EIG_DROP]
    total = sum(wk for wk, _ in keep)
    ordered = sorted(keep, key=lambda item: -item[0])
    return tuple((wk / total, vk) for wk, vk in ordered)


def conditional_coin_density(rho, alice_proj) -> tuple[float, np.ndarray]:
    """Unnormalised ``<ψ|_A ρ |ψ>_A`` and its trace."""
    psi = as_coin(alice_proj, 2)
    r = _rho(rho).reshape(2, 2, 2, 2)  # [a, b, a', b']
    sigma = np.einsum("a,abcd,c->bd", psi.conj(), r, psi)
    return float(np.trace(sigma).real), sigma


def herald_coin(rho, alice_proj) -> HeraldOutcome:
    """Bob's coin conditioned on Alice projecting onto ``alice_proj``.

    Raises
    ------
    ImpossibleOutcomeError
        If the outcome probability is below 1e-15.
    """
    prob, sigma = conditional_coin_density(rho, alice_proj)
    if prob < _IMPOSSIBLE:
        raise ImpossibleOutcomeError(f"Alice outcome has probability {prob:.3g}")
    return HeraldOutcome(prob, _eigen_ensemble(sigma / prob))


def reduced_coin(rho) -> tuple[tuple[float, np.ndarray], ...]:
    """Bob's coin with Alice traced out, as an eigen-ensemble."""
    r = _rho(rho).reshape(2, 2, 2, 2)
    return _eigen_ensemble(np.einsum("abad->bd", r))


def ensemble_density(ensemble) -> np.ndarray:
    return sum(w * np.outer(v, np.conj(v)) for w, v in ensemble)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    # rounding noise on zero eigenvalues would otherwise surface as ~1e-8 after sqrt
    w = np.where(w > _EIG_DROP, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state."""
    r = _rho(rho)
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    r_tilde = yy @ r.conj() @ yy
    sr = _psd_sqrt(r)
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(sr @ r_tilde @ sr), 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(ρ) σ sqrt(ρ)))²``."""
    # Tr sqrt(sqrt(ρ) σ sqrt(ρ)) equals the trace norm of sqrt(ρ) sqrt(σ)
    m = _psd_sqrt(_rho(rho)) @ _psd_sqrt(_rho(sigma))
    root = float(np.sum(np.linalg.svd(m, compute_uv=False)))
    return min(max(root * root, 0.0), 1.0)
