"""Initial states: a pure two-spin system state times thermal bath states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import as_matrix, density_matrix_errors, herm_eig, kron_all

BELL = "bell"
PARTIAL = "partial"
PARTIAL_PERTURBED = "partial-perturbed"
CUSTOM = "custom"
STATE_KINDS = (BELL, PARTIAL, PARTIAL_PERTURBED, CUSTOM)

# sqrt(3)/2 e^{-i pi/8}|00> + 1/2 e^{i pi/8}|11>
PARTIAL_ALPHA = math.pi / 3
PARTIAL_DELTA = math.pi / 4


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class SystemStateSpec:
    """Two-spin pure state.

    ``bell`` and ``partial`` are the family
    ``e^{-i delta/2} cos(alpha/2)|00> + e^{i delta/2} sin(alpha/2)|11>`` at
    fixed angles; ``partial-perturbed`` adds ``epsilon |01>`` to the partial
    state. ``alpha``/``delta`` are only read for ``custom`` when no
    amplitudes are given. Amplitudes are in basis order 00, 01, 10, 11.
    """

    kind: str = BELL
    alpha: float = math.pi / 2
    delta: float = 0.0
    epsilon: float = 0.1
    custom_amplitudes: Optional[tuple[complex, ...]] = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise StateError(f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}")
        for name in ("alpha", "delta", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise StateError(f"{name} must be finite")
        if self.custom_amplitudes is not None:
            amps = tuple(complex(a) for a in self.custom_amplitudes)
            if len(amps) != 4:
                raise StateError("custom_amplitudes needs exactly 4 entries")
            object.__setattr__(self, "custom_amplitudes", amps)


def angle_state(alpha: float, delta: float) -> np.ndarray:
    psi = np.zeros(4, dtype=complex)
    psi[0] = np.exp(-0.5j * delta) * np.cos(alpha / 2)
    psi[3] = np.exp(0.5j * delta) * np.sin(alpha / 2)
    return psi


def system_vector(spec: SystemStateSpec) -> np.ndarray:
    """Normalized state vector for ``spec``."""
    if spec.kind == BELL:
        psi = angle_state(math.pi / 2, 0.0)
    elif spec.kind == PARTIAL:
        psi = angle_state(PARTIAL_ALPHA, PARTIAL_DELTA)
    elif spec.kind == PARTIAL_PERTURBED:
        psi = angle_state(PARTIAL_ALPHA, PARTIAL_DELTA)
        psi[1] += spec.epsilon
    elif spec.custom_amplitudes is not None:
        psi = np.array(spec.custom_amplitudes, dtype=complex)
    else:
        psi = angle_state(spec.alpha, spec.delta)
    norm = np.linalg.norm(psi)
    if not norm > 0:
        raise StateError("state vector has zero norm")
    return psi / norm


def make_system_state(spec: SystemStateSpec) -> np.ndarray:
    psi = system_vector(spec)
    return np.outer(psi, psi.conj())


def gibbs_weights(energies, temperature: float) -> np.ndarray:
    """Normalized Boltzmann populations for the given energy levels.

    Energies are shifted by their minimum so the largest factor is exactly 1
    and nothing overflows at low temperature. Factors that underflow are
    floored at the smallest normal double, keeping every population > 0.
    """
    if not temperature > 0 or not math.isfinite(temperature):
        raise StateError(f"temperature must be finite and > 0, got {temperature}")
    e = np.asarray(energies, dtype=float)
    with np.errstate(over="ignore"):
        # an overflowing exponent is an exact-zero weight, floored below
        w = np.exp(-(e - e.min()) / temperature)
    w = np.maximum(w, np.finfo(float).tiny)
    return w / w.sum()


def thermal_state(h, temperature: float) -> np.ndarray:
    """Gibbs state ``exp(-h/T) / Tr exp(-h/T)``."""
    if not temperature > 0 or not math.isfinite(temperature):
        raise StateError(f"temperature must be finite and > 0, got {temperature}")
    d = herm_eig(h)
    weights = gibbs_weights(d.eigenvalues, temperature)
    rho = d.apply(lambda _: weights)
    return (rho + rho.conj().T) / 2


def check_density(rho, name: str = "rho", tol: float = 1e-12) -> np.ndarray:
    rho = as_matrix(rho)
    problems = density_matrix_errors(rho, herm_tol=tol, eig_tol=tol, trace_tol=tol)
    if problems:
        raise StateError(f"{name} is not a density matrix: " + "; ".join(problems))
    return rho


def assemble_initial(rho_s, rho_b1, rho_b2) -> np.ndarray:
    """Product state in register order (system, bath 1, bath 2)."""
    factors = []
    for name, rho in zip(("system", "bath1", "bath2"), (rho_s, rho_b1, rho_b2)):
        rho = check_density(rho, name)
        if name == "system" and rho.shape[0] != 4:
            raise StateError(f"system factor has dim {rho.shape[0]}, expected 4")
        factors.append(rho)
    return kron_all(factors)
