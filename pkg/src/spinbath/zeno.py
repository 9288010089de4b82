"""Repeated selective projective measurements onto the initial state.

The measured quantity is the probability that every one of N measurements,
spaced ``interval`` apart, finds the system back in its initial state. The
projector acts on the system spins only (``system-reduced``) or on the
whole register (``full-state``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import Evolver
from .linalg import as_matrix, frob, herm_eig, is_hermitian, kron, partial_trace

SYSTEM_REDUCED = "system-reduced"
FULL_STATE = "full-state"
SCOPES = (SYSTEM_REDUCED, FULL_STATE)

EXTINCTION_THRESHOLD = 1e-14


class ZenoError(ValueError):
    pass


class ExtinctionError(ZenoError):
    """The measured outcome has numerically zero probability."""

    def __init__(self, probability: float):
        super().__init__(f"survival probability {probability:.3e} below {EXTINCTION_THRESHOLD}")
        self.probability = probability


@dataclass(frozen=True)
class ZenoSchedule:
    n_measurements: int
    interval: float
    projector_scope: str = SYSTEM_REDUCED

    def __post_init__(self):
        if int(self.n_measurements) != self.n_measurements or self.n_measurements < 1:
            raise ZenoError(f"n_measurements must be a positive integer, got {self.n_measurements}")
        if not (math.isfinite(self.interval) and self.interval >= 0):
            raise ZenoError(f"interval must be finite and >= 0, got {self.interval}")
        if self.projector_scope not in SCOPES:
            raise ZenoError(f"projector_scope must be one of {SCOPES}")

    @classmethod
    def fixed_total(cls, total_time: float, n: int, scope: str = SYSTEM_REDUCED) -> "ZenoSchedule":
        """``n`` measurements evenly splitting ``total_time``."""
        return cls(n, total_time / n, scope)

    @property
    def total_time(self) -> float:
        return self.n_measurements * self.interval


@dataclass(frozen=True)
class ZenoResult:
    times: np.ndarray  # measurement times k * interval, k = 1..N
    step_probabilities: np.ndarray
    survival_probabilities: np.ndarray  # cumulative products of step probabilities
    amplitude_product: np.ndarray  # |prod_{k<=m} <Psi0|U(t_k)|Psi0>|^2 for the purified state
    trace_diagnostic: np.ndarray  # |Tr(U(t_k) rho_{m-1})|^2, rho_{m-1} the pre-step state
    extinct_at: Optional[int] = None  # 0-based step where extinction happened
    post_measurement_states: Optional[np.ndarray] = None


def dominant_vector(rho) -> np.ndarray:
    """Eigenvector of the largest eigenvalue of a density matrix."""
    return herm_eig(rho).eigenvectors[:, -1]


def pure_projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def system_projector(psi0, bath_dim: int) -> np.ndarray:
    """``|psi0><psi0| (x) I_bath``; the system occupies the leading factors."""
    return kron(pure_projector(psi0), np.eye(bath_dim, dtype=complex))


def projective_channel(rho_full, projector) -> tuple[np.ndarray, float]:
    """Selective measurement: ``(P rho P / p, p)`` with ``p = Tr(P rho P)``.

    Raises :class:`ExtinctionError` when ``p`` falls below the extinction
    threshold.
    """
    rho = as_matrix(rho_full)
    p_op = as_matrix(projector)
    if not is_hermitian(p_op) or frob(p_op @ p_op - p_op) > 1e-10 * max(frob(p_op), 1.0):
        raise ZenoError("projector must be Hermitian and idempotent")
    out = p_op @ rho @ p_op
    prob = float(np.trace(out).real)
    if prob < EXTINCTION_THRESHOLD:
        raise ExtinctionError(prob)
    out = out / prob
    return (out + out.conj().T) / 2, min(prob, 1.0)


def purified_initial(rho0_full) -> np.ndarray:
    """Pure full-register state closest to ``rho0_full`` (its dominant eigenvector).

    For a product of a pure system state with nearly pure low-temperature
    Gibbs states this is the system state times the bath ground states.
    """
    return dominant_vector(rho0_full)


def _amplitude_products(psi_full: np.ndarray, e: Evolver, schedule: ZenoSchedule) -> np.ndarray:
    amp = complex(psi_full.conj() @ e.propagator(schedule.interval) @ psi_full)
    m = np.arange(1, schedule.n_measurements + 1)
    return np.abs(amp) ** (2 * m)


def survival_amplitude_product(
    psi0,
    e: Evolver,
    schedule: ZenoSchedule,
    bath_rho=None,
) -> float:
    """``|prod_k <Psi0|U(t_k)|Psi0>|^2`` over the N measurement intervals.

    ``psi0`` is either a full-register vector, or a system vector together
    with ``bath_rho``, whose dominant eigenvector completes it.
    """
    psi = np.asarray(psi0, dtype=complex)
    if bath_rho is not None:
        psi = np.kron(psi, dominant_vector(bath_rho))
    if psi.shape != (e.dim,):
        raise ZenoError(f"state vector has length {psi.shape}, expected {e.dim}")
    psi = psi / np.linalg.norm(psi)
    return float(_amplitude_products(psi, e, schedule)[-1])


def build_projector(rho0_full, e: Evolver, scope: str) -> np.ndarray:
    rho0 = as_matrix(rho0_full)
    if scope == FULL_STATE:
        return pure_projector(purified_initial(rho0))
    system = e.register.system_sites
    rho_s = partial_trace(rho0, e.register, system)
    return system_projector(dominant_vector(rho_s), e.dim // rho_s.shape[0])


def run_zeno(
    rho0_full,
    e: Evolver,
    schedule: ZenoSchedule,
    projector=None,
    keep_states: bool = False,
) -> ZenoResult:
    """Alternate free evolution over one interval with a selective measurement.

    The projector defaults to the initial system state (or, for the
    ``full-state`` scope, the purified initial register state). After
    extinction the remaining probabilities are 0.
    """
    rho = as_matrix(rho0_full)
    p_op = build_projector(rho, e, schedule.projector_scope) if projector is None else as_matrix(projector)
    n = schedule.n_measurements
    u = e.propagator(schedule.interval)
    u_dag = u.conj().T

    steps = np.zeros(n)
    trace_diag = np.zeros(n)
    states = [] if keep_states else None
    extinct_at = None
    for k in range(n):
        trace_diag[k] = abs(np.trace(u @ rho)) ** 2
        try:
            rho, steps[k] = projective_channel(u @ rho @ u_dag, p_op)
        except ExtinctionError:
            extinct_at = k
            break
        if keep_states:
            states.append(rho)

    survival = np.cumprod(steps)
    times = schedule.interval * np.arange(1, n + 1)
    amp = _amplitude_products(purified_initial(as_matrix(rho0_full)), e, schedule)
    return ZenoResult(
        times,
        steps,
        survival,
        amp,
        trace_diag,
        extinct_at,
        np.array(states) if keep_states and states else None,
    )
