"""Unitary evolution under a constant Hamiltonian.

The Hamiltonian is diagonalized once; every time point is then evaluated
directly from the cached spectrum instead of by stepping, so errors do not
accumulate along the grid.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .entanglement import concurrence
from .linalg import HermEigDecomp, as_matrix, herm_eig, partial_trace
from .register import DEFAULT_REGISTER, SpinRegister


class TimeGridError(ValueError):
    pass


class Evolver:
    """Propagates states under a fixed Hermitian ``h``; immutable after construction."""

    def __init__(self, h, register: SpinRegister = DEFAULT_REGISTER):
        h = as_matrix(h)
        if h.shape[0] != register.dim:
            raise ValueError(f"Hamiltonian dim {h.shape[0]} does not match register dim {register.dim}")
        self.register = register
        self.hamiltonian = h
        self.decomp: HermEigDecomp = herm_eig(h)
        self._v = self.decomp.eigenvectors
        self._e = self.decomp.eigenvalues
        with np.errstate(over="ignore", invalid="ignore"):
            self._gaps = self._e[:, None] - self._e[None, :]
        if not np.all(np.isfinite(self._gaps)):
            raise OverflowError("energy gaps overflow double precision; rescale the Hamiltonian")

    @property
    def dim(self) -> int:
        return self.register.dim

    def propagator(self, t: float) -> np.ndarray:
        """``exp(-i H t)``."""
        if not np.isfinite(t):
            raise TimeGridError(f"time must be finite, got {t}")
        return self.decomp.apply(lambda e: np.exp(-1j * e * t))

    def to_eigenbasis(self, rho) -> np.ndarray:
        return self._v.conj().T @ rho @ self._v

    def from_eigenbasis(self, rho_eig) -> np.ndarray:
        return self._v @ rho_eig @ self._v.conj().T

    def evolve_eigenbasis(self, rho_eig: np.ndarray, t: float) -> np.ndarray:
        """``U rho U^dagger`` for a state already in the energy eigenbasis."""
        return rho_eig * np.exp(-1j * self._gaps * t)

    def evolve(self, rho0, t: float) -> np.ndarray:
        """``exp(-iHt) rho0 exp(iHt)``."""
        if not np.isfinite(t):
            raise TimeGridError(f"time must be finite, got {t}")
        rho0 = as_matrix(rho0)
        if t == 0:
            return rho0.copy()
        return self.from_eigenbasis(self.evolve_eigenbasis(self.to_eigenbasis(rho0), t))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    reduced_states: np.ndarray  # (n_times, 4, 4)
    concurrences: np.ndarray
    purities: np.ndarray  # Tr(rho_s^2)
    trace_errors: np.ndarray  # |Tr(rho_s) - 1|
    full_states: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.times)


def check_time_grid(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise TimeGridError("time grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(t)):
        raise TimeGridError("time grid has non-finite entries")
    if np.any(np.diff(t) <= 0):
        raise TimeGridError("time grid must be strictly ascending")
    return t


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """``0, dt, 2dt, ...`` up to ``t_max`` inclusive (when it lands on the grid)."""
    if not (dt > 0 and t_max > 0):
        raise TimeGridError("t_max and dt must be > 0")
    n = int(np.floor(t_max / dt + 1e-9))
    return dt * np.arange(n + 1)


def run_trajectory(
    e: Evolver,
    rho0,
    times: Sequence[float],
    keep: Optional[Sequence[int]] = None,
    workers: int = 1,
    keep_full: bool = False,
) -> Trajectory:
    """Evolve ``rho0`` over ``times`` and reduce onto the system spins.

    Grid points are independent, so ``workers > 1`` evaluates them on a
    thread pool; results are identical to the sequential run.
    """
    t = check_time_grid(times)
    keep = e.register.system_sites if keep is None else tuple(keep)
    rho0 = as_matrix(rho0)
    rho0_eig = e.to_eigenbasis(rho0)

    def point(tk: float):
        full = rho0.copy() if tk == 0 else e.from_eigenbasis(e.evolve_eigenbasis(rho0_eig, tk))
        red = partial_trace(full, e.register, keep)
        return full, red

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, t))
    else:
        results = [point(tk) for tk in t]

    reduced = np.array([r for _, r in results])
    conc = np.array([concurrence(r).value for r in reduced])
    purity = np.einsum("nij,nji->n", reduced, reduced).real
    trace_err = np.abs(np.einsum("nii->n", reduced) - 1)
    full = np.array([f for f, _ in results]) if keep_full else None
    return Trajectory(t, reduced, conc, purity, trace_err, full)
