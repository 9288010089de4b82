"""Wootters concurrence of two-qubit density matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SIGMA_Y, LinalgError, as_matrix, herm_eig

SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

# Eigenvalues of rho*rho_tilde below zero but above this are rounding noise.
NEGATIVE_EIG_TOL = 1e-10
# Eigenvalues of rho at or below this are treated as exact zeros.
RANK_FLOOR = 1e-13


class ConcurrenceError(LinalgError):
    pass


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    sqrt_eigenvalues: np.ndarray  # descending, nonnegative
    raw_eigenvalues: np.ndarray  # real parts of eig(rho @ rho_tilde), descending, unclamped

    def __float__(self) -> float:
        return self.value


def _two_qubit(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ConcurrenceError(f"expected a 4x4 two-qubit matrix, got {rho.shape}")
    return rho


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)``."""
    rho = _two_qubit(rho)
    return SIGMA_YY @ rho.conj() @ SIGMA_YY


def concurrence(rho) -> ConcurrenceResult:
    """Concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are the square roots of the eigenvalues of
    ``rho @ spin_flip(rho)``, in decreasing order. They are computed as the
    singular values of ``sqrt(rho) YY sqrt(rho)*``, whose Gram matrix
    ``sqrt(rho) rho_tilde sqrt(rho)`` has that spectrum; this avoids taking
    square roots of rounding noise, which would otherwise cost ~1e-8 on pure
    states.
    """
    rho = _two_qubit(rho)
    rho = (rho + rho.conj().T) / 2
    d = herm_eig(rho)
    if d.eigenvalues[0] < -NEGATIVE_EIG_TOL:
        raise ConcurrenceError(f"rho has eigenvalue {d.eigenvalues[0]:.3e}; not a valid state")
    w = np.where(d.eigenvalues > RANK_FLOOR, d.eigenvalues, 0.0)
    sqrt_rho = d.apply(lambda _: np.sqrt(w))
    s = np.linalg.svd(sqrt_rho @ SIGMA_YY @ sqrt_rho.conj(), compute_uv=False)

    lam = np.sort(np.linalg.eigvals(rho @ spin_flip(rho)).real)[::-1]
    if lam[-1] < -NEGATIVE_EIG_TOL:
        raise ConcurrenceError(f"rho*rho_tilde has eigenvalue {lam[-1]:.3e}; not a valid state")
    value = max(0.0, float(s[0] - s[1] - s[2] - s[3]))
    return ConcurrenceResult(value, s, lam)
