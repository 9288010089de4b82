"""Dense complex linear algebra for small spin registers.

Matrices are plain ``numpy`` complex128 arrays. Functions here never modify
their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .register import RegisterError, SpinRegister

# Largest matrix dimension any product may produce (12 qubits).
MAX_DIM = 2**12

HERMITIAN_RTOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class LinalgError(ValueError):
    """Bad dimensions, non-finite entries or a failed decomposition."""


class NotHermitianError(LinalgError):
    pass


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite square matrix and return it as complex128."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise LinalgError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return m


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def hermiticity_residual(a: np.ndarray) -> float:
    """Frobenius norm of ``a - a^dagger``."""
    return frob(a - a.conj().T)


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    return hermiticity_residual(a) <= rtol * frob(a)


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise LinalgError(f"kron result dimension {dim} exceeds cap {max_dim}")
    return np.kron(a, b)


def kron_all(factors: Iterable, max_dim: int = MAX_DIM) -> np.ndarray:
    out = None
    for f in factors:
        out = as_matrix(f) if out is None else kron(out, f, max_dim)
    if out is None:
        raise LinalgError("kron_all needs at least one factor")
    return out


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def _resolve_register(register: Union[SpinRegister, Sequence[int]]):
    if isinstance(register, SpinRegister):
        return register.dims, register.position
    dims = tuple(int(d) for d in register)
    if not dims or any(d < 1 for d in dims):
        raise RegisterError(f"bad site dimensions {dims}")

    def position(site):
        if isinstance(site, bool) or not isinstance(site, (int, np.integer)) or not 1 <= site <= len(dims):
            raise RegisterError(f"unknown site {site!r}")
        return int(site) - 1

    return dims, position


def partial_trace(rho, register: Union[SpinRegister, Sequence[int]], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the sites in ``keep``.

    ``register`` is either a :class:`SpinRegister` or a sequence of local
    dimensions, in which case sites are numbered 1..n. Kept sites come out
    in register order regardless of the order they are listed in ``keep``.
    """
    rho = as_matrix(rho)
    dims, position = _resolve_register(register)
    keep_pos = sorted({position(s) for s in keep})
    if not keep_pos:
        raise RegisterError("keep set must be non-empty")
    n = len(dims)
    full = int(np.prod(dims))
    if rho.shape[0] != full:
        raise LinalgError(f"rho has dim {rho.shape[0]}, register needs {full}")
    if len(keep_pos) == n:
        return rho.copy()

    t = rho.reshape(dims + dims)
    # einsum labels: row index i_k, column index j_k; traced sites share a label
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    row = [next(letters) for _ in range(n)]
    col = [row[k] if k not in keep_pos else next(letters) for k in range(n)]
    out = [row[k] for k in keep_pos] + [col[k] for k in keep_pos]
    reduced = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    d = int(np.prod([dims[k] for k in keep_pos]))
    return reduced.reshape(d, d)


@dataclass(frozen=True)
class HermEigDecomp:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Return ``V f(L) V^dagger``."""
        fv = np.asarray(f(self.eigenvalues), dtype=complex)
        v = self.eigenvectors
        return (v * fv) @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        return self.apply(lambda x: x)


def herm_eig(a, rtol: float = HERMITIAN_RTOL) -> HermEigDecomp:
    a = as_matrix(a)
    if not is_hermitian(a, rtol):
        raise NotHermitianError(
            f"matrix is not Hermitian: residual {hermiticity_residual(a):.3e}"
        )
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise LinalgError(f"eigensolver failed: {exc}") from exc
    return HermEigDecomp(w, v)


def func_hermitian(a, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    ``f`` is called once with the vector of eigenvalues and must act
    elementwise, e.g. ``lambda x: np.exp(-1j * x * t)``.
    """
    return herm_eig(a).apply(f)


def density_matrix_errors(rho, herm_tol: float = 1e-10, eig_tol: float = 1e-10, trace_tol: float = 1e-10) -> list[str]:
    """List the ways ``rho`` fails to be a density matrix (empty if valid)."""
    try:
        rho = as_matrix(rho)
    except LinalgError as exc:
        return [str(exc)]
    problems = []
    res = hermiticity_residual(rho)
    if res > herm_tol * max(frob(rho), 1.0):
        problems.append(f"not Hermitian (residual {res:.3e})")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w[0] < -eig_tol:
        problems.append(f"negative eigenvalue {w[0]:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        problems.append(f"trace {tr} differs from 1")
    return problems
