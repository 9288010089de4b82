"""Hamiltonians for two central spins coupled to two thermal spin baths.

All operators act on the full register. Each single spin carries
``(omega/2) sigma_z + beta sigma_x``; spins inside a bath interact through
``lambda sigma_x sigma_x`` (one term per unordered pair) and system spins
couple to bath spins through ``lambda0 sigma_x sigma_x`` along the edges of
a :class:`CouplingTopology`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import IDENTITY_2, SIGMA_X, SIGMA_Z, as_matrix, kron_all
from .register import DEFAULT_REGISTER, RegisterError, SpinRegister

SYSTEM_SUM = "sum"
SYSTEM_LITERAL_PRODUCT = "literal-product"
SYSTEM_FORMS = (SYSTEM_SUM, SYSTEM_LITERAL_PRODUCT)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Scalars of the five-spin model, with hbar = k_B = 1.

    ``omega_b1`` and ``omega_b2`` hold one frequency per bath site, so their
    lengths fix the bath sizes. ``lambda_intra >= 0`` is the
    antiferromagnetic regime, ``lambda_intra <= 0`` the ferromagnetic one.
    """

    omega_s: float = 0.7
    omega_b1: tuple[float, ...] = (1.0, 1.0)
    omega_b2: tuple[float, ...] = (1.0,)
    beta_field: float = 0.01
    lambda_intra: float = 0.0
    lambda_sb: float = 0.1
    temperature: float = 0.02
    system_hamiltonian: str = SYSTEM_SUM

    def __post_init__(self):
        object.__setattr__(self, "omega_b1", tuple(float(w) for w in self.omega_b1))
        object.__setattr__(self, "omega_b2", tuple(float(w) for w in self.omega_b2))
        scalars = [self.omega_s, self.beta_field, self.lambda_intra, self.lambda_sb, self.temperature]
        if not all(math.isfinite(x) for x in scalars + list(self.omega_b1 + self.omega_b2)):
            raise ModelError("model parameters must be finite")
        if self.temperature <= 0:
            raise ModelError(f"temperature must be > 0, got {self.temperature}")
        if not self.omega_b1 or not self.omega_b2:
            raise ModelError("each bath needs at least one site")
        if self.system_hamiltonian not in SYSTEM_FORMS:
            raise ModelError(f"system_hamiltonian must be one of {SYSTEM_FORMS}")

    @property
    def regime(self) -> str:
        if self.lambda_intra > 0:
            return "antiferromagnetic"
        if self.lambda_intra < 0:
            return "ferromagnetic"
        return "uncoupled"

    def register(self) -> SpinRegister:
        return SpinRegister.build(len(self.omega_b1), len(self.omega_b2))


@dataclass(frozen=True)
class CouplingTopology:
    """System-bath edges ``(system_site, bath_site)``, each weighted by lambda0."""

    pairs: tuple[tuple[int, int], ...] = field(default=((1, 3), (1, 4), (2, 5)))

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(s), int(b)) for s, b in self.pairs))

    @classmethod
    def default_for(cls, register: SpinRegister) -> "CouplingTopology":
        """System spin 1 couples to every bath-1 site, system spin 2 to every bath-2 site."""
        s1, s2 = register.system_sites
        return cls(tuple((s1, b) for b in register.bath1_sites) + tuple((s2, b) for b in register.bath2_sites))

    def validate(self, register: SpinRegister) -> None:
        if not self.pairs:
            raise ModelError("coupling topology is empty")
        for s, b in self.pairs:
            try:
                rs, rb = register.role(s), register.role(b)
            except RegisterError as exc:
                raise ModelError(f"edge ({s}, {b}): {exc}") from None
            if rs != "system" or rb == "system":
                raise ModelError(f"edge ({s}, {b}) must join a system site to a bath site")


def embed(site_op, site: int, register: SpinRegister = DEFAULT_REGISTER) -> np.ndarray:
    """Lift a 2x2 operator on ``site`` to the full register."""
    op = as_matrix(site_op)
    if op.shape != (2, 2):
        raise ModelError(f"site operator must be 2x2, got {op.shape}")
    pos = register.position(site)
    factors = [IDENTITY_2] * register.n_sites
    factors[pos] = op
    return kron_all(factors)


def _zeros(register: SpinRegister) -> np.ndarray:
    return np.zeros((register.dim, register.dim), dtype=complex)


def _local_field(omega: float, beta: float, site: int, register: SpinRegister) -> np.ndarray:
    return (omega / 2) * embed(SIGMA_Z, site, register) + beta * embed(SIGMA_X, site, register)


def _xx(a: int, b: int, register: SpinRegister) -> np.ndarray:
    return embed(SIGMA_X, a, register) @ embed(SIGMA_X, b, register)


def build_system_hamiltonian(p: ModelParams, register: SpinRegister = DEFAULT_REGISTER) -> np.ndarray:
    s1, s2 = register.system_sites
    h1 = _local_field(p.omega_s, p.beta_field, s1, register)
    h2 = _local_field(p.omega_s, p.beta_field, s2, register)
    if p.system_hamiltonian == SYSTEM_LITERAL_PRODUCT:
        # h1 and h2 act on different sites, so the product is h1 (x) h2
        return h1 @ h2
    return h1 + h2


def _bath_hamiltonian(omegas, sites, p: ModelParams, register: SpinRegister) -> np.ndarray:
    if len(omegas) != len(sites):
        raise ModelError(f"{len(omegas)} frequencies for {len(sites)} bath sites")
    h = _zeros(register)
    for w, s in zip(omegas, sites):
        h += _local_field(w, p.beta_field, s, register)
    for a, b in itertools.combinations(sites, 2):
        h += p.lambda_intra * _xx(a, b, register)
    return h


def build_bath1_hamiltonian(p: ModelParams, register: SpinRegister = DEFAULT_REGISTER) -> np.ndarray:
    return _bath_hamiltonian(p.omega_b1, register.bath1_sites, p, register)


def build_bath2_hamiltonian(p: ModelParams, register: SpinRegister = DEFAULT_REGISTER) -> np.ndarray:
    return _bath_hamiltonian(p.omega_b2, register.bath2_sites, p, register)


def build_interaction(
    p: ModelParams,
    topology: CouplingTopology | None = None,
    register: SpinRegister = DEFAULT_REGISTER,
) -> np.ndarray:
    topology = CouplingTopology.default_for(register) if topology is None else topology
    topology.validate(register)
    h = _zeros(register)
    for s, b in topology.pairs:
        h += _xx(s, b, register)
    return p.lambda_sb * h


def build_total(
    p: ModelParams,
    topology: CouplingTopology | None = None,
    register: SpinRegister = DEFAULT_REGISTER,
) -> np.ndarray:
    return (
        build_system_hamiltonian(p, register)
        + build_bath1_hamiltonian(p, register)
        + build_bath2_hamiltonian(p, register)
        + build_interaction(p, topology, register)
    )


def restrict(op: np.ndarray, register: SpinRegister, sites) -> np.ndarray:
    """Block of an operator that acts as ``X (x) I`` on ``sites``, returning ``X``.

    Only valid when ``op`` is the identity outside ``sites``; the sites must
    be contiguous in register order.
    """
    pos = register.positions(sites)
    if pos != list(range(pos[0], pos[0] + len(pos))):
        raise ModelError("restrict needs contiguous sites")
    n = register.n_sites
    left, width = 2 ** pos[0], 2 ** len(pos)
    right = 2 ** (n - pos[0] - len(pos))
    t = op.reshape(left, width, right, left, width, right)
    return t[0, :, 0, 0, :, 0].copy()
