"""Exact-diagonalization dynamics of two entangled spins coupled to
self-interacting thermal spin baths."""

from .dynamics import Evolver, Trajectory, run_trajectory, time_grid
from .entanglement import concurrence, spin_flip
from .experiment import prepare, run_sweep
from .model import (
    CouplingTopology,
    ModelParams,
    build_bath1_hamiltonian,
    build_bath2_hamiltonian,
    build_interaction,
    build_system_hamiltonian,
    build_total,
    embed,
)
from .register import DEFAULT_REGISTER, SpinRegister
from .states import SystemStateSpec, assemble_initial, make_system_state, thermal_state
from .zeno import ZenoSchedule, projective_channel, run_zeno, survival_amplitude_product

__version__ = "0.1.0"
