"""Wire model, states and dynamics together and run configured sweeps."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import output
from .config import ExperimentConfig
from .dynamics import Evolver, Trajectory, run_trajectory, time_grid
from .model import (
    CouplingTopology,
    ModelParams,
    build_bath1_hamiltonian,
    build_bath2_hamiltonian,
    build_total,
    restrict,
)
from .register import SpinRegister
from .states import SystemStateSpec, assemble_initial, make_system_state, thermal_state
from .zeno import ZenoResult, ZenoSchedule, run_zeno

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Prepared:
    params: ModelParams
    register: SpinRegister
    evolver: Evolver
    rho0: np.ndarray
    rho_s: np.ndarray
    rho_b1: np.ndarray
    rho_b2: np.ndarray


def bath_thermal_states(p: ModelParams, register: SpinRegister) -> tuple[np.ndarray, np.ndarray]:
    hb1 = restrict(build_bath1_hamiltonian(p, register), register, register.bath1_sites)
    hb2 = restrict(build_bath2_hamiltonian(p, register), register, register.bath2_sites)
    return thermal_state(hb1, p.temperature), thermal_state(hb2, p.temperature)


def prepare(
    p: ModelParams,
    state: SystemStateSpec = SystemStateSpec(),
    topology: Optional[CouplingTopology] = None,
) -> Prepared:
    """Total Hamiltonian evolver and the initial product state for one parameter point."""
    register = p.register()
    rho_s = make_system_state(state)
    rho_b1, rho_b2 = bath_thermal_states(p, register)
    rho0 = assemble_initial(rho_s, rho_b1, rho_b2)
    e = Evolver(build_total(p, topology, register), register)
    return Prepared(p, register, e, rho0, rho_s, rho_b1, rho_b2)


def trajectory_for(cfg: ExperimentConfig, lam: float, lam0: float) -> Trajectory:
    prep = prepare(cfg.params(lam, lam0), cfg.state, cfg.coupling())
    return run_trajectory(prep.evolver, prep.rho0, time_grid(cfg.t_max, cfg.dt))


def zeno_for(cfg: ExperimentConfig, lam0: float, n: int) -> ZenoResult:
    z = cfg.zeno
    prep = prepare(cfg.params(z.lambda_intra, lam0), cfg.state, cfg.coupling())
    schedule = ZenoSchedule(n, z.interval(n, lam0), z.scope)
    return run_zeno(prep.rho0, prep.evolver, schedule)


def _trajectory_job(cfg: ExperimentConfig, out_dir: Path, lam: float, lam0: float) -> Path:
    tr = trajectory_for(cfg, lam, lam0)
    path = out_dir / output.trajectory_name(lam, lam0, cfg.output_format)
    text = output.render(output.trajectory_rows(tr), output.TRAJECTORY_FIELDS, cfg.output_format)
    output.write_table(path, text, output.TRAJECTORY_FIELDS, len(tr))
    log.info("wrote %s", path)
    return path


def _zeno_job(cfg: ExperimentConfig, out_dir: Path, lam0: float, n: int) -> Path:
    res = zeno_for(cfg, lam0, n)
    path = out_dir / output.zeno_name(lam0, n, cfg.output_format)
    text = output.render(output.zeno_rows(res), output.ZENO_FIELDS, cfg.output_format)
    output.write_table(path, text, output.ZENO_FIELDS, len(res.times))
    log.info("wrote %s", path)
    return path


def run_sweep(cfg: ExperimentConfig, threads: int = 1) -> list[Path]:
    """Write one trajectory file per (lambda, lambda0) and, with a zeno
    section, one survival file per (lambda0, N). Returns the written paths
    in a deterministic order."""
    out_dir = Path(cfg.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise output.OutputError(f"cannot create output directory {out_dir}: {exc}") from exc

    jobs = [(_trajectory_job, lam, lam0) for lam in dict.fromkeys(cfg.lambda_list) for lam0 in dict.fromkeys(cfg.lambda0_list)]
    if cfg.zeno is not None:
        jobs += [(_zeno_job, lam0, n) for lam0 in dict.fromkeys(cfg.lambda0_list) for n in dict.fromkeys(cfg.zeno.n_list)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fn, cfg, out_dir, a, b) for fn, a, b in jobs]
            return [f.result() for f in futures]
    return [fn(cfg, out_dir, a, b) for fn, a, b in jobs]
