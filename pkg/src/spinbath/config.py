"""Experiment configuration: a TOML document with a fixed key set.

Top-level keys::

    omega_s, omega_b1, omega_b2, beta_field, temperature,
    lambda, lambda0, system_hamiltonian, topology

Tables: ``[state]`` (kind, alpha, delta, epsilon, amplitudes),
``[time]`` (t_max, dt), ``[zeno]`` (n, lambda, t_k, total_time, scope),
``[output]`` (dir, format). Every key is optional; unknown keys are errors.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Optional

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .model import SYSTEM_FORMS, CouplingTopology, ModelError, ModelParams
from .states import STATE_KINDS, StateError, SystemStateSpec
from .zeno import SCOPES, SYSTEM_REDUCED

FORMATS = ("csv", "json")

DEFAULT_LAMBDAS = (0.0, 1.0, 2.0, 10.0)
DEFAULT_LAMBDA0S = (0.1, 1.0)
DEFAULT_ZENO_N = (1, 2, 4, 8, 16, 32)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ZenoConfig:
    n_list: tuple[int, ...] = DEFAULT_ZENO_N
    lambda_intra: float = 0.0
    t_k: Optional[float] = None  # fixed interval; overrides total_time / N
    total_time: Optional[float] = None  # default 2 pi / lambda0
    scope: str = SYSTEM_REDUCED

    def interval(self, n: int, lambda0: float) -> float:
        if self.t_k is not None:
            return self.t_k
        total = self.total_time if self.total_time is not None else 2 * math.pi / abs(lambda0)
        return total / n


@dataclass(frozen=True)
class ExperimentConfig:
    omega_s: float = 0.7
    omega_b1: tuple[float, ...] = (1.0, 1.0)
    omega_b2: tuple[float, ...] = (1.0,)
    beta_field: float = 0.01
    temperature: float = 0.02
    lambda_list: tuple[float, ...] = DEFAULT_LAMBDAS
    lambda0_list: tuple[float, ...] = DEFAULT_LAMBDA0S
    system_hamiltonian: str = "sum"
    topology: Optional[CouplingTopology] = None  # None: default for the register
    state: SystemStateSpec = field(default_factory=SystemStateSpec)
    t_max: float = 50.0
    dt: float = 0.05
    zeno: Optional[ZenoConfig] = None
    output_dir: str = "results"
    output_format: str = "csv"

    def params(self, lambda_intra: float, lambda_sb: float) -> ModelParams:
        return ModelParams(
            omega_s=self.omega_s,
            omega_b1=self.omega_b1,
            omega_b2=self.omega_b2,
            beta_field=self.beta_field,
            lambda_intra=lambda_intra,
            lambda_sb=lambda_sb,
            temperature=self.temperature,
            system_hamiltonian=self.system_hamiltonian,
        )

    def coupling(self) -> CouplingTopology:
        register = self.params(0.0, 0.0).register()
        return CouplingTopology.default_for(register) if self.topology is None else self.topology


TOP_KEYS = {
    "omega_s", "omega_b1", "omega_b2", "beta_field", "temperature",
    "lambda", "lambda0", "system_hamiltonian", "topology",
    "state", "time", "zeno", "output",
}
STATE_KEYS = {"kind", "alpha", "delta", "epsilon", "amplitudes"}
TIME_KEYS = {"t_max", "dt"}
ZENO_KEYS = {"n", "lambda", "t_k", "total_time", "scope"}
OUTPUT_KEYS = {"dir", "format"}


def _check_keys(table: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _real(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(f"{name} must be finite")
    return x


def _real_list(value: Any, name: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        value = [value]
    if not value:
        raise ConfigError(f"{name} must not be empty")
    return tuple(_real(v, f"{name}[{i}]") for i, v in enumerate(value))


def _table(doc: dict, key: str, allowed: set) -> dict:
    t = doc.get(key, {})
    if not isinstance(t, dict):
        raise ConfigError(f"{key} must be a table")
    _check_keys(t, allowed, f"[{key}]")
    return t


def _state(t: dict) -> SystemStateSpec:
    kw: dict[str, Any] = {}
    if "kind" in t:
        if t["kind"] not in STATE_KINDS:
            raise ConfigError(f"state.kind must be one of {STATE_KINDS}, got {t['kind']!r}")
        kw["kind"] = t["kind"]
    for k in ("alpha", "delta", "epsilon"):
        if k in t:
            kw[k] = _real(t[k], f"state.{k}")
    if "amplitudes" in t:
        amps = t["amplitudes"]
        if not isinstance(amps, list) or len(amps) != 4:
            raise ConfigError("state.amplitudes must list 4 [re, im] pairs")
        out = []
        for i, a in enumerate(amps):
            if not isinstance(a, list) or len(a) != 2:
                raise ConfigError(f"state.amplitudes[{i}] must be a [re, im] pair")
            out.append(complex(_real(a[0], f"state.amplitudes[{i}]"), _real(a[1], f"state.amplitudes[{i}]")))
        if not any(out):
            raise ConfigError("state.amplitudes must not all be zero")
        kw["custom_amplitudes"] = tuple(out)
        if kw.get("kind", "bell") != "custom":
            raise ConfigError("state.amplitudes requires kind = \"custom\"")
    try:
        return SystemStateSpec(**kw)
    except StateError as exc:
        raise ConfigError(str(exc)) from None


def _zeno(t: dict) -> ZenoConfig:
    kw: dict[str, Any] = {}
    if "n" in t:
        n = t["n"] if isinstance(t["n"], list) else [t["n"]]
        if not n or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in n):
            raise ConfigError("zeno.n must be a non-empty list of positive integers")
        kw["n_list"] = tuple(n)
    if "lambda" in t:
        kw["lambda_intra"] = _real(t["lambda"], "zeno.lambda")
    for k in ("t_k", "total_time"):
        if k in t:
            v = _real(t[k], f"zeno.{k}")
            if v <= 0:
                raise ConfigError(f"zeno.{k} must be > 0")
            kw[k] = v
    if "scope" in t:
        if t["scope"] not in SCOPES:
            raise ConfigError(f"zeno.scope must be one of {SCOPES}")
        kw["scope"] = t["scope"]
    return ZenoConfig(**kw)


def from_dict(doc: dict) -> ExperimentConfig:
    """Validate a decoded document and fill in defaults."""
    _check_keys(doc, TOP_KEYS, "top level")
    kw: dict[str, Any] = {}
    for k in ("omega_s", "beta_field", "temperature"):
        if k in doc:
            kw[k] = _real(doc[k], k)
    for k in ("omega_b1", "omega_b2"):
        if k in doc:
            kw[k] = _real_list(doc[k], k)
    if "lambda" in doc:
        kw["lambda_list"] = _real_list(doc["lambda"], "lambda")
    if "lambda0" in doc:
        kw["lambda0_list"] = _real_list(doc["lambda0"], "lambda0")
    if "system_hamiltonian" in doc:
        if doc["system_hamiltonian"] not in SYSTEM_FORMS:
            raise ConfigError(f"system_hamiltonian must be one of {SYSTEM_FORMS}")
        kw["system_hamiltonian"] = doc["system_hamiltonian"]
    if "topology" in doc:
        edges = doc["topology"]
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)
            for e in edges
        ):
            raise ConfigError("topology must be a list of [system_site, bath_site] integer pairs")
        kw["topology"] = CouplingTopology(tuple(tuple(e) for e in edges))
    kw["state"] = _state(_table(doc, "state", STATE_KEYS))

    tt = _table(doc, "time", TIME_KEYS)
    for k in ("t_max", "dt"):
        if k in tt:
            kw[k] = _real(tt[k], f"time.{k}")
    if "zeno" in doc:
        kw["zeno"] = _zeno(_table(doc, "zeno", ZENO_KEYS))
    out = _table(doc, "output", OUTPUT_KEYS)
    if "dir" in out:
        if not isinstance(out["dir"], str) or not out["dir"]:
            raise ConfigError("output.dir must be a non-empty string")
        kw["output_dir"] = out["dir"]
    if "format" in out:
        if out["format"] not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}")
        kw["output_format"] = out["format"]

    cfg = ExperimentConfig(**kw)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if not cfg.dt > 0:
        raise ConfigError(f"time.dt must be > 0, got {cfg.dt}")
    if not cfg.t_max > 0:
        raise ConfigError(f"time.t_max must be > 0, got {cfg.t_max}")
    try:
        p = cfg.params(cfg.lambda_list[0], cfg.lambda0_list[0])
        cfg.coupling().validate(p.register())
    except ModelError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.zeno is not None and cfg.zeno.t_k is None and cfg.zeno.total_time is None:
        if any(l0 == 0 for l0 in cfg.lambda0_list):
            raise ConfigError("zeno needs t_k or total_time when lambda0 = 0 (default interval is 2 pi / lambda0)")


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from None
    return from_dict(doc)


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config is not UTF-8: {exc}") from None
    return parse_config(text)


def to_dict(cfg: ExperimentConfig) -> dict:
    s = cfg.state
    state: dict[str, Any] = {"kind": s.kind, "alpha": s.alpha, "delta": s.delta, "epsilon": s.epsilon}
    if s.custom_amplitudes is not None:
        state["amplitudes"] = [[a.real, a.imag] for a in s.custom_amplitudes]
    doc: dict[str, Any] = {
        "omega_s": cfg.omega_s,
        "omega_b1": list(cfg.omega_b1),
        "omega_b2": list(cfg.omega_b2),
        "beta_field": cfg.beta_field,
        "temperature": cfg.temperature,
        "lambda": list(cfg.lambda_list),
        "lambda0": list(cfg.lambda0_list),
        "system_hamiltonian": cfg.system_hamiltonian,
    }
    if cfg.topology is not None:
        doc["topology"] = [list(e) for e in cfg.topology.pairs]
    doc["state"] = state
    doc["time"] = {"t_max": cfg.t_max, "dt": cfg.dt}
    if cfg.zeno is not None:
        z = cfg.zeno
        zt: dict[str, Any] = {"n": list(z.n_list), "lambda": z.lambda_intra, "scope": z.scope}
        if z.t_k is not None:
            zt["t_k"] = z.t_k
        if z.total_time is not None:
            zt["total_time"] = z.total_time
        doc["zeno"] = zt
    doc["output"] = {"dir": cfg.output_dir, "format": cfg.output_format}
    return doc


def dump_config(cfg: ExperimentConfig) -> str:
    return tomli_w.dumps(to_dict(cfg))


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    out = replace(cfg, **{k: v for k, v in changes.items() if v is not None})
    validate(out)
    return out
