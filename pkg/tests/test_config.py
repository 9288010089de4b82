import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinbath.config import (
    ConfigError,
    ExperimentConfig,
    ZenoConfig,
    dump_config,
    parse_config,
)
from spinbath.model import CouplingTopology
from spinbath.states import SystemStateSpec


def test_empty_document_gives_defaults():
    cfg = parse_config("")
    assert cfg == ExperimentConfig()
    assert cfg.omega_s == 0.7
    assert cfg.omega_b1 == (1.0, 1.0) and cfg.omega_b2 == (1.0,)
    assert cfg.beta_field == 0.01
    assert cfg.temperature == 0.02
    assert cfg.lambda_list == (0, 1, 2, 10)
    assert cfg.lambda0_list == (0.1, 1)
    assert cfg.state.kind == "bell"
    assert cfg.zeno is None
    assert cfg.coupling().pairs == ((1, 3), (1, 4), (2, 5))


def test_lambda_override_only():
    cfg = parse_config("lambda = [0, 10]\n")
    assert cfg.lambda_list == (0.0, 10.0)
    assert cfg == ExperimentConfig(lambda_list=(0.0, 10.0))


@pytest.mark.parametrize(
    "text",
    [
        "temperature = -1",
        "temperature = 0",
        "lambda = []",
        "[time]\ndt = 0",
        "[time]\nt_max = -5",
        "omega_s = nan",
        "omega_s = \"fast\"",
        "system_hamiltonian = \"product\"",
        "topology = [[3, 4]]",
        "topology = []",
        "[state]\nkind = \"ghz\"",
        "[state]\namplitudes = [[1, 0], [0, 0], [0, 0], [0, 0]]",
        "[state]\nkind = \"custom\"\namplitudes = [[0, 0], [0, 0], [0, 0], [0, 0]]",
        "[zeno]\nn = [0]",
        "[zeno]\nt_k = -1",
        "lambda0 = [0]\n[zeno]\nn = [2]",
        "[output]\nformat = \"xml\"",
    ],
)
def test_range_violations(text):
    with pytest.raises(ConfigError):
        parse_config(text)


@pytest.mark.parametrize("text", ["lamda = 3", "[state]\ncolour = 1", "[plot]\nx = 1", "[zeno]\nN = [1]"])
def test_unknown_keys(text):
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(text)


def test_syntax_error_reports_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("omega_s = 0.7\nbeta_field = 0.01\ntemperature = = 2\n")


def test_full_document():
    text = """
omega_s = 0.5
omega_b1 = [1.0, 1.2]
omega_b2 = 0.9
beta_field = 0.0
temperature = 0.1
lambda = [-2, 2]
lambda0 = 0.5
system_hamiltonian = "literal-product"
topology = [[1, 3], [2, 4], [2, 5]]

[state]
kind = "custom"
amplitudes = [[1, 0], [0, 0], [0, 0], [0, 1]]

[time]
t_max = 10
dt = 0.1

[zeno]
n = [4, 8]
lambda = 10
total_time = 5.0
scope = "full-state"

[output]
dir = "out"
format = "json"
"""
    cfg = parse_config(text)
    assert cfg.omega_b2 == (0.9,)
    assert cfg.lambda0_list == (0.5,)
    assert cfg.topology == CouplingTopology(((1, 3), (2, 4), (2, 5)))
    assert cfg.state.custom_amplitudes == (1, 0, 0, 1j)
    assert cfg.zeno == ZenoConfig((4, 8), 10.0, None, 5.0, "full-state")
    assert cfg.zeno.interval(4, 0.5) == pytest.approx(1.25)
    assert cfg.output_format == "json"
    assert parse_config(dump_config(cfg)) == cfg


def test_zeno_interval_rules():
    z = parse_config("[zeno]\n").zeno
    assert z.n_list == (1, 2, 4, 8, 16, 32)
    assert z.interval(4, 0.1) == pytest.approx(2 * math.pi / 0.1 / 4)
    assert ZenoConfig(t_k=0.3).interval(50, 1.0) == 0.3


def test_roundtrip_defaults():
    cfg = parse_config("")
    text = dump_config(cfg)
    assert parse_config(text) == cfg
    assert dump_config(parse_config(text)) == text


finite = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(
    omega_s=finite,
    temperature=st.floats(1e-3, 1e3),
    lambdas=st.lists(finite, min_size=1, max_size=5),
    lambda0s=st.lists(finite.filter(lambda x: x != 0), min_size=1, max_size=3),
    kind=st.sampled_from(["bell", "partial", "partial-perturbed"]),
    epsilon=st.floats(0, 1),
    dt=st.floats(1e-3, 1),
    zeno=st.booleans(),
)
def test_parse_serialize_fixed_point(omega_s, temperature, lambdas, lambda0s, kind, epsilon, dt, zeno):
    cfg = ExperimentConfig(
        omega_s=omega_s,
        temperature=temperature,
        lambda_list=tuple(lambdas),
        lambda0_list=tuple(lambda0s),
        state=SystemStateSpec(kind, epsilon=epsilon),
        dt=dt,
        zeno=ZenoConfig() if zeno else None,
    )
    again = parse_config(dump_config(cfg))
    assert again == cfg
    assert parse_config(dump_config(again)) == again
