import math

import numpy as np
import pytest

from spinbath.experiment import prepare
from spinbath.linalg import density_matrix_errors, frob
from spinbath.model import ModelParams
from spinbath.states import SystemStateSpec, system_vector
from spinbath.zeno import (
    FULL_STATE,
    SYSTEM_REDUCED,
    ExtinctionError,
    ZenoError,
    ZenoSchedule,
    build_projector,
    projective_channel,
    purified_initial,
    run_zeno,
    survival_amplitude_product,
    system_projector,
)

from conftest import random_density

KET00 = SystemStateSpec("custom", custom_amplitudes=(1, 0, 0, 0))


@pytest.fixture(scope="module")
def strong():
    return prepare(ModelParams(lambda_intra=0.0, lambda_sb=1.0))


class TestSchedule:
    def test_fixed_total(self):
        s = ZenoSchedule.fixed_total(2 * math.pi, 8)
        assert s.interval == pytest.approx(math.pi / 4)
        assert s.total_time == pytest.approx(2 * math.pi)

    @pytest.mark.parametrize("kw", [dict(n_measurements=0, interval=1), dict(n_measurements=2, interval=-1),
                                    dict(n_measurements=2, interval=math.inf),
                                    dict(n_measurements=2, interval=1, projector_scope="bath")])
    def test_invalid(self, kw):
        with pytest.raises(ZenoError):
            ZenoSchedule(**kw)


class TestAmplitudeProduct:
    def test_zero_interval(self, strong):
        psi = purified_initial(strong.rho0)
        assert survival_amplitude_product(psi, strong.evolver, ZenoSchedule(1, 0.0)) == pytest.approx(1, abs=1e-14)

    def test_eigenstate_survives(self):
        prep = prepare(ModelParams(beta_field=0, lambda_intra=0, lambda_sb=0), KET00)
        psi0 = system_vector(KET00)
        b = np.kron(prep.rho_b1, prep.rho_b2)
        for n, tk in [(1, 0.7), (5, 3.0), (40, 11.0)]:
            p = survival_amplitude_product(psi0, prep.evolver, ZenoSchedule(n, tk), bath_rho=b)
            assert p == pytest.approx(1, abs=1e-12)

    def test_system_vector_with_bath_matches_full_vector(self, strong):
        psi_sys = system_vector(SystemStateSpec())
        b = np.kron(strong.rho_b1, strong.rho_b2)
        s = ZenoSchedule(3, 0.4)
        a1 = survival_amplitude_product(psi_sys, strong.evolver, s, bath_rho=b)
        a2 = survival_amplitude_product(purified_initial(strong.rho0), strong.evolver, s)
        assert a1 == pytest.approx(a2, abs=1e-12)

    def test_length_check(self, strong):
        with pytest.raises(ZenoError):
            survival_amplitude_product(np.ones(4), strong.evolver, ZenoSchedule(1, 1.0))


class TestProjectiveChannel:
    def test_identity_projector(self, rng):
        rho = random_density(rng, 32)
        out, p = projective_channel(rho, np.eye(32))
        assert p == pytest.approx(1, abs=1e-14)
        assert np.max(np.abs(out - rho)) <= 1e-14

    def test_state_inside_range(self, strong):
        proj = build_projector(strong.rho0, strong.evolver, SYSTEM_REDUCED)
        out, p = projective_channel(strong.rho0, proj)
        assert p == pytest.approx(1, abs=1e-12)
        assert np.max(np.abs(out - strong.rho0)) <= 1e-12

    def test_probability_vs_basis_sum(self, rng):
        rho = random_density(rng, 32)
        psi0 = system_vector(SystemStateSpec("partial"))
        proj = system_projector(psi0, 8)
        _, p = projective_channel(rho, proj)
        want = 0.0
        for b in range(8):
            e_b = np.zeros(8)
            e_b[b] = 1
            v = np.kron(psi0, e_b)
            want += np.vdot(v, rho @ v).real
        assert p == pytest.approx(want, abs=1e-12)

    def test_output_is_state(self, rng):
        rho = random_density(rng, 32)
        proj = system_projector(system_vector(SystemStateSpec()), 8)
        out, _ = projective_channel(rho, proj)
        assert density_matrix_errors(out) == []
        assert frob(proj @ proj - proj) <= 1e-12

    def test_rejects_non_projector(self, rng):
        with pytest.raises(ZenoError):
            projective_channel(random_density(rng, 4), 2 * np.eye(4))

    def test_extinction(self):
        rho = np.diag([1.0, 0, 0, 0]).astype(complex)
        with pytest.raises(ExtinctionError):
            projective_channel(rho, np.diag([0, 1.0, 0, 0]))


class TestRunZeno:
    def test_zero_interval_frozen(self, strong):
        res = run_zeno(strong.rho0, strong.evolver, ZenoSchedule(5, 0.0), keep_states=True)
        assert np.allclose(res.survival_probabilities, 1, atol=1e-12)
        assert np.max(np.abs(res.post_measurement_states[-1] - strong.rho0)) <= 1e-12

    def test_trivial_system_evolution(self):
        # omega_s = 0 and no couplings: U is the identity on the system
        prep = prepare(ModelParams(omega_s=0, beta_field=0, lambda_sb=0, lambda_intra=3))
        res = run_zeno(prep.rho0, prep.evolver, ZenoSchedule(10, 1.3))
        assert np.allclose(res.survival_probabilities, 1, atol=1e-12)

    @pytest.mark.parametrize("lam0", [0.1, 1.0])
    def test_probability_bounds(self, lam0):
        prep = prepare(ModelParams(lambda_sb=lam0))
        res = run_zeno(prep.rho0, prep.evolver, ZenoSchedule.fixed_total(2 * math.pi / lam0, 16), keep_states=True)
        assert np.all((res.step_probabilities >= 0) & (res.step_probabilities <= 1))
        assert np.all(np.diff(res.survival_probabilities) <= 1e-12)
        assert res.survival_probabilities[0] <= 1
        for rho in res.post_measurement_states:
            assert density_matrix_errors(rho) == []

    def test_cumulative_is_product_of_steps(self, strong):
        res = run_zeno(strong.rho0, strong.evolver, ZenoSchedule(7, 0.3))
        assert np.allclose(res.survival_probabilities, np.cumprod(res.step_probabilities), rtol=0, atol=0)

    def test_full_state_scope_matches_amplitude_product(self, strong):
        # pure full-register start: the channel reduces to the amplitude product
        psi = purified_initial(strong.rho0)
        rho = np.outer(psi, psi.conj())
        s = ZenoSchedule(12, 0.25, FULL_STATE)
        res = run_zeno(rho, strong.evolver, s)
        assert np.allclose(res.survival_probabilities, res.amplitude_product, atol=1e-12)
        assert res.survival_probabilities[-1] == pytest.approx(
            survival_amplitude_product(psi, strong.evolver, s), abs=1e-12
        )

    def test_trace_diagnostic_first_step(self, strong):
        s = ZenoSchedule(3, 0.5)
        res = run_zeno(strong.rho0, strong.evolver, s)
        want = abs(np.trace(strong.evolver.propagator(0.5) @ strong.rho0)) ** 2
        assert res.trace_diagnostic[0] == pytest.approx(want, abs=1e-14)

    def test_extinction_zeroes_the_rest(self):
        # sigma_x rotations on both system spins take |00> to |11> at beta t = pi/2
        beta = 0.5
        prep = prepare(ModelParams(omega_s=0, omega_b1=(0, 0), omega_b2=(0,), beta_field=beta, lambda_sb=0), KET00)
        res = run_zeno(prep.rho0, prep.evolver, ZenoSchedule(4, math.pi / (2 * beta)))
        assert res.extinct_at == 0
        assert np.all(res.survival_probabilities == 0)

    def test_zeno_limit_matches_short_time_variance(self, strong):
        # P_N -> exp(-Var(H) T^2 / N) for a pure state measured N times over T
        psi = purified_initial(strong.rho0)
        h = strong.evolver.hamiltonian
        hpsi = h @ psi
        var = np.vdot(hpsi, hpsi).real - np.vdot(psi, hpsi).real ** 2
        rho = np.outer(psi, psi.conj())
        total = 2 * math.pi
        for n in (1024, 4096):
            p = run_zeno(rho, strong.evolver, ZenoSchedule.fixed_total(total, n, FULL_STATE)).survival_probabilities[-1]
            assert -n * math.log(p) / total**2 == pytest.approx(var, rel=1e-3)

    @pytest.mark.parametrize("lam0", [0.1, 1.0])
    def test_survival_grows_with_n_in_zeno_regime(self, lam0):
        prep = prepare(ModelParams(lambda_sb=lam0))
        total = 2 * math.pi / lam0
        ns = [256, 512, 1024, 2048, 4096]
        final = [run_zeno(prep.rho0, prep.evolver, ZenoSchedule.fixed_total(total, n)).survival_probabilities[-1]
                 for n in ns]
        assert np.all(np.diff(final) > 0)

    def test_one_over_n_scaling(self, strong):
        # 1 - P_N ~ Var T^2 / N once the exponent is small: doubling N halves the loss
        total = 2 * math.pi
        final = [run_zeno(strong.rho0, strong.evolver, ZenoSchedule.fixed_total(total, n)).survival_probabilities[-1]
                 for n in (2048, 4096)]
        assert (1 - final[1]) / (1 - final[0]) == pytest.approx(0.5, abs=0.02)
