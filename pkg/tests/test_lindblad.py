"""Driven-dissipative cavity models: steady states, g2(tau), tuning."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from antibunch import beamsplitter, lindblad
from antibunch.errors import (
    InvalidDimensionError,
    SteadyStateError,
    VacuumOutputError,
)
from antibunch.fock import annihilation
from antibunch.lindblad import (
    CavityModel,
    CorrelationCurve,
    build_coupled_cavities,
    build_single_kerr,
    g2_tau,
    liouvillian,
    oscillation_frequency,
    static_g2,
    steady_state,
    tune_for_antibunching,
)


def linear_cavity_amplitude(F, Delta):
    # steady state of the undriven-nonlinearity cavity is the coherent state
    # <a> = -i F / (1/2 + i Delta)  (decay rate 1)
    return -1j * F / (0.5 + 1j * Delta)


class TestBuilders:
    def test_single_dim_floor(self):
        with pytest.raises(InvalidDimensionError):
            build_single_kerr(0.1, 0.1, 0.0, 6)

    def test_coupled_dim_floor(self):
        with pytest.raises(InvalidDimensionError):
            build_coupled_cavities(0.1, 1.0, 0.1, 0.0, (4, 8))

    def test_model_validates_hermiticity(self):
        a = annihilation(8)
        with pytest.raises(ValueError, match="Hermitian"):
            CavityModel(
                hamiltonian=a,  # not Hermitian
                collapse_ops=(a,),
                monitored=a,
                F=0.1,
                Delta=0.0,
                U=0.0,
                modes=1,
                dims=(8,),
            )

    def test_hilbert_dim(self):
        assert build_single_kerr(0.1, 0.1, 0.0, 9).hilbert_dim == 9
        assert build_coupled_cavities(0.1, 1.0, 0.1, 0.0, (6, 7)).hilbert_dim == 42


class TestLiouvillian:
    def test_trace_preservation(self):
        model = build_single_kerr(0.3, 0.2, 0.1, 10)
        lio = liouvillian(model)
        n = model.hilbert_dim
        trace_functional = np.eye(n, dtype=complex).reshape(-1)
        assert np.max(np.abs(trace_functional @ lio)) < 1e-12

    def test_evolution_preserves_trace_and_positivity(self):
        model = build_single_kerr(0.5, 0.3, 0.0, 10)
        lio = liouvillian(model)
        rho_ss = steady_state(model).mat
        d = model.monitored
        seed = d @ rho_ss @ d.conj().T
        seed = seed / np.trace(seed).real
        sol = solve_ivp(
            lambda _t, y: lio @ y,
            (0.0, 5.0),
            seed.reshape(-1),
            t_eval=[0.0, 1.0, 5.0],
            rtol=1e-9,
            atol=1e-12,
        )
        assert sol.success
        for k in range(sol.y.shape[1]):
            rho = sol.y[:, k].reshape(model.hilbert_dim, model.hilbert_dim)
            assert abs(np.trace(rho).real - 1.0) < 1e-8
            assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() > -1e-7


class TestSteadyState:
    def test_requires_decay_channel(self):
        a = annihilation(8)
        model = CavityModel(
            hamiltonian=(a + a.conj().T),
            collapse_ops=(),
            monitored=a,
            F=0.1,
            Delta=0.0,
            U=0.0,
            modes=1,
            dims=(8,),
        )
        with pytest.raises(SteadyStateError):
            steady_state(model)

    def test_linear_cavity_matches_closed_form(self):
        F, Delta = 0.1, 0.3
        model = build_single_kerr(0.0, F, Delta, 12)
        rho = steady_state(model).mat
        a_avg = np.trace(annihilation(12) @ rho)
        assert abs(a_avg - linear_cavity_amplitude(F, Delta)) < 1e-9
        assert static_g2(model) == pytest.approx(1.0, abs=1e-8)

    def test_undriven_cavity_relaxes_to_vacuum(self):
        rho = steady_state(build_single_kerr(0.4, 0.0, 0.1, 8)).mat
        assert rho[0, 0].real == pytest.approx(1.0, abs=1e-12)

    def test_unknown_method(self):
        model = build_single_kerr(0.1, 0.1, 0.0, 8)
        with pytest.raises(ValueError, match="method"):
            steady_state(model, method="magic")

    def test_graded_ladder_size_limit_raises_when_forced(self, monkeypatch):
        monkeypatch.setattr(lindblad, "_GRADED_SOLVE_LIMIT", 100)
        model = build_coupled_cavities(0.01, 6.2, 0.04, 0.2, (8, 8))
        with pytest.raises(SteadyStateError, match="graded"):
            steady_state(model, method="graded")

    def test_methods_agree_on_coupled_model(self):
        # weakly excited coupled cavities: the graded ladder must reproduce
        # the full direct solve, and time marching the same physics to the
        # tolerance its integrator can certify
        model = build_coupled_cavities(
            0.01, 6.2, 0.04, 1.0 / (2.0 * np.sqrt(3.0)), (8, 8)
        )
        g2_direct = static_g2(model, rho_ss=steady_state(model, method="direct").mat)
        g2_graded = static_g2(model, rho_ss=steady_state(model, method="graded").mat)
        g2_march = static_g2(model, rho_ss=steady_state(model, method="march").mat)
        assert g2_graded == pytest.approx(g2_direct, rel=1e-8)
        assert g2_march == pytest.approx(g2_direct, rel=1e-4)


class TestStaticG2:
    def test_undriven_intensity_is_undefined(self):
        with pytest.raises(VacuumOutputError):
            static_g2(build_single_kerr(0.4, 0.0, 0.1, 8))

    def test_homodyne_cancellation_is_undefined(self):
        F, Delta = 0.2, 0.1
        model = build_single_kerr(0.0, F, Delta, 16)
        beta = -linear_cavity_amplitude(F, Delta)
        with pytest.raises(VacuumOutputError):
            static_g2(model, mix={"beta": beta})

    def test_homodyne_offset_keeps_coherent_statistics(self):
        model = build_single_kerr(0.0, 0.2, 0.1, 16)
        assert static_g2(model, mix={"beta": 0.3 + 0.1j}) == pytest.approx(1.0, abs=1e-8)

    def test_decoupled_partner_mode_has_no_effect(self):
        # with the hopping off, the monitored cavity is exactly linear no
        # matter how nonlinear its dark partner is
        F, Delta = 0.1, 0.2
        coupled = build_coupled_cavities(0.37, 0.0, F, Delta, (12, 6))
        single = build_single_kerr(0.0, F, Delta, 12)
        g2_c = static_g2(coupled)
        g2_s = static_g2(single)
        assert g2_c == pytest.approx(1.0, abs=1e-9)
        assert abs(g2_c - g2_s) < 1e-9

    def test_intensity_floor_shared_with_splitter_pipeline(self):
        assert lindblad.INTENSITY_FLOOR == beamsplitter.INTENSITY_FLOOR


class TestCorrelationCurve:
    def test_validation(self):
        with pytest.raises(ValueError):
            CorrelationCurve(np.array([0.5, 1.0]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            CorrelationCurve(np.array([0.0, 1.0, 0.5]), np.array([1.0, 1.0, 1.0]))
        with pytest.raises(ValueError):
            CorrelationCurve(np.array([0.0, 1.0]), np.array([1.0, 1.0, 1.0]))

    def test_arrays_readonly(self):
        curve = CorrelationCurve(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            curve.g2_values[0] = 2.0


class TestG2Tau:
    def test_grid_must_start_at_zero(self):
        model = build_single_kerr(0.5, 0.3, 0.0, 10)
        with pytest.raises(ValueError):
            g2_tau(model, None, [0.5, 1.0])

    def test_linear_cavity_curve_is_flat(self):
        model = build_single_kerr(0.0, 0.2, 0.1, 12)
        curve = g2_tau(model, None, np.linspace(0.0, 5.0, 21))
        assert np.max(np.abs(curve.g2_values - 1.0)) < 1e-7

    def test_zero_delay_matches_static_g2(self):
        model = build_single_kerr(0.5, 0.3, 0.0, 12)
        curve = g2_tau(model, None, np.array([0.0, 0.5, 1.0]))
        assert abs(curve.g2_values[0] - static_g2(model)) < 1e-10

    def test_correlations_factorize_at_long_delay(self):
        model = build_single_kerr(0.5, 0.3, 0.0, 12)
        curve = g2_tau(model, None, np.linspace(0.0, 20.0, 41))
        assert curve.g2_values[-1] == pytest.approx(1.0, abs=1e-6)


class TestOscillationFrequency:
    def test_monotone_curve_has_none(self):
        tau = np.linspace(0.0, 10.0, 101)
        curve = CorrelationCurve(tau, 1.0 - np.exp(-tau))
        assert oscillation_frequency(curve) is None

    def test_damped_cosine(self):
        omega = 3.0
        tau = np.linspace(0.0, 20.0, 401)
        curve = CorrelationCurve(tau, 1.0 + 0.1 * np.exp(-tau / 5.0) * np.cos(omega * tau))
        assert oscillation_frequency(curve) == pytest.approx(omega, rel=1e-3)


class TestTuner:
    def test_unknown_family(self):
        with pytest.raises(ValueError, match="family"):
            tune_for_antibunching("triple")

    def test_family_parameter_contract(self):
        with pytest.raises(ValueError, match="tunes exactly"):
            tune_for_antibunching("coupled", free_params=("F", "Delta", "beta"))

    def test_homodyne_dial_needs_nonlinearity(self):
        # with U = 0 the output stays coherent up to the displacement, which
        # cannot synthesize antibunching below the documented 0.9 floor
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            result = tune_for_antibunching("single", U=0.0)
        assert result["g2"] >= 0.9
