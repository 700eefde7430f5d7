"""Beamsplitter mixing: unitarity, conservation laws, and g2 extraction."""

import numpy as np
import pytest

from antibunch import fock, states
from antibunch.beamsplitter import (
    BeamsplitterParams,
    bs_unitary,
    g2_from_coeffs,
    heisenberg_residual,
    mix,
    output_g2,
    output_g2_b,
    output_moments,
)
from antibunch.errors import VacuumOutputError
from antibunch.fock import FockVector, TwoModeState


def random_state(rng, dim, support=None):
    """Random pure state; a small support keeps mixed photons inside the
    truncation so identities hold at full precision."""
    amps = np.zeros(dim, dtype=complex)
    k = support or dim
    amps[:k] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return FockVector(amps).normalize()


class TestParams:
    def test_transmission_and_phase(self):
        params = BeamsplitterParams(0.3, 0.5)
        assert params.T == pytest.approx(0.7)
        assert params.phase_rad == pytest.approx(np.pi / 2)

    @pytest.mark.parametrize("bad_r", [-0.1, 1.1])
    def test_reflectivity_domain(self, bad_r):
        with pytest.raises(ValueError):
            BeamsplitterParams(bad_r)


class TestUnitary:
    def test_unitarity(self):
        u = bs_unitary(BeamsplitterParams(0.37, 0.61), 6, 6)
        assert np.max(np.abs(u.conj().T @ u - np.eye(36))) < 1e-12

    def test_conserves_total_photon_number(self):
        # the generator commutes with N_a + N_b, so conservation is exact
        # even in a truncated space
        u = bs_unitary(BeamsplitterParams(0.25, 1.3), 5, 7)
        n_tot = fock.lift_a(fock.number(5), 7) + fock.lift_b(fock.number(7), 5)
        assert np.max(np.abs(u.conj().T @ n_tot @ u - n_tot)) < 1e-11


class TestConservation:
    def test_energy_conservation_random_inputs(self):
        rng = np.random.default_rng(11)
        params = BeamsplitterParams(0.42, 0.77)
        n_a_op = fock.lift_a(fock.number(8), 8)
        n_b_op = fock.lift_b(fock.number(8), 8)
        for _ in range(10):
            psi_a = random_state(rng, 8)
            psi_b = random_state(rng, 8)
            joint = mix(psi_a, psi_b, params)
            n_in = psi_a.mean_n() + psi_b.mean_n()
            n_out = fock.expectation(joint, n_a_op) + fock.expectation(joint, n_b_op)
            assert abs(n_out - n_in) < 1e-9

    def test_heisenberg_mode_map(self):
        for r, phi in [(0.5, 0.0), (0.37, 0.31), (0.9, 1.6)]:
            assert heisenberg_residual(BeamsplitterParams(r, phi), 10, 10) < 1e-9

    def test_hom_coincidence_vanishes(self):
        joint = mix(fock.basis(4, 1), fock.basis(4, 1), BeamsplitterParams(0.5))
        coincidence = abs(joint.as_matrix()[1, 1]) ** 2
        assert coincidence < 1e-10


class TestOutputStatistics:
    def test_coherent_inputs_stay_coherent(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            r = rng.uniform(0.05, 0.95)
            phi = rng.uniform(0.0, 2.0)
            alpha = rng.uniform(0.1, 0.8) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            beta = rng.uniform(0.1, 0.8)
            psi_a = states.coherent(alpha, 24)
            psi_b = states.coherent(beta, 24)
            g2, _ = output_g2(psi_a, psi_b, BeamsplitterParams(r, phi))
            assert g2 == pytest.approx(1.0, abs=1e-8)

    def test_mix_agrees_with_moment_path(self):
        rng = np.random.default_rng(21)
        params = BeamsplitterParams(0.31, 0.84)
        for _ in range(5):
            psi_a = random_state(rng, 8, support=3)
            psi_b = random_state(rng, 8, support=3)
            g2_joint, n_joint = output_g2(psi_a, psi_b, params)
            g2_mom, n_mom = output_moments(psi_a, psi_b, params)
            assert g2_mom == pytest.approx(g2_joint, rel=1e-9)
            assert n_mom == pytest.approx(n_joint, rel=1e-9)

    def test_output_b_maps_onto_output_a(self):
        # swapping outputs is the same as swapping T<->R and advancing the
        # phase by half a period: g2_B(R, phi) = g2_A(1-R, (1+phi) mod 2)
        rng = np.random.default_rng(8)
        for _ in range(5):
            psi_a = random_state(rng, 8, support=3)
            psi_b = random_state(rng, 8, support=3)
            r = rng.uniform(0.1, 0.9)
            phi = rng.uniform(0.0, 2.0)
            g2_b, n_b = output_g2_b(psi_a, psi_b, BeamsplitterParams(r, phi))
            mirrored = BeamsplitterParams(1.0 - r, (1.0 + phi) % 2.0)
            g2_a, n_a = output_g2(psi_a, psi_b, mirrored)
            assert g2_b == pytest.approx(g2_a, rel=1e-9)
            assert n_b == pytest.approx(n_a, rel=1e-9)


class TestG2FromCoeffs:
    def test_accepts_fock_vector_and_array(self):
        psi = states.coherent(0.4, 24)
        assert g2_from_coeffs(psi.amps) == pytest.approx(g2_from_coeffs(psi))

    def test_normalizes_internally(self):
        assert g2_from_coeffs([0.0, 0.0, 3.0]) == pytest.approx(
            g2_from_coeffs([0.0, 0.0, 1.0])
        )

    def test_fock_state_values(self):
        assert g2_from_coeffs([0.0, 1.0]) == pytest.approx(0.0, abs=1e-15)
        # |n>: g2 = n(n-1)/n^2
        assert g2_from_coeffs([0.0, 0.0, 1.0]) == pytest.approx(0.5)
        assert g2_from_coeffs([0.0, 0.0, 0.0, 1.0]) == pytest.approx(2.0 / 3.0)

    def test_vacuum_is_undefined(self):
        with pytest.raises(VacuumOutputError):
            g2_from_coeffs([1.0, 0.0, 0.0])
        with pytest.raises(VacuumOutputError):
            g2_from_coeffs([0.0, 0.0, 0.0])

    def test_vacuum_inputs_to_splitter_are_undefined(self):
        with pytest.raises(VacuumOutputError):
            output_g2(fock.basis(4, 0), fock.basis(4, 0), BeamsplitterParams(0.5))
