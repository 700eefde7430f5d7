"""State constructors: photon statistics and phase structure."""

import math

import numpy as np
import pytest

from antibunch import states
from antibunch.beamsplitter import g2_from_coeffs
from antibunch.states import CatParams, KerrParams


class TestCoherent:
    def test_poissonian_probabilities(self):
        alpha = 0.6
        psi = states.coherent(alpha, 32)
        n = np.arange(32)
        factorials = np.array([math.factorial(int(k)) for k in n], dtype=float)
        expected = np.exp(-abs(alpha) ** 2) * abs(alpha) ** (2 * n) / factorials
        assert np.max(np.abs(psi.probabilities() - expected)) < 1e-12

    def test_mean_photon_number(self):
        psi = states.coherent(0.9 + 0.4j, 48)
        assert psi.mean_n() == pytest.approx(0.9**2 + 0.4**2, rel=1e-10)

    def test_g2_is_unity(self):
        psi = states.coherent(0.5, 32)
        assert g2_from_coeffs(psi) == pytest.approx(1.0, abs=1e-10)


class TestPhaseModified:
    def test_only_two_photon_amplitude_rotated(self):
        alpha = 0.4
        base = states.coherent(alpha, 24)
        mod = states.phase_modified_coherent(alpha, 24)
        ratio = mod.amps / base.amps
        assert ratio[2] == pytest.approx(1.0j)
        mask = np.ones(24, dtype=bool)
        mask[2] = False
        assert np.allclose(ratio[mask], 1.0, atol=1e-12)

    def test_needs_three_levels(self):
        with pytest.raises(Exception):
            states.phase_modified_coherent(0.3, 2)


class TestKerrCoherent:
    def test_amplitude_magnitudes_preserved(self):
        base = states.coherent(0.3, 20)
        kerr = states.kerr_coherent(KerrParams(0.3, 0.05), 20)
        assert np.allclose(np.abs(kerr.amps), np.abs(base.amps), atol=1e-14)

    def test_phase_pattern(self):
        chi_t = 0.07
        kerr = states.kerr_coherent(KerrParams(0.5, chi_t), 16)
        base = states.coherent(0.5, 16)
        n = np.arange(16)
        expected = base.amps * np.exp(-1j * chi_t * (n**2 - n))
        assert np.max(np.abs(kerr.amps - expected)) < 1e-13

    def test_zero_interaction_is_coherent(self):
        kerr = states.kerr_coherent(KerrParams(0.4, 0.0), 16)
        assert np.array_equal(kerr.amps, states.coherent(0.4, 16).amps)


class TestVacuumTwoPhoton:
    def test_amplitudes(self):
        psi = states.vacuum_two_photon(0.3)
        assert psi.amps[0] == pytest.approx(np.sqrt(1 - 0.09))
        assert psi.amps[1] == 0.0
        assert psi.amps[2] == pytest.approx(0.3)

    def test_g2_law(self):
        # pure vacuum + two-photon superposition: g2 = 1 / (2 c2^2)
        for c2 in (0.1, 0.25, 0.5, 0.9):
            psi = states.vacuum_two_photon(c2)
            assert g2_from_coeffs(psi) == pytest.approx(1 / (2 * c2**2), rel=1e-12)
        assert g2_from_coeffs(states.vacuum_two_photon(0.5)) == pytest.approx(2.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            states.vacuum_two_photon(1.2)
        with pytest.raises(ValueError):
            states.vacuum_two_photon(-0.1)


class TestCatStates:
    def test_even_cat_support(self):
        psi = states.cat_state(CatParams(0.8, +1), 24)
        assert np.allclose(psi.amps[1::2], 0.0, atol=1e-14)
        assert psi.norm() == pytest.approx(1.0, abs=1e-10)

    def test_odd_cat_support(self):
        psi = states.cat_state(CatParams(0.8, -1), 24)
        assert np.allclose(psi.amps[0::2], 0.0, atol=1e-14)
        assert psi.norm() == pytest.approx(1.0, abs=1e-10)

    def test_superposition_structure(self):
        # even cat ~ |alpha> + |-alpha> up to normalization
        alpha = 0.6
        psi = states.cat_state(CatParams(alpha, +1), 32)
        plus = states.coherent(alpha, 32).amps
        minus = states.coherent(-alpha, 32).amps
        target = plus + minus
        target = target / np.linalg.norm(target)
        assert np.max(np.abs(psi.amps - target)) < 1e-10

    def test_parity_validation(self):
        with pytest.raises(ValueError):
            CatParams(0.5, 0)

    def test_odd_cat_at_zero_amplitude(self):
        with pytest.raises(ValueError):
            states.cat_state(CatParams(0.0, -1), 16)


class TestSqueezedStates:
    def test_squeezed_vacuum_even_support(self):
        psi = states.squeezed_vacuum(0.3, 40)
        assert np.allclose(psi.amps[1::2], 0.0, atol=1e-14)

    def test_squeezed_vacuum_mean_n(self):
        r = 0.3
        psi = states.squeezed_vacuum(r, 48)
        assert psi.mean_n() == pytest.approx(np.sinh(r) ** 2, rel=1e-8)

    def test_squeezed_coherent_mean_n(self):
        # displacement then squeeze ordering D(alpha) S(xi) |0>
        alpha, r = 0.5, 0.2
        psi = states.squeezed_coherent(alpha, r, 48)
        assert psi.mean_n() == pytest.approx(abs(alpha) ** 2 + np.sinh(r) ** 2, rel=1e-7)

    def test_squeezed_coherent_reduces_to_coherent(self):
        psi = states.squeezed_coherent(0.4, 0.0, 32)
        assert np.max(np.abs(psi.amps - states.coherent(0.4, 32).amps)) < 1e-12
