"""Figure dataset builders and their CSV round trip."""

import numpy as np
import pytest

from antibunch import figures
from antibunch.figures import (
    FIGURES,
    fig2,
    fig3b,
    fig4,
    fig5,
    fig6,
    fig7,
    format_cell,
    read_csv,
    write_csv,
)


class TestRegistry:
    def test_all_builders_registered(self):
        assert set(FIGURES) == {"fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7"}

    def test_objectives_registered(self):
        from antibunch.optimize import OBJECTIVE_REGISTRY

        for name in (
            "phase_modified_mix",
            "kerr_mix",
            "two_photon_mix",
            "cat_mix",
            "squeezed_mix",
        ):
            assert name in OBJECTIVE_REGISTRY


class TestPhaseModifiedMap:
    def test_small_grid(self):
        res = fig2(grid=11)
        assert res.columns == ("R", "phi", "g2", "n_mean", "defined")
        assert len(res.rows) == 121
        assert res.meta["figure"] == "fig2"
        assert set(res.meta) >= {"parameters", "version", "walltime_s", "argmin", "min_g2"}
        assert res.meta["min_g2"] < 1.0  # the rotated two-photon arm antibunches


class TestAmplitudeScan:
    def test_reference_row(self):
        res = fig3b()
        assert res.columns == ("alpha", "min_g2", "n_mean", "R_opt", "phi_opt", "defined")
        rows = {round(r[0], 3): r for r in res.rows}
        alpha, min_g2, n_mean, r_opt, phi_opt, defined = rows[0.2]
        assert defined == 1
        assert min_g2 == pytest.approx(0.00822449, rel=1e-4)
        assert n_mean == pytest.approx(0.00245154, rel=1e-4)
        assert r_opt == pytest.approx(0.3906, abs=2e-3)
        assert phi_opt == pytest.approx(0.9110, abs=2e-3)
        # deeper antibunching costs less light at smaller drive
        mins = [r[1] for r in res.rows]
        assert all(a < b for a, b in zip(mins, mins[1:]))


class TestTwoPhotonCurve:
    def test_single_weight(self):
        res = fig4(c2_lo=0.1, c2_hi=0.1, count=1)
        assert res.columns == ("c2", "min_g2", "n_mean", "alpha_opt", "input_g2", "defined")
        c2, min_g2, n_mean, alpha_opt, input_g2, defined = res.rows[0]
        assert defined == 1
        assert input_g2 == pytest.approx(50.0)
        assert min_g2 == pytest.approx(0.40350403, rel=1e-4)
        assert alpha_opt == pytest.approx(0.42705, abs=2e-3)


class TestCatMap:
    def test_small_grid(self):
        res = fig5(sch_count=9, alpha_count=9)
        assert res.columns == ("alpha_sch", "alpha", "g2", "n_mean", "defined")
        assert len(res.rows) == 81
        assert "argmin" in res.meta


class TestSqueezedMap:
    def test_reference_extrema(self):
        res = fig6()
        data = np.array([r[:4] for r in res.rows])
        r_vals, alphas, g2, n_mean = data.T
        # the deepest dip sits at the weakest squeezing of the scanned range
        assert res.meta["argmin"]["r"] == pytest.approx(0.002)
        assert res.meta["min_g2"] == pytest.approx(0.0094788, rel=1e-4)
        # strong coherent drive swamps the squeezing: g2 -> 1
        strip = g2[alphas >= 2.0]
        assert np.max(np.abs(strip - 1.0)) == pytest.approx(0.07088, abs=2e-4)


class TestDelayedCorrelations:
    def test_structure_and_meta(self):
        res = fig7(
            tau_max=2.0,
            n_tau=21,
            dim_single=8,
            dims_coupled=(8, 8),
            tune_dims_coupled=(6, 6),
        )
        assert res.columns == ("tau", "g2_single", "g2_coupled")
        assert len(res.rows) == 21
        assert res.rows[0][0] == 0.0
        assert res.meta["single"]["g2_0"] < 1.0
        assert res.meta["coupled"]["g2_0"] < 1.0
        assert "coupled_oscillation_frequency" in res.meta


class TestCsvPlumbing:
    def test_format_cell(self):
        assert format_cell(3) == "3"
        assert float(format_cell(0.1 + 0.2)) == 0.1 + 0.2

    def test_round_trip_is_exact(self, tmp_path):
        res = fig2(grid=7)
        path = tmp_path / "fig2.csv"
        write_csv(path, res.columns, res.rows)
        columns, rows = read_csv(path)
        assert columns == res.columns
        assert len(rows) == len(res.rows)
        for got, want in zip(rows, res.rows):
            for g, w in zip(got, want):
                assert g == float(w)  # bit-exact float round trip
