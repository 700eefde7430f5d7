"""Result datasets behind each shipped figure: grids and curves of g2(0).

Each builder returns a FigureResult (column names, rows, reproducibility
metadata); file writing lives in the CLI.  The g2 pipelines are registered
in the optimizer's objective registry under stable names so sweep specs can
reference them from JSON configs.

Phases follow the normalized-to-pi convention of the beamsplitter module in
all inputs and outputs; radians never appear in emitted data.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import lindblad, optimize, states
from .beamsplitter import BeamsplitterParams, output_moments
from .errors import VacuumOutputError
from .fock import default_dim
from .optimize import Axis, SweepSpec
from .states import CatParams, KerrParams

FIGURES: dict[str, Callable[..., "FigureResult"]] = {}


def register_figure(name: str):
    def deco(fn):
        FIGURES[name] = fn
        return fn

    return deco


@dataclass(frozen=True)
class FigureResult:
    name: str
    columns: tuple[str, ...]
    rows: list
    meta: dict


def _meta(name: str, params: dict, t0: float, extra: dict | None = None) -> dict:
    from . import __version__

    meta = {
        "figure": name,
        "parameters": params,
        "version": __version__,
        "walltime_s": round(time.perf_counter() - t0, 3),
    }
    if extra:
        meta.update(extra)
    return meta


# ---------------------------------------------------------------- objectives

def phase_modified_mix(R, phi, alpha=0.3, dim=16):
    """g2 of output A: coherent state with rotated two-photon amplitude vs coherent."""
    dim = int(dim)
    psi_a = states.phase_modified_coherent(alpha, dim)
    psi_b = states.coherent(alpha, dim)
    return output_moments(psi_a, psi_b, BeamsplitterParams(R=R, phi=phi))


def kerr_mix(R, phi, alpha=0.3, chi_t=0.05, dim=16, alpha_b=None):
    """g2 of output A: Kerr-evolved coherent vs coherent (same alpha unless decoupled)."""
    dim = int(dim)
    psi_a = states.kerr_coherent(KerrParams(alpha=alpha, chi_t=chi_t), dim)
    psi_b = states.coherent(alpha if alpha_b is None else alpha_b, dim)
    return output_moments(psi_a, psi_b, BeamsplitterParams(R=R, phi=phi))


def two_photon_mix(alpha, c2, R=0.5, phi=0.5, dim=16):
    """g2 of output A: vacuum+two-photon superposition vs coherent."""
    dim = int(dim)
    psi_a = states.vacuum_two_photon(c2, dim)
    psi_b = states.coherent(alpha, dim)
    return output_moments(psi_a, psi_b, BeamsplitterParams(R=R, phi=phi))


def cat_mix(alpha_sch, alpha, parity=1, R=0.5, phi=0.5, dim=16):
    """g2 of output A: even/odd cat vs coherent."""
    dim = int(dim)
    psi_a = states.cat_state(CatParams(alpha_sch=alpha_sch, parity=int(parity)), dim)
    psi_b = states.coherent(alpha, dim)
    return output_moments(psi_a, psi_b, BeamsplitterParams(R=R, phi=phi))


def squeezed_mix(r=0.05, alpha=0.5, phi=1.0, R=0.1, omega=0.0, dim_a=None, dim_b=None):
    """g2 of output A: squeezed vacuum (xi = r e^{i omega}) vs coherent.

    omega is in radians (an internal state parameter, not an I/O phase).
    """
    xi = r * np.exp(1j * omega)
    if dim_a is None:
        dim_a = max(24, int(np.ceil(20.0 * (1.0 + r))))
    if dim_b is None:
        dim_b = default_dim(alpha)
    psi_a = states.squeezed_vacuum(xi, int(dim_a))
    psi_b = states.coherent(alpha, int(dim_b))
    return output_moments(psi_a, psi_b, BeamsplitterParams(R=R, phi=phi))


for _name, _fn in (
    ("phase_modified_mix", phase_modified_mix),
    ("kerr_mix", kerr_mix),
    ("two_photon_mix", two_photon_mix),
    ("cat_mix", cat_mix),
    ("squeezed_mix", squeezed_mix),
):
    optimize.register_objective(_name, _fn)


# ------------------------------------------------------------------ builders

def _grid_rows(res: optimize.SweepResult) -> list:
    v0, v1 = res.axis_values
    rows = []
    for i, x in enumerate(v0):
        for j, y in enumerate(v1):
            rows.append(
                (
                    float(x), float(y),
                    float(res.g2[i, j]), float(res.n_mean[i, j]),
                    int(res.defined[i, j]),
                )
            )
    return rows


@register_figure("fig2")
def fig2(alpha=0.3, dim=16, grid=101, r_lo=0.01, r_hi=0.5, phi_lo=0.0, phi_hi=2.0):
    """g2 map over (R, phi) for the phase-modified coherent state."""
    t0 = time.perf_counter()
    spec = SweepSpec(
        axes=(Axis("R", r_lo, r_hi, grid), Axis("phi", phi_lo, phi_hi, grid)),
        objective="phase_modified_mix",
        fixed={"alpha": alpha, "dim": dim},
    )
    res = optimize.sweep(spec)
    params = {"alpha": alpha, "dim": dim, "grid": grid,
              "R_range": [r_lo, r_hi], "phi_range": [phi_lo, phi_hi]}
    extra = {"argmin": {"R": res.argmin[0], "phi": res.argmin[1]},
             "min_g2": res.min_g2, "n_at_min": res.n_at_min}
    return FigureResult("fig2", ("R", "phi", "g2", "n_mean", "defined"),
                        _grid_rows(res), _meta("fig2", params, t0, extra))


@register_figure("fig3a")
def fig3a(alpha=0.3, chi_t=0.05, dim=16, grid=101,
          r_lo=0.01, r_hi=0.5, phi_lo=0.0, phi_hi=2.0):
    """g2 map over (R, phi) for the Kerr-evolved coherent state."""
    t0 = time.perf_counter()
    spec = SweepSpec(
        axes=(Axis("R", r_lo, r_hi, grid), Axis("phi", phi_lo, phi_hi, grid)),
        objective="kerr_mix",
        fixed={"alpha": alpha, "chi_t": chi_t, "dim": dim},
    )
    res = optimize.sweep(spec)
    params = {"alpha": alpha, "chi_t": chi_t, "dim": dim, "grid": grid,
              "R_range": [r_lo, r_hi], "phi_range": [phi_lo, phi_hi]}
    extra = {"argmin": {"R": res.argmin[0], "phi": res.argmin[1]},
             "min_g2": res.min_g2, "n_at_min": res.n_at_min}
    return FigureResult("fig3a", ("R", "phi", "g2", "n_mean", "defined"),
                        _grid_rows(res), _meta("fig3a", params, t0, extra))


@register_figure("fig3b")
def fig3b(alpha_lo=0.05, alpha_hi=0.5, count=10, chi_t=0.05, dim=16,
          inner_grid=41, alpha_b=None, refine=True):
    """Optimal g2 and the photon number it costs, versus input amplitude.

    Both input amplitudes follow the scanned alpha unless alpha_b pins the
    coherent arm separately.
    """
    t0 = time.perf_counter()
    inner = (Axis("R", 0.01, 0.5, inner_grid), Axis("phi", 0.0, 2.0, inner_grid))
    fixed = {"chi_t": chi_t, "dim": dim}
    if alpha_b is not None:
        fixed["alpha_b"] = alpha_b
    rows = []
    for a in np.linspace(alpha_lo, alpha_hi, count):
        try:
            _, g2, n_at, x = optimize.min_curve(
                "kerr_mix", Axis("alpha", float(a), float(a), 1), inner,
                fixed=fixed, refine=refine,
            )[0]
            rows.append((float(a), g2, n_at, x[0], x[1], 1))
        except VacuumOutputError:
            rows.append((float(a), np.nan, np.nan, np.nan, np.nan, 0))
    params = {"alpha_range": [alpha_lo, alpha_hi], "count": count, "chi_t": chi_t,
              "dim": dim, "inner_grid": inner_grid, "alpha_b": alpha_b,
              "refine": bool(refine)}
    return FigureResult("fig3b", ("alpha", "min_g2", "n_mean", "R_opt", "phi_opt", "defined"),
                        rows, _meta("fig3b", params, t0))


@register_figure("fig4")
def fig4(c2_lo=0.01, c2_hi=0.5, count=50, R=0.5, phi=0.5, dim=16,
         alpha_lo=0.02, alpha_hi=2.0, inner_count=80, refine=True):
    """Optimal g2 versus two-photon weight on a 50:50 splitter, alpha optimized."""
    t0 = time.perf_counter()
    inner = (Axis("alpha", alpha_lo, alpha_hi, inner_count),)
    fixed = {"R": R, "phi": phi, "dim": dim}
    rows = []
    for c2 in np.linspace(c2_lo, c2_hi, count):
        try:
            _, g2, n_at, x = optimize.min_curve(
                "two_photon_mix", Axis("c2", float(c2), float(c2), 1), inner,
                fixed=fixed, refine=refine,
            )[0]
            rows.append((float(c2), g2, n_at, x[0], 0.5 / (c2 * c2), 1))
        except VacuumOutputError:
            rows.append((float(c2), np.nan, np.nan, np.nan, 0.5 / (c2 * c2), 0))
    params = {"c2_range": [c2_lo, c2_hi], "count": count, "R": R, "phi": phi,
              "dim": dim, "alpha_range": [alpha_lo, alpha_hi],
              "inner_count": inner_count, "refine": bool(refine)}
    return FigureResult("fig4", ("c2", "min_g2", "n_mean", "alpha_opt", "input_g2", "defined"),
                        rows, _meta("fig4", params, t0))


@register_figure("fig5")
def fig5(sch_lo=0.02, sch_hi=0.3, sch_count=57, alpha_lo=0.01, alpha_hi=0.3,
         alpha_count=59, parity=1, R=0.5, phi=0.5, dim=16):
    """g2 map over (cat amplitude, coherent amplitude) on a 50:50 splitter."""
    t0 = time.perf_counter()
    spec = SweepSpec(
        axes=(Axis("alpha_sch", sch_lo, sch_hi, sch_count),
              Axis("alpha", alpha_lo, alpha_hi, alpha_count)),
        objective="cat_mix",
        fixed={"parity": parity, "R": R, "phi": phi, "dim": dim},
    )
    res = optimize.sweep(spec)
    params = {"alpha_sch_range": [sch_lo, sch_hi], "sch_count": sch_count,
              "alpha_range": [alpha_lo, alpha_hi], "alpha_count": alpha_count,
              "parity": parity, "R": R, "phi": phi, "dim": dim}
    extra = {"argmin": {"alpha_sch": res.argmin[0], "alpha": res.argmin[1]},
             "min_g2": res.min_g2}
    return FigureResult("fig5", ("alpha_sch", "alpha", "g2", "n_mean", "defined"),
                        _grid_rows(res), _meta("fig5", params, t0, extra))


@register_figure("fig6")
def fig6(r_lo=0.002, r_hi=0.018, r_count=13, alpha_lo=0.1, alpha_hi=4.0,
         alpha_count=41, T=0.9, phi=1.0, omega=0.0, dim_a=24, dim_b=None):
    """g2 map over (squeezing r, coherent alpha) at fixed high transmission."""
    t0 = time.perf_counter()
    fixed = {"R": 1.0 - T, "phi": phi, "omega": omega, "dim_a": dim_a, "dim_b": dim_b}
    spec = SweepSpec(
        axes=(Axis("r", r_lo, r_hi, r_count, spacing="geom"),
              Axis("alpha", alpha_lo, alpha_hi, alpha_count, spacing="geom")),
        objective="squeezed_mix",
        fixed=fixed,
    )
    res = optimize.sweep(spec)
    params = {"r_range": [r_lo, r_hi], "r_count": r_count,
              "alpha_range": [alpha_lo, alpha_hi], "alpha_count": alpha_count,
              "T": T, "phi": phi, "omega": omega, "dim_a": dim_a, "dim_b": dim_b}
    extra = {"argmin": {"r": res.argmin[0], "alpha": res.argmin[1]},
             "min_g2": res.min_g2}
    return FigureResult("fig6", ("r", "alpha", "g2", "n_mean", "defined"),
                        _grid_rows(res), _meta("fig6", params, t0, extra))


@register_figure("fig7")
def fig7(tau_max=10.0, n_tau=201, U=0.01, J=6.2, dim_single=12,
         dims_coupled=(12, 12), tune_dims_coupled=(8, 8)):
    """Delayed correlations of the two cavity schemes at their tuned optima."""
    t0 = time.perf_counter()
    dims_coupled = tuple(int(d) for d in dims_coupled)
    tuned_s = lindblad.tune_for_antibunching("single", U=U, dims=(int(dim_single),))
    tuned_c = lindblad.tune_for_antibunching(
        "coupled", U=U, J=J, dims=dims_coupled,
        tune_dims=tuple(int(d) for d in tune_dims_coupled),
    )
    tau = np.linspace(0.0, float(tau_max), int(n_tau))
    model_s = lindblad.build_single_kerr(U, tuned_s["F"], tuned_s["Delta"], int(dim_single))
    curve_s = lindblad.g2_tau(model_s, tuned_s["mix"], tau)
    model_c = lindblad.build_coupled_cavities(U, J, tuned_c["F"], tuned_c["Delta"], dims_coupled)
    curve_c = lindblad.g2_tau(model_c, None, tau)
    rows = [
        (float(t), float(gs), float(gc))
        for t, gs, gc in zip(tau, curve_s.g2_values, curve_c.g2_values)
    ]
    beta = tuned_s["beta"]
    params = {"tau_max": tau_max, "n_tau": n_tau, "U": U, "J": J,
              "dim_single": dim_single, "dims_coupled": list(dims_coupled),
              "tune_dims_coupled": list(tune_dims_coupled)}
    extra = {
        "single": {"F": tuned_s["F"], "Delta": tuned_s["Delta"],
                   "beta": [beta.real, beta.imag], "g2_0": tuned_s["g2"]},
        "coupled": {"F": tuned_c["F"], "Delta": tuned_c["Delta"], "g2_0": tuned_c["g2"]},
        "coupled_oscillation_frequency": lindblad.oscillation_frequency(curve_c),
    }
    return FigureResult("fig7", ("tau", "g2_single", "g2_coupled"),
                        rows, _meta("fig7", params, t0, extra))


# ----------------------------------------------------------------- CSV plumbing

def format_cell(value) -> str:
    """Full double precision: 17 significant digits survive a float round-trip."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def read_csv(path) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    """Parse a CSV written by write_csv back into floats (round-trip exact)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = tuple(next(reader))
        rows = [tuple(float(v) for v in row) for row in reader]
    return columns, rows
