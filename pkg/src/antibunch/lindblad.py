"""Driven-dissipative Kerr cavities: steady states and delayed correlations.

Everything is expressed in units of the cavity linewidth gamma = 1.  The
homodyne-style mixing of a cavity output with a coherent field is modeled
as a displaced measurement operator d = a + beta: for a lossless mixer and
an ideal local oscillator the normal-ordered correlations of the mixed
field equal those of the displaced mode up to a scale that cancels in g2.

g2(tau) uses the quantum regression theorem: seed rho1 = d rho_ss d+ /
Tr(d rho_ss d+), evolve tau under the Liouvillian, read Tr(d+ d rho1(tau));
with that seed normalization g2(tau) = Tr(d+ d rho1(tau)) / Tr(d+ d rho_ss).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import gmres, splu

from . import optimize
from .errors import InvalidDimensionError, SteadyStateError, VacuumOutputError
from .fock import DensityMatrix, annihilation

INTENSITY_FLOOR = 1e-12


@dataclass(frozen=True)
class CavityModel:
    """Hamiltonian + collapse operators (sqrt(rate) folded in), units of gamma."""

    hamiltonian: np.ndarray
    collapse_ops: tuple[np.ndarray, ...]
    monitored: np.ndarray  # annihilation operator of the measured mode
    F: complex
    Delta: float
    U: float
    modes: int
    dims: tuple[int, ...]
    J: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        if np.max(np.abs(h - h.conj().T)) > 1e-10:
            raise ValueError("Hamiltonian is not Hermitian within 1e-10")
        object.__setattr__(self, "hamiltonian", h)

    @property
    def hilbert_dim(self) -> int:
        return self.hamiltonian.shape[0]


def build_single_kerr(U: float, F: complex, Delta: float, dim: int) -> CavityModel:
    """Single driven Kerr cavity: H = Delta n + U a+a+aa + F a+ + F* a, decay a."""
    if dim < 8:
        raise InvalidDimensionError(f"single-cavity model needs dim >= 8, got {dim}")
    a = annihilation(dim)
    ad = a.conj().T
    h = Delta * (ad @ a) + U * (ad @ ad @ a @ a) + F * ad + np.conjugate(F) * a
    return CavityModel(
        hamiltonian=h,
        collapse_ops=(a,),
        monitored=a,
        F=complex(F),
        Delta=float(Delta),
        U=float(U),
        modes=1,
        dims=(dim,),
    )


def build_coupled_cavities(
    U: float, J: float, F: complex, Delta: float, dims: tuple[int, int]
) -> CavityModel:
    """Two hopping-coupled cavities; the driven/monitored one is linear, its
    partner carries the Kerr term.  Both decay at gamma."""
    dim_a, dim_b = dims
    if dim_a < 6 or dim_b < 6:
        raise InvalidDimensionError(f"coupled model needs dims >= 6 each, got {dims}")
    a1 = annihilation(dim_a)
    b1 = annihilation(dim_b)
    ia = np.eye(dim_a, dtype=complex)
    ib = np.eye(dim_b, dtype=complex)
    a = np.kron(a1, ib)
    b = np.kron(ia, b1)
    ad, bd = a.conj().T, b.conj().T
    h = (
        Delta * (ad @ a + bd @ b)
        + U * (bd @ bd @ b @ b)
        + J * (ad @ b + bd @ a)
        + F * ad
        + np.conjugate(F) * a
    )
    return CavityModel(
        hamiltonian=h,
        collapse_ops=(a, b),
        monitored=a,
        F=complex(F),
        Delta=float(Delta),
        U=float(U),
        modes=2,
        dims=(dim_a, dim_b),
        J=float(J),
    )


def liouvillian(model: CavityModel) -> sp.csr_matrix:
    """Sparse superoperator on row-major vec(rho): vec(A rho B) = (A kron B^T) vec."""
    h = sp.csr_matrix(model.hamiltonian)
    n = model.hilbert_dim
    ident = sp.identity(n, format="csr", dtype=complex)
    lio = -1j * (sp.kron(h, ident) - sp.kron(ident, h.T))
    for c in model.collapse_ops:
        cs = sp.csr_matrix(c)
        cdc = cs.conj().T @ cs
        lio = lio + sp.kron(cs, cs.conj()) - 0.5 * (sp.kron(cdc, ident) + sp.kron(ident, cdc.T))
    return lio.tocsr()


# Above this many unknowns the full direct LU gets slow and its fill-in
# exhausts memory well before 200k unknowns.  Larger systems are first tried
# on excitation-graded subspaces (states with total Fock number <= K, K grown
# until low-order moments converge): each restricted solve is a small exact
# LU, so weakly excited steady states keep direct-solve accuracy at any
# cutoff.  Only when that ladder outgrows _GRADED_SOLVE_LIMIT (strongly
# excited states) does the kernel fall back to time marching plus a Krylov
# polish, which only needs matvecs but certifies the state in norm rather
# than component-wise.
_DIRECT_SOLVE_LIMIT = 10000
_GRADED_SOLVE_LIMIT = 30000
_GRADED_MOMENT_TOL = 5e-7


def _kernel_direct(lio: sp.spmatrix, n: int) -> np.ndarray:
    nn = n * n
    # Add weight * |e_0><trace| so the kernel vector becomes the unique
    # solution of a regular system (the standard direct method).
    weight = float(np.mean(np.abs(lio.diagonal())))
    diag_positions = np.arange(0, nn, n + 1)
    bump = sp.csr_matrix(
        (np.full(n, weight), (np.zeros(n, dtype=int), diag_positions)), shape=(nn, nn)
    )
    rhs = np.zeros(nn, dtype=complex)
    rhs[0] = weight
    try:
        solver = splu((lio + bump).tocsc())
        return solver.solve(rhs)
    except RuntimeError as exc:
        raise SteadyStateError(f"Liouvillian solve failed: {exc}") from exc


def _kernel_graded(model: CavityModel, lio: sp.spmatrix) -> np.ndarray | None:
    # Restrict the bumped solve to product states with total excitation <= K
    # and grow K until each mode's occupation and second factorial moment
    # stop moving.  Truncation error shrinks geometrically with K for weakly
    # driven states, so the converged answer carries full direct-LU accuracy;
    # returns None when the ladder outgrows the affordable solve size.
    n = model.hilbert_dim
    grades = np.indices(model.dims).reshape(model.modes, -1)
    total = grades.sum(axis=0)
    csr = lio.tocsr()
    prev_moments = None
    for k in range(6, int(total.max()) + 1, 2):
        keep = np.flatnonzero(total <= k)
        s = keep.size
        if s * s > _GRADED_SOLVE_LIMIT:
            return None
        pairs = (keep[:, None] * n + keep[None, :]).ravel()
        x_sub = _kernel_direct(csr[pairs][:, pairs], s)
        x = np.zeros(n * n, dtype=complex)
        x[pairs] = x_sub
        if s == n:
            return x  # ladder reached the full space: this IS the direct solve
        diag = x_sub.reshape(s, s).diagonal().real
        occ = grades[:, keep].astype(float)
        moments = np.concatenate([occ @ diag, (occ * (occ - 1.0)) @ diag])
        if prev_moments is not None:
            scale = np.maximum(np.abs(moments), np.abs(prev_moments))
            drift = np.abs(moments - prev_moments) / np.maximum(scale, 1e-30)
            # A moment below ~1e-16 absolute is already at the arithmetic
            # floor of the trace sums; relative agreement there is neither
            # achievable nor needed by any observable built from the state.
            live = drift[scale >= 1e-16]
            if live.size == 0 or np.max(live) < _GRADED_MOMENT_TOL:
                return x
        prev_moments = moments
    return None


def _kernel_evolve(lio: sp.spmatrix, n: int) -> np.ndarray:
    # March exp(L t) from the vacuum projector until transients are small,
    # then polish with plain GMRES on the residual: by that point the error
    # spans a handful of slow modes, which a Krylov space captures at once.
    # Explicit stepping + matvecs are all we can afford at this size.
    csr = lio.tocsr()
    v = np.zeros(n * n, dtype=complex)
    v[0] = 1.0
    for _ in range(16):
        sol = solve_ivp(
            lambda _t, y: csr @ y,
            (0.0, 10.0),
            v,
            method="RK45",
            rtol=1e-10,
            atol=1e-14,
            t_eval=(10.0,),
        )
        if not sol.success:
            raise SteadyStateError(f"Liouvillian time marching failed: {sol.message}")
        v = sol.y[:, -1]
        v = v / np.real(v[:: n + 1].sum())
        if np.max(np.abs(csr @ v)) < 1e-7:
            dx, info = gmres(
                csr, -(csr @ v), rtol=1e-8, atol=0.0, restart=200, maxiter=5
            )
            if info == 0:
                v = v + dx
                v = v / np.real(v[:: n + 1].sum())
                if np.max(np.abs(csr @ v)) < 5e-11:
                    return v
    raise SteadyStateError("Liouvillian time marching did not reach stationarity")


def steady_state(model: CavityModel, *, method: str = "auto") -> DensityMatrix:
    """Kernel of L, trace-normalized.

    method="auto" picks a full direct solve for small systems and the
    excitation-graded direct solve (with internal moment-convergence
    control) for larger ones, falling back to time marching when the graded
    ladder cannot converge affordably.  The individual methods ("direct",
    "graded", "march") can be forced for cross-checks; "direct" on a large
    system is the caller's own memory risk.
    """
    if not model.collapse_ops:
        raise SteadyStateError("model has no decay channel; steady state not unique")
    lio = liouvillian(model)
    n = model.hilbert_dim
    if method == "direct":
        x = _kernel_direct(lio, n)
    elif method == "graded":
        x = _kernel_graded(model, lio)
        if x is None:
            raise SteadyStateError("graded kernel ladder did not converge")
    elif method == "march":
        x = _kernel_evolve(lio, n)
    elif method == "auto":
        if n * n <= _DIRECT_SOLVE_LIMIT:
            x = _kernel_direct(lio, n)
        else:
            x = _kernel_graded(model, lio)
            if x is None:
                x = _kernel_evolve(lio, n)
    else:
        raise ValueError(f"unknown steady-state method {method!r}")
    rho = x.reshape(n, n)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = np.max(np.abs(lio @ rho.reshape(-1)))
    if residual > 1e-10:
        raise SteadyStateError(f"steady-state residual {residual:.3e} exceeds 1e-10")
    return DensityMatrix(rho)


def _measured_operator(model: CavityModel, mix: dict | None) -> np.ndarray:
    d = model.monitored.copy()
    if mix is not None:
        beta = complex(mix["beta"])
        d = d + beta * np.eye(model.hilbert_dim, dtype=complex)
    return d


def _g2_and_intensity(
    model: CavityModel, mix: dict | None, rho_ss: np.ndarray | None
) -> tuple[float, float]:
    if rho_ss is None:
        rho_ss = steady_state(model).mat
    d = _measured_operator(model, mix)
    dd = d.conj().T @ d
    n_ss = np.trace(dd @ rho_ss).real
    if n_ss < INTENSITY_FLOOR:
        raise VacuumOutputError(f"measured intensity {n_ss:.3e} below floor; g2 undefined")
    g2num = np.trace(d.conj().T @ dd @ d @ rho_ss).real
    return g2num / (n_ss * n_ss), float(n_ss)


def static_g2(model: CavityModel, mix: dict | None = None, rho_ss: np.ndarray | None = None) -> float:
    """Equal-time g2 of the (optionally displaced) monitored mode on the steady state."""
    g2, _ = _g2_and_intensity(model, mix, rho_ss)
    return g2


@dataclass(frozen=True)
class CorrelationCurve:
    """Delayed autocorrelation g2(tau) on a strictly increasing grid from 0."""

    tau_grid: np.ndarray
    g2_values: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau_grid, dtype=float)
        g2 = np.asarray(self.g2_values, dtype=float)
        if tau.ndim != 1 or tau.size < 2 or tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
            raise ValueError("tau grid must be 1-D, start at 0, strictly increasing")
        if g2.shape != tau.shape:
            raise ValueError("g2 values must match the tau grid")
        tau.setflags(write=False)
        g2.setflags(write=False)
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "g2_values", g2)


def g2_tau(
    model: CavityModel, mix: dict | None, tau_grid: Sequence[float]
) -> CorrelationCurve:
    """g2(tau) by quantum regression with adaptive RK integration (rtol 1e-9)."""
    tau = np.asarray(tau_grid, dtype=float)
    if tau[0] != 0.0:
        raise ValueError("tau grid must start at 0")
    rho_ss = steady_state(model).mat
    d = _measured_operator(model, mix)
    dd = d.conj().T @ d
    n_ss = np.trace(dd @ rho_ss).real
    if n_ss < INTENSITY_FLOOR:
        raise VacuumOutputError(f"measured intensity {n_ss:.3e} below floor; g2 undefined")
    seed = d @ rho_ss @ d.conj().T
    seed = seed / np.trace(seed).real  # trace equals n_ss by construction
    lio = liouvillian(model)
    readout = dd.T.reshape(-1)  # Tr(dd rho) = readout . vec(rho)

    sol = solve_ivp(
        lambda _t, y: lio @ y,
        (0.0, float(tau[-1])),
        seed.reshape(-1),
        t_eval=tau,
        method="RK45",
        rtol=1e-9,
        atol=1e-12,
    )
    if not sol.success:
        raise RuntimeError(f"regression evolution failed: {sol.message}")
    g2 = (readout @ sol.y).real / n_ss
    return CorrelationCurve(tau, g2)


def oscillation_frequency(curve: CorrelationCurve) -> float | None:
    """Angular frequency estimated from successive crossings of g2 = 1.

    Crossing spacing is half an oscillation period; returns None when the
    curve crosses fewer than three times (no oscillation to measure).
    """
    s = np.sign(curve.g2_values - 1.0)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    if idx.size < 3:
        return None
    t = curve.tau_grid
    f = curve.g2_values - 1.0
    crossings = t[idx] - f[idx] * (t[idx + 1] - t[idx]) / (f[idx + 1] - f[idx])
    half_period = float(np.mean(np.diff(crossings)))
    return math.pi / half_period


def _tuned_model(family: str, params: dict, U: float, J: float, dims) -> CavityModel:
    if family == "single":
        return build_single_kerr(U, params["F"], params["Delta"], dims[0])
    return build_coupled_cavities(U, J, complex(params["F"]), params["Delta"], dims)


_FAMILY_PARAMS = {"single": ("F", "Delta", "beta"), "coupled": ("F", "Delta")}

# Tuning guard: g2 is a ratio of steady-state traces, and its numerical
# uncertainty blows up as 1/n_ss^2 when the measured intensity cancels to
# zero, so a raw minimization dives into arithmetic noise (even below 0).
# Penalizing vanishing intensity keeps the search on working points whose
# g2 is certifiable well beyond the accuracy anyone reads off the curves.
_CERTIFIABILITY_GUARD = 2e-8

_TAU_PROBE = np.linspace(0.0, 20.0, 201)


def tune_for_antibunching(
    model_family: str,
    free_params: tuple[str, ...] | None = None,
    U: float = 0.01,
    J: float = 6.2,
    dims: tuple[int, ...] | None = None,
    tune_dims: tuple[int, ...] | None = None,
) -> dict:
    """Minimize g2(0) over the family's free parameters.

    single:  (F, Delta, beta) with the measurement displaced by beta;
    coupled: (F, Delta), bare monitored mode.
    Parameter search runs at tune_dims (defaults: final dims for single,
    (8, 8) for coupled, whose steady-state solves are much costlier) and the
    reported g2 is re-evaluated at dims.  Returns the parameter set, the
    achieved g2(0), and the mix dict to pass to g2_tau.
    """
    if model_family not in _FAMILY_PARAMS:
        raise ValueError(f"unknown model family {model_family!r}")
    if free_params is not None and tuple(free_params) != _FAMILY_PARAMS[model_family]:
        raise ValueError(
            f"family {model_family!r} tunes exactly {_FAMILY_PARAMS[model_family]}"
        )
    if dims is None:
        dims = (12,) if model_family == "single" else (12, 12)
    if tune_dims is None:
        tune_dims = dims if model_family == "single" else (8, 8)

    if model_family == "single":
        def objective(x) -> float:
            f_amp, delta, beta_re, beta_im = x
            model = build_single_kerr(U, f_amp, delta, tune_dims[0])
            g2, n_ss = _g2_and_intensity(model, {"beta": complex(beta_re, beta_im)}, None)
            return g2 + _CERTIFIABILITY_GUARD / (n_ss * n_ss)

        # Seed beta just short of the linear-response cancellation point
        # (exact cancellation leaves no measured intensity and g2 undefined).
        # The unconstrained minimum sits on a detuned branch whose curve
        # rings above 1; this family exists to show a curve that never
        # exceeds 1 + 1e-6, so when the free winner rings, re-polish within
        # the near-resonant slab where the curve rises monotonically.
        def polish_from(seeds, bounds):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                scored = [
                    optimize.refine_min(objective, s, bounds, fatol=1e-9, maxfev=600)
                    for s in seeds
                ]
            x0, _ = min(scored, key=lambda pair: pair[1])
            return optimize.refine_min(objective, x0, bounds, maxfev=2000)

        def rings(x) -> bool:
            probe = build_single_kerr(U, float(x[0]), float(x[1]), dims[0])
            curve = g2_tau(probe, {"beta": complex(x[2], x[3])}, _TAU_PROBE)
            return bool(np.max(curve.g2_values) > 1.0 + 1e-6)

        f_seeds = (0.05, 0.12, 0.2, 0.3)
        def seed(f_amp, delta):
            alpha = -1j * f_amp / (0.5 + 1j * delta)
            return (f_amp, delta, -0.95 * alpha.real, -0.95 * alpha.imag)

        bounds = [(0.01, 1.0), (-2.0, 2.0), (-3.0, 3.0), (-3.0, 3.0)]
        x, _ = polish_from(
            [seed(f, d) for f in f_seeds for d in (-0.2, 0.0, 0.2)], bounds
        )
        if rings(x):
            slab = [(0.01, 1.0), (-0.05, 0.05), (-3.0, 3.0), (-3.0, 3.0)]
            x_res, _ = polish_from([seed(f, 0.0) for f in f_seeds], slab)
            if rings(x_res):
                warnings.warn("no tuned single-cavity point had a non-ringing curve")
            else:
                x = x_res
        params = {"F": float(x[0]), "Delta": float(x[1]), "beta": complex(x[2], x[3])}
        mix = {"beta": params["beta"]}
        final = build_single_kerr(U, params["F"], params["Delta"], dims[0])
        achieved = static_g2(final, mix=mix)
        return {**params, "U": U, "g2": achieved, "mix": mix, "dims": dims}

    # The coupled family has no homodyne dial, but the drive amplitude still
    # scales the measured intensity (n_ss ~ F^2, strongly suppressed by the
    # normal-mode splitting), and g2 is F-independent to leading order, so a
    # raw minimization drifts into the noise pit at vanishing F.  Bounding F
    # from below keeps the intensity certifiable and costs no g2.
    def objective(x) -> float:
        f_amp, delta = x
        model = build_coupled_cavities(U, J, f_amp, delta, tune_dims)
        return static_g2(model, mix=None)

    best = None
    for delta in np.linspace(-1.0, 1.0, 9):
        val = objective((0.05, delta))
        if best is None or val < best[1]:
            best = ((0.05, float(delta)), val)
    # fatol matches the arithmetic noise floor of the g2 trace ratio at this
    # family's intensities (n_ss ~ 1e-7 gives ~1e-6 absolute): refining the
    # razor-sharp interference dip below that would chase noise, not physics.
    x, val = optimize.refine_min(
        objective, best[0], bounds=[(0.04, 0.5), (-2.0, 2.0)],
        fatol=2e-6, maxfev=400,
    )
    params = {"F": float(x[0]), "Delta": float(x[1])}
    final = build_coupled_cavities(U, J, params["F"], params["Delta"], dims)
    achieved = static_g2(final, mix=None)
    return {**params, "U": U, "J": J, "g2": achieved, "mix": None, "dims": dims}
