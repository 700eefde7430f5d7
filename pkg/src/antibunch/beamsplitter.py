"""Lossless two-mode beamsplitter: mixing unitary and output-mode statistics.

The Heisenberg map is fixed to

    A = sqrt(T) a + sqrt(R) e^{i phi pi} b
    B = -sqrt(R) a + sqrt(T) e^{i phi pi} b

with phi expressed in units of pi throughout.  The Schroedinger unitary is
realized as a number-operator phase rotation on mode b followed by the real
rotation of angle arccos(sqrt(T)); both factors are exactly unitary after
truncation, and the rotation conserves total photon number exactly, so no
re-truncation happens after mixing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import VacuumOutputError
from .fock import FockVector, TwoModeState, annihilation, lift_a, lift_b

# Mean photon number below which g2 is reported as an error, not a number.
INTENSITY_FLOOR = 1e-12


@dataclass(frozen=True)
class BeamsplitterParams:
    """Reflectance R (transmittance T = 1 - R) and phase phi in units of pi."""

    R: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.R <= 1.0:
            raise ValueError(f"reflectance must lie in [0, 1], got {self.R}")

    @property
    def T(self) -> float:
        return 1.0 - self.R

    @property
    def phase_rad(self) -> float:
        return math.pi * self.phi


@lru_cache(maxsize=64)
def _rotation_eig(dim_a: int, dim_b: int):
    # Hermitian form of the rotation generator i(a^dag b - a b^dag); its
    # eigenbasis turns every exp(theta (a^dag b - a b^dag)) into two dense
    # matvecs, which is what keeps 101x101 parameter sweeps cheap.
    a = annihilation(dim_a)
    b = annihilation(dim_b)
    k = np.kron(a.conj().T, b) - np.kron(a, b.conj().T)
    evals, vecs = np.linalg.eigh(1j * k)
    evals.setflags(write=False)
    vecs.setflags(write=False)
    return evals, vecs


@lru_cache(maxsize=64)
def _mode_a_occupations(dim_a: int, dim_b: int) -> np.ndarray:
    na = np.repeat(np.arange(dim_a, dtype=float), dim_b)
    na.setflags(write=False)
    return na


@lru_cache(maxsize=64)
def _mode_b_occupations(dim_a: int, dim_b: int) -> np.ndarray:
    nb = np.tile(np.arange(dim_b, dtype=float), dim_a)
    nb.setflags(write=False)
    return nb


def bs_unitary(params: BeamsplitterParams, dim_a: int, dim_b: int) -> np.ndarray:
    """Dense (dim_a*dim_b)^2 mixing unitary in the joint number basis."""
    evals, vecs = _rotation_eig(dim_a, dim_b)
    theta = math.acos(min(1.0, math.sqrt(params.T)))
    rot = (vecs * np.exp(-1j * theta * evals)) @ vecs.conj().T
    phase = np.exp(1j * params.phase_rad * _mode_b_occupations(dim_a, dim_b))
    return rot * phase[np.newaxis, :]


def _mixed_amps(amps_a: np.ndarray, amps_b: np.ndarray, params: BeamsplitterParams) -> np.ndarray:
    dim_a, dim_b = amps_a.size, amps_b.size
    evals, vecs = _rotation_eig(dim_a, dim_b)
    psi = np.kron(amps_a, amps_b)
    psi = psi * np.exp(1j * params.phase_rad * _mode_b_occupations(dim_a, dim_b))
    theta = math.acos(min(1.0, math.sqrt(params.T)))
    return vecs @ (np.exp(-1j * theta * evals) * (vecs.conj().T @ psi))


def mix(state_a: FockVector, state_b: FockVector, params: BeamsplitterParams) -> TwoModeState:
    """Send psi_a (x) psi_b through the splitter; dims may differ per mode."""
    out = _mixed_amps(state_a.amps, state_b.amps, params)
    return TwoModeState(out, state_a.dim, state_b.dim)


def _weighted_g2(psi: np.ndarray, occ: np.ndarray) -> tuple[float, float]:
    p = np.abs(psi) ** 2
    n_mean = float(p @ occ)
    if n_mean < INTENSITY_FLOOR:
        raise VacuumOutputError(
            f"output intensity {n_mean:.3e} below floor {INTENSITY_FLOOR:g}; g2 undefined"
        )
    numerator = float(p @ (occ * (occ - 1.0)))
    return numerator / (n_mean * n_mean), n_mean


def output_g2(
    state_a: FockVector, state_b: FockVector, params: BeamsplitterParams
) -> tuple[float, float]:
    """(g2, n_mean) of output mode A.

    g2 = <A+ A+ A A> / <A+ A>^2; both moments are diagonal in the joint
    number basis, so only one mixing matvec is needed per call.
    """
    psi = _mixed_amps(state_a.amps, state_b.amps, params)
    return _weighted_g2(psi, _mode_a_occupations(state_a.dim, state_b.dim))


def output_g2_b(
    state_a: FockVector, state_b: FockVector, params: BeamsplitterParams
) -> tuple[float, float]:
    """(g2, n_mean) of the complementary output mode B."""
    psi = _mixed_amps(state_a.amps, state_b.amps, params)
    return _weighted_g2(psi, _mode_b_occupations(state_a.dim, state_b.dim))


def g2_from_coeffs(coeffs) -> float:
    """Equal-time g2 from photon-number amplitudes.

    g2 = sum n(n-1)|c_n|^2 / (sum n|c_n|^2)^2, the coefficient form of the
    operator expression <a+ a+ a a>/<a+ a>^2 on a pure state.
    """
    c = coeffs.amps if isinstance(coeffs, FockVector) else np.asarray(coeffs, dtype=complex)
    p = np.abs(c) ** 2
    total = p.sum()
    if total == 0.0:
        raise VacuumOutputError("all-zero amplitude list; g2 undefined")
    p = p / total
    n = np.arange(p.size, dtype=float)
    n_mean = float(p @ n)
    if n_mean < INTENSITY_FLOOR:
        raise VacuumOutputError(
            f"mean photon number {n_mean:.3e} below floor {INTENSITY_FLOOR:g}; g2 undefined"
        )
    return float(p @ (n * (n - 1.0))) / (n_mean * n_mean)


def _ladder_moments(amps: np.ndarray) -> np.ndarray:
    """3x3 table m[p, q] = <a+^p a^q> on a pure single-mode state.

    The truncated lowering operator acts exactly on a truncated state, so
    these moments carry no truncation error beyond the state's own.
    """
    a = annihilation(amps.size)
    v0 = np.asarray(amps, dtype=complex)
    v1 = a @ v0
    v2 = a @ v1
    vecs = (v0, v1, v2)
    m = np.empty((3, 3), dtype=complex)
    for p in range(3):
        for q in range(3):
            m[p, q] = np.vdot(vecs[p], vecs[q])
    return m


def output_moments(
    state_a: FockVector, state_b: FockVector, params: BeamsplitterParams
) -> tuple[float, float]:
    """(g2, n_mean) of output mode A from factorized input moments.

    For product inputs every output moment of A = u a + v b (u = sqrt(T),
    v = sqrt(R) e^{i phi pi}) expands into products of single-mode moments,
    so the cost is linear in dim and independent of the joint-space size.
    Agrees with output_g2 to roundoff; exists because the joint space for a
    large coherent amplitude would be prohibitively big to rotate.
    """
    u = math.sqrt(params.T)
    v = math.sqrt(params.R) * np.exp(1j * params.phase_rad)
    ma = _ladder_moments(state_a.amps)
    mb = _ladder_moments(state_b.amps)
    n_mean = (
        u * u * ma[1, 1]
        + abs(v) ** 2 * mb[1, 1]
        + u * v * ma[1, 0] * mb[0, 1]
        + u * np.conj(v) * ma[0, 1] * mb[1, 0]
    ).real
    if n_mean < INTENSITY_FLOOR:
        raise VacuumOutputError(
            f"output intensity {n_mean:.3e} below floor {INTENSITY_FLOOR:g}; g2 undefined"
        )
    # A^2 = u^2 a^2 + 2uv ab + v^2 b^2 term degrees in (a, b):
    weights = (u * u, 2.0 * u * v, v * v)
    deg_a = (2, 1, 0)
    deg_b = (0, 1, 2)
    g2num = 0.0j
    for j in range(3):
        for k in range(3):
            g2num += (
                np.conj(weights[j])
                * weights[k]
                * ma[deg_a[j], deg_a[k]]
                * mb[deg_b[j], deg_b[k]]
            )
    return float(g2num.real) / (n_mean * n_mean), float(n_mean)


def heisenberg_residual(params: BeamsplitterParams, dim_a: int, dim_b: int) -> float:
    """Max deviation of U+ a U and U+ b U from the defining mode map.

    Restricted to joint sectors whose total photon number is complete under
    the truncation (N <= min(dim)-2), where the truncated rotation is exact.
    """
    u = bs_unitary(params, dim_a, dim_b)
    a2 = lift_a(annihilation(dim_a), dim_b)
    b2 = lift_b(annihilation(dim_b), dim_a)
    phase = np.exp(1j * params.phase_rad)
    sqrt_t, sqrt_r = math.sqrt(params.T), math.sqrt(params.R)
    res_a = u.conj().T @ a2 @ u - (sqrt_t * a2 + sqrt_r * phase * b2)
    res_b = u.conj().T @ b2 @ u - (-sqrt_r * a2 + sqrt_t * phase * b2)
    total = _mode_a_occupations(dim_a, dim_b) + _mode_b_occupations(dim_a, dim_b)
    keep = total <= min(dim_a, dim_b) - 2
    block = np.ix_(keep, keep)
    return max(np.max(np.abs(res_a[block])), np.max(np.abs(res_b[block])))
