"""Grid sweeps and derivative-free refinement of correlation objectives.

An objective is a pure function taking named scalar parameters and
returning (g2, n_mean).  Cells where g2 is undefined (vacuum output) are
stored as explicit markers, never fabricated numbers, and are excluded
from argmin.  Identical specs produce bit-identical results: evaluation
order is the deterministic row-major grid order.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import VacuumOutputError

Objective = Callable[..., tuple[float, float]]

# Figure pipelines register their objectives here so that a SweepSpec can
# name its objective and round-trip through the CLI JSON config.
OBJECTIVE_REGISTRY: dict[str, Objective] = {}


def register_objective(name: str, fn: Objective) -> None:
    OBJECTIVE_REGISTRY[name] = fn


def resolve_objective(objective) -> Objective:
    if callable(objective):
        return objective
    try:
        return OBJECTIVE_REGISTRY[objective]
    except KeyError:
        raise KeyError(f"unknown objective {objective!r}; registered: {sorted(OBJECTIVE_REGISTRY)}")


@dataclass(frozen=True)
class Axis:
    """One sweep axis: name, inclusive range, point count, linear or geometric."""

    name: str
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"axis {self.name}: count must be >= 1")
        if self.count > 1 and not self.lo < self.hi:
            raise ValueError(f"axis {self.name}: need lo < hi, got [{self.lo}, {self.hi}]")
        if self.spacing not in ("linear", "geom"):
            raise ValueError(f"axis {self.name}: spacing must be 'linear' or 'geom'")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo], dtype=float)
        if self.spacing == "geom":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    objective: str | Objective
    fixed: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    axis_values: tuple[np.ndarray, ...]
    g2: np.ndarray          # nan where undefined
    n_mean: np.ndarray      # nan where undefined
    defined: np.ndarray     # bool mask
    argmin: tuple[float, ...]
    min_g2: float
    n_at_min: float

    def argmin_indices(self) -> tuple[int, ...]:
        masked = np.where(self.defined, self.g2, np.inf)
        return np.unravel_index(int(np.argmin(masked)), self.g2.shape)


def sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the objective on the full Cartesian grid."""
    fn = resolve_objective(spec.objective)
    values = tuple(ax.values() for ax in spec.axes)
    shape = tuple(v.size for v in values)
    g2 = np.full(shape, np.nan)
    n_mean = np.full(shape, np.nan)
    defined = np.zeros(shape, dtype=bool)
    names = [ax.name for ax in spec.axes]
    for idx in itertools.product(*(range(s) for s in shape)):
        params = {name: float(vals[i]) for name, vals, i in zip(names, values, idx)}
        try:
            g2[idx], n_mean[idx] = fn(**params, **spec.fixed)
            defined[idx] = True
        except VacuumOutputError:
            pass
    if not defined.any():
        raise VacuumOutputError("g2 undefined on every grid cell")
    masked = np.where(defined, g2, np.inf)
    best = np.unravel_index(int(np.argmin(masked)), shape)
    argmin = tuple(float(vals[i]) for vals, i in zip(values, best))
    for arr in (g2, n_mean, defined):
        arr.setflags(write=False)
    return SweepResult(
        spec=spec,
        axis_values=values,
        g2=g2,
        n_mean=n_mean,
        defined=defined,
        argmin=argmin,
        min_g2=float(g2[best]),
        n_at_min=float(n_mean[best]),
    )


def spec_to_dict(spec: SweepSpec) -> dict:
    """JSON-ready form of a spec; requires a registry-named objective."""
    if not isinstance(spec.objective, str):
        raise ValueError("only registry-named objectives serialize to JSON")
    return {
        "axes": [
            {"name": ax.name, "lo": ax.lo, "hi": ax.hi, "count": ax.count, "spacing": ax.spacing}
            for ax in spec.axes
        ],
        "objective": spec.objective,
        "fixed": dict(spec.fixed),
    }


def spec_from_dict(d: dict) -> SweepSpec:
    axes = tuple(Axis(**a) for a in d["axes"])
    return SweepSpec(axes=axes, objective=d["objective"], fixed=dict(d.get("fixed", {})))


def refine_min(
    objective: Callable[[Sequence[float]], float],
    start: Sequence[float],
    bounds: Sequence[tuple[float, float]] | None = None,
    *,
    fatol: float = 1e-10,
    maxfev: int = 8000,
) -> tuple[tuple[float, ...], float]:
    """Simplex refinement from a grid argmin; never returns worse than start.

    The objective takes a parameter vector and returns scalar g2; undefined
    cells may raise VacuumOutputError and are treated as +inf.  Callers with
    expensive objectives can trade precision for budget via fatol/maxfev.
    """
    def guarded(x: np.ndarray) -> float:
        try:
            return float(objective(x))
        except VacuumOutputError:
            return np.inf

    x0 = np.asarray(start, dtype=float)
    f0 = guarded(x0)
    res = minimize(
        guarded,
        x0,
        method="Nelder-Mead",
        bounds=bounds,
        options={"xatol": 1e-5, "fatol": fatol, "maxiter": 4000, "maxfev": maxfev},
    )
    if not res.success:
        warnings.warn(f"refine_min stopped early: {res.message}; returning best found")
    if res.fun <= f0:
        return tuple(float(v) for v in res.x), float(res.fun)
    return tuple(float(v) for v in x0), f0


def min_curve(
    objective: str | Objective,
    scan: Axis,
    inner: Sequence[Axis],
    fixed: dict | None = None,
    refine: bool = True,
) -> list[tuple[float, float, float, tuple[float, ...]]]:
    """For each scan value: coarse inner grid, then simplex refinement.

    Returns (scan value, min g2, n_mean at min, inner argmin) tuples.
    """
    fn = resolve_objective(objective)
    fixed = dict(fixed or {})
    names = [ax.name for ax in inner]
    rows = []
    for s in scan.values():
        base = {scan.name: float(s), **fixed}
        spec = SweepSpec(axes=tuple(inner), objective=fn, fixed=base)
        coarse = sweep(spec)
        best_x, best_g2 = coarse.argmin, coarse.min_g2
        if refine:
            bounds = [(ax.lo, ax.hi) for ax in inner]
            best_x, best_g2 = refine_min(
                lambda x: fn(**dict(zip(names, map(float, x))), **base)[0],
                coarse.argmin,
                bounds=bounds,
            )
        n_at = fn(**dict(zip(names, best_x)), **base)[1]
        rows.append((float(s), float(best_g2), float(n_at), tuple(best_x)))
    return rows


def sensitivity(
    objective: Callable[[Sequence[float]], float],
    point: Sequence[float],
    step: float = 1e-4,
) -> float:
    """L2 norm of the central-difference gradient at a point."""
    x = np.asarray(point, dtype=float)
    grad = np.empty(x.size)
    for i in range(x.size):
        up, dn = x.copy(), x.copy()
        up[i] += step
        dn[i] -= step
        grad[i] = (objective(up) - objective(dn)) / (2.0 * step)
    return float(np.linalg.norm(grad))
