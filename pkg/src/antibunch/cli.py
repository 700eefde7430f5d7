"""Command-line front end: ad-hoc g2 evaluation, figure datasets, selftest.

Exit codes: 0 success, 2 undefined g2 (output below the intensity floor),
3 configuration error, 4 selftest failure.
"""

from __future__ import annotations

import argparse
import inspect
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import beamsplitter, figures, fock, lindblad, states
from .beamsplitter import BeamsplitterParams
from .errors import AntibunchError, ConfigError, TruncationError, VacuumOutputError

# kind -> required fields (every spec may also carry an optional "dim")
_STATE_FIELDS = {
    "fock": {"n"},
    "coherent": {"alpha"},
    "phase_modified": {"alpha"},
    "kerr_coherent": {"alpha", "chi_t"},
    "vacuum_two_photon": {"c2"},
    "cat": {"alpha_sch", "parity"},
    "squeezed_vacuum": {"xi"},
    "squeezed_coherent": {"alpha", "xi"},
}


def _as_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{field!r} must be a number or an [re, im] pair, got {value!r}")


def build_state(spec: dict, dim_override: int | None = None) -> fock.FockVector:
    """Construct a pure state from a JSON spec; unknown keys are rejected."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"state spec must be an object with a 'kind', got {spec!r}")
    d = dict(spec)
    kind = d.pop("kind")
    if kind not in _STATE_FIELDS:
        raise ConfigError(f"unknown state kind {kind!r}; known: {sorted(_STATE_FIELDS)}")
    required = _STATE_FIELDS[kind]
    unknown = set(d) - required - {"dim"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {kind!r} state spec")
    missing = required - set(d)
    if missing:
        raise ConfigError(f"missing keys {sorted(missing)} in {kind!r} state spec")
    dim = dim_override if dim_override is not None else d.get("dim")

    if kind == "fock":
        n = int(d["n"])
        return fock.basis(dim or max(n + 1, 4), n)
    if kind == "coherent":
        alpha = _as_complex(d["alpha"], "alpha")
        return states.coherent(alpha, dim or fock.default_dim(alpha))
    if kind == "phase_modified":
        alpha = _as_complex(d["alpha"], "alpha")
        return states.phase_modified_coherent(alpha, dim or fock.default_dim(alpha))
    if kind == "kerr_coherent":
        alpha = _as_complex(d["alpha"], "alpha")
        params = states.KerrParams(alpha=alpha, chi_t=float(d["chi_t"]))
        return states.kerr_coherent(params, dim or fock.default_dim(alpha))
    if kind == "vacuum_two_photon":
        return states.vacuum_two_photon(float(d["c2"]), dim or 3)
    if kind == "cat":
        alpha_sch = _as_complex(d["alpha_sch"], "alpha_sch")
        params = states.CatParams(alpha_sch=alpha_sch, parity=int(d["parity"]))
        return states.cat_state(params, dim or fock.default_dim(alpha_sch))
    if kind == "squeezed_vacuum":
        xi = _as_complex(d["xi"], "xi")
        return states.squeezed_vacuum(xi, dim or max(24, math.ceil(20 * (1 + abs(xi)))))
    xi = _as_complex(d["xi"], "xi")
    alpha = _as_complex(d["alpha"], "alpha")
    default = max(fock.default_dim(alpha), math.ceil(20 * (1 + abs(xi))))
    return states.squeezed_coherent(alpha, xi, dim or default)


def _load_config(path: Path | None) -> dict:
    if path is None:
        raise ConfigError("this command requires --config FILE")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _cmd_g2(args) -> int:
    cfg = _load_config(args.config)
    if "state" in cfg:
        unknown = set(cfg) - {"state"}
        if unknown:
            raise ConfigError(f"unknown top-level keys {sorted(unknown)} beside 'state'")
        psi = build_state(cfg["state"], args.dim)
        g2 = beamsplitter.g2_from_coeffs(psi)
        p_n = psi.probabilities()
        n_mean = float(np.arange(p_n.size) @ p_n)
    else:
        required = {"state_a", "state_b", "beamsplitter"}
        unknown = set(cfg) - required
        if unknown:
            raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
        missing = required - set(cfg)
        if missing:
            raise ConfigError(f"missing top-level keys {sorted(missing)}")
        bs = cfg["beamsplitter"]
        if not isinstance(bs, dict) or set(bs) - {"R", "phi"} or "R" not in bs:
            raise ConfigError("beamsplitter spec must be {'R': ..., 'phi': ...}")
        params = BeamsplitterParams(R=float(bs["R"]), phi=float(bs.get("phi", 0.0)))
        psi_a = build_state(cfg["state_a"], args.dim)
        psi_b = build_state(cfg["state_b"], args.dim)
        g2, n_mean = beamsplitter.output_g2(psi_a, psi_b, params)
        joint = beamsplitter.mix(psi_a, psi_b, params)
        p_n = np.diag(fock.partial_trace_a(joint).mat).real
    report = {
        "g2": float(g2),
        "n_mean": float(n_mean),
        "p_n": [float(p) for p in p_n],
    }
    print(json.dumps(report, indent=2 if args.pretty else None))
    return 0


def _dim_override_kwargs(builder, dim: int | None) -> dict:
    if dim is None:
        return {}
    sig = inspect.signature(builder)
    for name in ("dim", "dim_a", "dim_single"):
        if name in sig.parameters:
            return {name: dim}
    return {}


def _cmd_figure(args) -> int:
    if args.name not in figures.FIGURES:
        raise ConfigError(f"unknown figure {args.name!r}; known: {sorted(figures.FIGURES)}")
    builder = figures.FIGURES[args.name]
    overrides = {}
    if args.config is not None:
        overrides = _load_config(args.config)
        allowed = set(inspect.signature(builder).parameters)
        unknown = set(overrides) - allowed
        if unknown:
            raise ConfigError(
                f"unknown {args.name} parameters {sorted(unknown)}; accepted: {sorted(allowed)}"
            )
    overrides.update(_dim_override_kwargs(builder, args.dim))
    result = builder(**overrides)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{result.name}.csv"
        figures.write_csv(csv_path, result.columns, result.rows)
        meta_path = out_dir / f"{result.name}.meta.json"
        meta_path.write_text(json.dumps(result.meta, indent=2) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write output: {exc}") from exc
    print(f"wrote {csv_path} and {meta_path}")
    return 0


# ----------------------------------------------------------------- selftest

def _selftest_checks(dim_override: int | None):
    rng = np.random.default_rng(7)

    def check_ladder():
        dim = dim_override or 24
        a = fock.annihilation(dim)
        comm = a @ a.conj().T - a.conj().T @ a
        resid = np.max(np.abs(comm[: dim - 1, : dim - 1] - np.eye(dim - 1)))
        return resid < 1e-10, f"commutator residual {resid:.2e}"

    def check_displacement_unitary():
        alpha = 1.0
        dim = dim_override or fock.default_dim(alpha)
        u = fock.displacement(alpha, dim)
        resid = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
        return resid < 1e-8, f"unitarity residual {resid:.2e} at dim {dim}"

    def check_squeeze_unitary():
        dim = dim_override or 32
        u = fock.squeeze(0.5, dim)
        resid = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
        return resid < 1e-8, f"unitarity residual {resid:.2e} at dim {dim}"

    def check_normalize_idempotent():
        raw = rng.normal(size=12) + 1j * rng.normal(size=12)
        once = fock.FockVector(raw).normalize()
        twice = once.normalize()
        ok = np.array_equal(once.amps, twice.amps)
        return ok, "normalize(normalize(x)) == normalize(x) exactly"

    def check_coeff_vs_operator():
        dim = 8
        a = fock.annihilation(dim)
        worst = 0.0
        for _ in range(20):
            psi = fock.FockVector(rng.normal(size=dim) + 1j * rng.normal(size=dim)).normalize()
            num = fock.expectation(psi, a.conj().T @ a.conj().T @ a @ a).real
            den = fock.expectation(psi, a.conj().T @ a).real
            worst = max(worst, abs(beamsplitter.g2_from_coeffs(psi) - num / den**2))
        return worst < 1e-12, f"max |coeff - operator| = {worst:.2e}"

    def check_hom():
        dim = 6
        joint = beamsplitter.mix(
            fock.basis(dim, 1), fock.basis(dim, 1), BeamsplitterParams(R=0.5)
        )
        coincidence = abs(joint.amps[1 * dim + 1]) ** 2
        return coincidence < 1e-10, f"|1,1> coincidence {coincidence:.2e}"

    def check_heisenberg():
        resid = beamsplitter.heisenberg_residual(
            BeamsplitterParams(R=0.37, phi=0.31), 10, 10
        )
        return resid < 1e-9, f"mode-map residual {resid:.2e}"

    def check_coherent_baseline():
        worst = 0.0
        for _ in range(3):
            r_refl, phi = rng.uniform(0.05, 0.95), rng.uniform(0.0, 2.0)
            alpha = rng.uniform(0.1, 0.6)
            g2, _ = beamsplitter.output_g2(
                states.coherent(alpha, 20),
                states.coherent(alpha * 0.7, 20),
                BeamsplitterParams(R=r_refl, phi=phi),
            )
            worst = max(worst, abs(g2 - 1.0))
        return worst < 1e-8, f"max |g2 - 1| = {worst:.2e}"

    def check_energy_conservation():
        dim = 12
        worst = 0.0
        for _ in range(3):
            amps_a = np.zeros(dim, dtype=complex)
            amps_b = np.zeros(dim, dtype=complex)
            amps_a[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
            amps_b[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi_a = fock.FockVector(amps_a).normalize()
            psi_b = fock.FockVector(amps_b).normalize()
            joint = beamsplitter.mix(psi_a, psi_b, BeamsplitterParams(R=0.3, phi=0.7))
            p = np.abs(joint.amps) ** 2
            na = p @ np.repeat(np.arange(dim), dim)
            nb = p @ np.tile(np.arange(dim), dim)
            worst = max(worst, abs(na + nb - psi_a.mean_n() - psi_b.mean_n()))
        return worst < 1e-9, f"max photon-number drift {worst:.2e}"

    def check_two_photon_g2():
        g2 = beamsplitter.g2_from_coeffs(states.vacuum_two_photon(0.5))
        return abs(g2 - 2.0) < 1e-12, f"c2=0.5 gives g2 = {g2:.15f}"

    def check_mix_vs_moments():
        dim = 12
        worst = 0.0
        for _ in range(3):
            amps_a = np.zeros(dim, dtype=complex)
            amps_b = np.zeros(dim, dtype=complex)
            amps_a[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
            amps_b[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi_a = fock.FockVector(amps_a).normalize()
            psi_b = fock.FockVector(amps_b).normalize()
            params = BeamsplitterParams(R=0.22, phi=1.3)
            g2_joint, n_joint = beamsplitter.output_g2(psi_a, psi_b, params)
            g2_fast, n_fast = beamsplitter.output_moments(psi_a, psi_b, params)
            worst = max(worst, abs(g2_joint - g2_fast), abs(n_joint - n_fast))
        return worst < 1e-10, f"joint-vs-moment discrepancy {worst:.2e}"

    def check_linear_cavity():
        model = lindblad.build_single_kerr(0.0, 0.1, 0.3, 10)
        rho = lindblad.steady_state(model).mat
        a_mean = np.trace(fock.annihilation(10) @ rho)
        target = -1j * 0.1 / (0.5 + 1j * 0.3)
        err = abs(a_mean - target)
        return err < 1e-8, f"driven-cavity response error {err:.2e}"

    return [
        ("ladder_commutator", check_ladder),
        ("displacement_unitarity", check_displacement_unitary),
        ("squeeze_unitarity", check_squeeze_unitary),
        ("normalize_idempotent", check_normalize_idempotent),
        ("coeff_vs_operator_g2", check_coeff_vs_operator),
        ("hom_coincidence", check_hom),
        ("heisenberg_mode_map", check_heisenberg),
        ("coherent_baseline", check_coherent_baseline),
        ("energy_conservation", check_energy_conservation),
        ("two_photon_g2", check_two_photon_g2),
        ("mix_vs_moments", check_mix_vs_moments),
        ("linear_cavity_response", check_linear_cavity),
    ]


def _cmd_selftest(args) -> int:
    t0 = time.perf_counter()
    failures = 0
    for name, check in _selftest_checks(args.dim):
        try:
            ok, detail = check()
        except AntibunchError as exc:
            ok, detail = False, str(exc)
        except ValueError as exc:
            ok, detail = False, str(exc)
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{status} {name}: {detail}")
    elapsed = time.perf_counter() - t0
    print(f"{'OK' if failures == 0 else 'FAILED'} ({failures} failures, {elapsed:.2f} s)")
    return 0 if failures == 0 else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antibunch",
        description="Photon-statistics toolbox: g2 of mixed/engineered states, "
        "figure datasets, and a fast invariant selftest.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_g2 = sub.add_parser("g2", help="g2(0) of a state or a beamsplitter-mixed pair")
    p_fig = sub.add_parser("figure", help="write <name>.csv and <name>.meta.json")
    p_fig.add_argument("name", help="one of: " + ", ".join(sorted(figures.FIGURES)))
    p_self = sub.add_parser("selftest", help="fast invariant suite")
    for p in (p_g2, p_fig, p_self):
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--dim", type=int, help="truncation override for every mode")
        p.add_argument("--pretty", action="store_true", help="indent JSON output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "g2":
            return _cmd_g2(args)
        if args.command == "figure":
            return _cmd_figure(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except VacuumOutputError as exc:
        print(f"undefined g2: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
