"""Experiment driver: verify-identities, spectral, simulate, shoot, decay-fit.

Exit codes: 0 success (all internal tolerance checks pass), 1 tolerance or
bracket failure (each failure names the check and its measured value),
2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import diagnostics, darboux, fourier_kernels as fk, poschl_teller as pt
from .config import ConfigError, ExperimentConfig
from .cutoffs import SQRT3, adapted_cutoff, time_partition
from .dynamics import SolverConfig, SolverFailure, evolve, make_initial_state
from .grid import Grid, forward_ft, inverse_ft, make_grid, spectral_derivative
from .initial_data import make_family
from .shooting import (NoSignChange, SolverFailureAtExit, default_bracket,
                       probe_trajectory, shoot, trapping_threshold)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


class CsvWriter:
    """CSV with a deterministic '#' header block."""

    def __init__(self, path: str | None, cfg: ExperimentConfig, seed: int):
        self.lines: list[str] = []
        self.path = path
        self.add_comment(f"config_hash={cfg.config_hash()}")
        self.add_comment(f"grid.L={_fmt(cfg.grid_L)} grid.N={cfg.grid_N}")
        self.add_comment(f"cutoff.sharpness={cfg.cutoff_sharpness}")
        self.add_comment(f"seed={seed}")
        for key, value in cfg.canonical_items():
            self.add_comment(f"cfg {key}={value}")

    def add_comment(self, text: str) -> None:
        self.lines.append(f"# {text}")

    def add_row(self, *values) -> None:
        self.lines.append(",".join(_fmt(v) for v in values))

    def finish(self) -> None:
        text = "\n".join(self.lines) + "\n"
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verify-identities
# ---------------------------------------------------------------------------

def _identity_battery(grid: Grid, frame: pt.SolitonFrame, seed: int):
    """(name, residual, tolerance) triples covering the operator and kernel
    identities; each entry is independent and pure."""
    rng = np.random.default_rng(seed)
    x = grid.x
    sech = 1.0 / np.cosh(x)
    gauss = np.exp(-x ** 2)
    rnd = [darboux.random_schwartz_field(grid, rng) for _ in range(8)]

    def fft_roundtrip():
        u = rnd[0] + 1j * rnd[1]
        return np.max(np.abs(inverse_ft(grid, forward_ft(grid, u)) - u)) / np.max(np.abs(u))

    def plancherel():
        u = rnd[2]
        return abs(grid.norm2(u) - grid.spectral_norm2(forward_ft(grid, u)))

    def sech_hat():
        uhat = forward_ft(grid, sech)
        closed = np.sqrt(np.pi / 2.0) / np.cosh(np.pi * grid.xi / 2.0)
        return np.max(np.abs(uhat - closed))

    def eigen_y0():
        return np.max(np.abs(pt.apply_L(frame, frame.Y0) + 3.0 * frame.Y0))

    def eigen_y1():
        return np.max(np.abs(pt.apply_L(frame, frame.Y1)))

    def eigen_y2():
        return np.max(np.abs(pt.apply_L(frame, frame.Y2) - frame.Y2))

    def norm_y0():
        return abs(grid.norm2(frame.Y0) - 1.0)

    def norm_y1():
        return abs(grid.norm2(frame.Y1) - 1.0)

    def transmission_modulus():
        xi = rng.uniform(-30, 30, size=1000)
        return np.max(np.abs(np.abs(pt.transmission(xi)) - 1.0))

    def factorization_d2():
        u = rnd[3]
        lhs = darboux.d2_adjoint_apply(grid, darboux.d2_apply(grid, u))
        rhs = pt.apply_L(frame, u) + 3.0 * u
        return np.max(np.abs(lhs - rhs)) / np.max(np.abs(u))

    def factorization_d1():
        u = rnd[4]
        lhs = darboux.d1_apply(grid, darboux.d1_adjoint_apply(grid, u))
        rhs = -spectral_derivative(grid, u, 2) + u
        return np.max(np.abs(lhs - rhs)) / np.max(np.abs(u))

    def conjugation():
        u = rnd[5]
        lhs = darboux.d1d2_apply(grid, pt.apply_L(frame, u))
        w = darboux.d1d2_apply(grid, u)
        rhs = -spectral_derivative(grid, w, 2) + w
        return np.max(np.abs(lhs - rhs)) / np.max(np.abs(u))

    def right_inverse_i1():
        g = gauss
        return np.max(np.abs(darboux.d1_apply(grid, darboux.i1_apply(grid, g)) - g))

    def right_inverse_i2():
        g = gauss * (1.0 + x ** 2)
        return np.max(np.abs(darboux.d2_apply(grid, darboux.i2_apply(grid, g)) - g))

    def right_inverse_j():
        g = rnd[6]
        return (np.max(np.abs(darboux.d1d2_apply(grid, darboux.j_apply(grid, g)) - g))
                / np.max(np.abs(g)))

    def j_composition():
        g = rnd[7]
        lhs = darboux.j_apply(grid, g)
        rhs = darboux.i2_apply(grid, darboux.i1_apply(grid, g))
        return np.max(np.abs(lhs - rhs))

    def i2_of_z():
        return np.max(np.abs(darboux.i2_apply(grid, frame.Z) - frame.Y1))

    def reconstruction():
        f = sech
        w = darboux.d1d2_apply(grid, f)
        ic = grid.center_index
        fp = spectral_derivative(grid, f)
        rebuilt = darboux.reconstruct(frame, w, f[ic], fp[ic])
        return np.max(np.abs(rebuilt - f))

    def pc_reconstruction():
        f = gauss
        w = darboux.d1d2_apply(grid, f)
        lhs = pt.project_pc_even(frame, f)
        rhs = pt.project_pc_even(frame, darboux.j_apply(grid, w))
        return np.max(np.abs(lhs - rhs))

    def tilde_splits():
        return max(darboux.tilde_split_residuals(grid, gauss))

    def kernel_span():
        return max(np.max(np.abs(darboux.d1d2_apply(grid, frame.Y0))),
                   np.max(np.abs(darboux.d1d2_apply(grid, frame.Y1))))

    def adapted_partition():
        xi = np.array([0.0, 1.0, SQRT3, 10.0])
        worst = 0.0
        for n in (1, 5, 20):
            total = sum(adapted_cutoff(n, l, xi) for l in range(n + 1))
            worst = max(worst, float(np.max(np.abs(total - 1.0))))
        return worst

    def time_partition_sum():
        t = np.array([0.0, 3.0, 100.0, 1e6])
        total = sum(time_partition(n, t) for n in range(1, 31))
        return float(np.max(np.abs(total - 1.0)))

    def resonance_value():
        quad = pt.distorted_ft(frame, frame.quadratic_source(), SQRT3)
        return abs(quad - pt.resonance_constant())

    def alpha_combined_value():
        target = -3.0 * np.sqrt(np.pi) / 4.0 / np.cosh(SQRT3 * np.pi / 2.0)
        return abs(float(pt.alpha_combined(SQRT3)) - target)

    def alpha_grid_crosscheck():
        worst = 0.0
        for j in (1, 2, 3):
            grid_vals = pt.alpha_grid_ft(frame, j, np.array([0.0, 1.0, SQRT3]))
            closed = pt.alpha_ft(j, np.array([0.0, 1.0, SQRT3]))
            worst = max(worst, float(np.max(np.abs(grid_vals.real - closed))))
        return worst

    def resonance_poly_crosscheck():
        xi = np.array([0.0, 1.0, SQRT3])
        source = darboux.d1d2_apply(grid, frame.quadratic_source())
        from .grid import forward_ft_at
        grid_ft = forward_ft_at(grid, source, xi)
        return float(np.max(np.abs(grid_ft.real - pt.resonance_polynomial_ft(xi))))

    return [
        ("fft_roundtrip", fft_roundtrip, 1e-12),
        ("plancherel", plancherel, 1e-10),
        ("sech_hat_closed_form", sech_hat, 1e-10),
        ("eigen_Y0", eigen_y0, 1e-8),
        ("eigen_Y1", eigen_y1, 1e-8),
        ("eigen_Y2", eigen_y2, 1e-8),
        ("norm_Y0", norm_y0, 1e-8),
        ("norm_Y1", norm_y1, 1e-8),
        ("transmission_modulus", transmission_modulus, 1e-14),
        ("factorization_D2adjD2", factorization_d2, 1e-8),
        ("factorization_D1D1adj", factorization_d1, 1e-8),
        ("conjugation_identity", conjugation, 1e-7),
        ("right_inverse_I1", right_inverse_i1, 1e-8),
        ("right_inverse_I2", right_inverse_i2, 1e-8),
        ("right_inverse_J", right_inverse_j, 1e-7),
        ("J_equals_I2_I1", j_composition, 1e-10),
        ("I2_of_Z_is_Y1", i2_of_z, 1e-8),
        ("reconstruction_identity", reconstruction, 1e-8),
        ("pc_reconstruction", pc_reconstruction, 1e-7),
        ("tilde_splits", tilde_splits, 1e-8),
        ("kernel_span_Y0_Y1", kernel_span, 1e-9),
        ("adapted_partition_of_unity", adapted_partition, 1e-12),
        ("time_partition_of_unity", time_partition_sum, 1e-12),
        ("resonance_constant", resonance_value, 1e-6),
        ("alpha_combined_at_sqrt3", alpha_combined_value, 1e-12),
        ("alpha_grid_crosscheck", alpha_grid_crosscheck, 1e-7),
        ("resonance_poly_crosscheck", resonance_poly_crosscheck, 1e-7),
    ]


def run_verify_identities(cfg: ExperimentConfig, out: str | None, seed: int,
                          threads: int) -> int:
    grid = make_grid(cfg.grid_L, cfg.grid_N)
    frame = pt.SolitonFrame.build(grid)
    battery = _identity_battery(grid, frame, seed)
    writer = CsvWriter(out, cfg, seed)
    writer.add_row("identity_name", "max_residual", "tolerance", "status")

    def evaluate(entry):
        name, fn, tol = entry
        residual = float(fn())
        return name, residual, tol, "PASS" if residual < tol else "FAIL"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, battery))
    else:
        results = [evaluate(entry) for entry in battery]

    failures = 0
    for name, residual, tol, status in results:
        writer.add_row(name, residual, tol, status)
        if status == "FAIL":
            failures += 1
            print(f"FAIL {name}: residual {residual:.3e} >= tol {tol:.1e}",
                  file=sys.stderr)
    writer.finish()
    return EXIT_OK if failures == 0 else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------

def run_spectral(cfg: ExperimentConfig, out: str | None, seed: int) -> int:
    grid = make_grid(cfg.grid_L, cfg.grid_N)
    frame = pt.SolitonFrame.build(grid)
    writer = CsvWriter(out, cfg, seed)
    writer.add_row("record", "arg", "value_re", "value_im")
    for name, res in (("eigenresidual_Y0",
                       np.max(np.abs(pt.apply_L(frame, frame.Y0) + 3 * frame.Y0))),
                      ("eigenresidual_Y1",
                       np.max(np.abs(pt.apply_L(frame, frame.Y1)))),
                      ("eigenresidual_Y2",
                       np.max(np.abs(pt.apply_L(frame, frame.Y2) - frame.Y2)))):
        writer.add_row(name, 0.0, float(res), 0.0)
    for xi in np.linspace(0.0, 6.0, 25):
        T = complex(pt.transmission(xi))
        writer.add_row("transmission", float(xi), T.real, T.imag)
    value = pt.distorted_ft(frame, frame.quadratic_source(), SQRT3)
    closed = pt.resonance_constant()
    writer.add_row("resonance_constant_quadrature", SQRT3, value.real, value.imag)
    writer.add_row("resonance_constant_closed", SQRT3, closed.real, closed.imag)
    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _solver_config(cfg: ExperimentConfig, store_fields: bool = False) -> SolverConfig:
    return SolverConfig(dt=cfg.solver_dt, t_end=cfg.solver_t_end,
                        integrator=cfg.solver_integrator,
                        dealias=cfg.solver_dealias,
                        output_stride=cfg.solver_output_stride,
                        store_fields=store_fields)


def run_simulate(cfg: ExperimentConfig, out: str | None, seed: int) -> int:
    cfg.validate(needs_box_guard=True)
    grid = make_grid(cfg.grid_L, cfg.grid_N)
    frame = pt.SolitonFrame.build(grid)
    phi0, phi1 = make_family(frame, cfg.data_family, cfg.data_eps,
                             sigma=cfg.data_sigma, path=cfg.data_file or None)
    state = make_initial_state(frame, phi0, phi1, cfg.data_d)
    scfg = _solver_config(cfg, store_fields=True)
    traj = evolve(frame, state, scfg)
    if traj.status == "nan":
        print("solver failure: non-finite fields", file=sys.stderr)
        return EXIT_SOLVER

    writer = CsvWriter(out, cfg, seed)
    writer.add_row("t", "linf_phi", "l2_phi", "a_plus", "a_minus", "energy",
                   "local_decay_norm", "nt_norm_proxy")
    field_lookup = {t: i for i, t in enumerate(traj.field_times)}
    from .dynamics import SimState, derive_transformed
    for i, t in enumerate(traj.times):
        local = ""
        ntp = ""
        if t in field_lookup:
            k = field_lookup[t]
            st = SimState(t=t, phi=traj.fields[k], phi_t=traj.field_velocities[k])
            tf = derive_transformed(frame, st)
            local = diagnostics.local_decay_norm(grid, tf.v)
            ntp = diagnostics.nt_norm(grid, tf.f, t,
                                      sharpness=cfg.cutoff_sharpness,
                                      warn_resolution=False)
        writer.add_row(t, traj.linf[i], traj.l2[i], traj.a_plus[i],
                       traj.a_minus[i], traj.energy[i], local, ntp)
    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# shoot
# ---------------------------------------------------------------------------

def run_shoot(cfg: ExperimentConfig, out: str | None, seed: int) -> int:
    cfg.validate(needs_box_guard=False)
    if cfg.grid_L < 2.0 * cfg.shoot_t_goal + 40.0:
        raise ConfigError(
            f"box rule violated: grid.L={cfg.grid_L:g} < "
            f"2*shoot.t_goal + 40 = {2 * cfg.shoot_t_goal + 40:g}")
    grid = make_grid(cfg.grid_L, cfg.grid_N)
    frame = pt.SolitonFrame.build(grid)
    phi0, phi1 = make_family(frame, cfg.data_family, cfg.data_eps,
                             sigma=cfg.data_sigma, path=cfg.data_file or None)
    scfg = SolverConfig(dt=cfg.solver_dt, t_end=cfg.shoot_t_goal,
                        integrator=cfg.solver_integrator,
                        dealias=cfg.solver_dealias,
                        output_stride=cfg.solver_output_stride)
    bracket = cfg.shoot_bracket_override or None
    result = shoot(frame, phi0, phi1, cfg.data_eps, cfg.shoot_t_goal,
                   cfg.shoot_max_iter, cfg=scfg, bracket=bracket)
    writer = CsvWriter(out, cfg, seed)
    writer.add_comment(f"threshold(0)={_fmt(float(trapping_threshold(0.0, cfg.data_eps)))}")
    writer.add_comment(f"bracket_halfwidth={_fmt(bracket or default_bracket(cfg.data_eps))}")
    writer.add_row("record", "d", "exit_time", "exit_side", "survived", "status")
    for rec in result.probes:
        writer.add_row("probe", rec.d,
                       "" if rec.exit_time is None else rec.exit_time,
                       "" if rec.exit_side is None else rec.exit_side,
                       int(rec.survived), rec.status)
    writer.add_row("summary", result.d_star, result.T_star, "",
                   int(result.survived), result.termination)
    writer.add_row("bracket", result.bracket[0], result.bracket[1], "", "", "")
    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# decay-fit
# ---------------------------------------------------------------------------

def run_decay_fit(cfg: ExperimentConfig, out: str | None, seed: int,
                  source: str) -> int:
    times, linf, aminus = [], [], []
    with open(source, encoding="utf-8") as fh:
        header: list[str] | None = None
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            parts = line.strip().split(",")
            if header is None:
                header = parts
                continue
            row = dict(zip(header, parts))
            times.append(float(row["t"]))
            linf.append(float(row["linf_phi"]))
            aminus.append(float(row["a_minus"]))
    if not times:
        raise ConfigError(f"no data rows in {source}")
    times = np.asarray(times)
    linf = np.asarray(linf)
    aminus = np.asarray(aminus)
    eps = cfg.data_eps
    writer = CsvWriter(out, cfg, seed)
    writer.add_row("fit", "window_lo", "window_hi", "constant", "residual")
    fit = diagnostics.linf_decay_ratio(times, linf, eps)
    writer.add_row("linf_power_log", fit.window[0], fit.window[1],
                   fit.constant, fit.residual)
    early, late = diagnostics.a_minus_envelope(times, aminus, eps)
    writer.add_row("aminus_exponential", early.window[0], early.window[1],
                   early.constant, early.residual)
    writer.add_row("aminus_algebraic", late.window[0], late.window[1],
                   late.constant, late.residual)
    writer.finish()
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgsoliton",
        description="Numerical laboratory for soliton stability of the 1D "
                    "focusing cubic Klein-Gordon equation")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-identities")
    sub.add_parser("spectral")
    sub.add_parser("simulate")
    sub.add_parser("shoot")
    fit = sub.add_parser("decay-fit")
    fit.add_argument("--input", required=True, help="simulation CSV to fit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = (ExperimentConfig.from_file(args.config) if args.config
               else ExperimentConfig())
        cfg.seed = args.seed
        if args.command == "verify-identities":
            return run_verify_identities(cfg, args.out, args.seed, args.threads)
        if args.command == "spectral":
            return run_spectral(cfg, args.out, args.seed)
        if args.command == "simulate":
            return run_simulate(cfg, args.out, args.seed)
        if args.command == "shoot":
            return run_shoot(cfg, args.out, args.seed)
        if args.command == "decay-fit":
            return run_decay_fit(cfg, args.out, args.seed, args.input)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoSignChange as exc:
        print(f"shooting failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (SolverFailure, SolverFailureAtExit) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
