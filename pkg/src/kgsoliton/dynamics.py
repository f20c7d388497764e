"""Time evolution of even perturbations of the soliton.

The perturbation phi(t, x) = Phi(t, x) - Q(x) of the full field solves

    (d_t^2 + L) phi = 3 Q phi^2 + phi^3,

which is advanced in physical space as a semilinear wave equation: the flat
part u_tt = -(-d_x^2 + 1) u is propagated exactly in Fourier space, while
the attractive potential 6 sech^2 and the nonlinearity enter through
pointwise kicks (Strang splitting, order 2) or through an exponential
integrator (ETDRK4, order 4).  Spectral projections, the unstable/stable
mode split a = a+ + a-, and the Darboux-transformed variables (w, v, f)
are derived diagnostics of the same trajectory; the transformed equation is
checked as a residual, never evolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .grid import Grid, apply_multiplier, forward_ft, inverse_ft, spectral_derivative
from .poschl_teller import SolitonFrame, odd_part_norm, project_pc_even
from .darboux import d1d2_apply, j_apply


class SolverFailure(RuntimeError):
    """Raised when the evolution produces non-finite fields."""


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_end: float
    integrator: str = "strang"
    dealias: bool = True
    output_stride: int = 1
    store_fields: bool = False
    field_stride: int = 50
    # linearized flow (potential kept, nonlinearity off); with the unstable
    # mode projected out it is the only way to run trapped past the
    # exponential horizon, e.g. for long-time energy-conservation checks
    linearized: bool = False
    project_unstable: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.integrator not in ("strang", "etdrk4"):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.output_stride < 1 or self.field_stride < 1:
            raise ValueError("strides must be >= 1")

    def validate_box(self, grid: Grid, margin: float = 40.0) -> None:
        """Finite propagation speed <= 1: decay measurements are void after
        wraparound, so require L >= 2 t_end + margin."""
        if grid.L < 2.0 * self.t_end + margin:
            raise ValueError(
                f"box too small: L={grid.L:g} < 2*t_end + {margin:g} "
                f"= {2 * self.t_end + margin:g}")


@dataclass
class SimState:
    t: float
    phi: np.ndarray
    phi_t: np.ndarray


def mode_amplitudes(frame: SolitonFrame, state: SimState) -> dict[str, float]:
    """Unstable-direction coordinates: a = <Y0, phi>, its velocity, and the
    split a+ = (a + a'/nu)/2, a- = (a - a'/nu)/2 (so a = a+ + a- exactly)."""
    a = float(frame.grid.inner(frame.Y0, state.phi))
    a_dot = float(frame.grid.inner(frame.Y0, state.phi_t))
    a_plus = 0.5 * (a + a_dot / frame.nu)
    a_minus = 0.5 * (a - a_dot / frame.nu)
    return {"a": a, "a_dot": a_dot, "a_plus": a_plus, "a_minus": a_minus}


def make_initial_state(frame: SolitonFrame, phi0: np.ndarray, phi1: np.ndarray,
                       d: float, auto_project: bool = False,
                       orth_tol: float = 1e-6,
                       parity_tol: float = 1e-10) -> SimState:
    """State at t = 0 for data (phi0, phi1) + d (Y0, nu Y0).

    (phi0, phi1) must be even and satisfy the admissibility condition
    <Y0, nu phi0 + phi1> = 0 (so that a+(0) = d exactly).  A violation above
    orth_tol is rejected unless auto_project is set, in which case the
    offending component is removed from phi1 and the correction recorded on
    the returned state (attribute `orthogonality_correction`).
    """
    grid = frame.grid
    for name, f in (("phi0", phi0), ("phi1", phi1)):
        odd = odd_part_norm(grid, f)
        if odd > parity_tol * max(1.0, np.max(np.abs(f))):
            raise ValueError(f"{name} is not even: odd part {odd:.3e}")
    defect = float(grid.inner(frame.Y0, frame.nu * phi0 + phi1))
    correction = 0.0
    if abs(defect) > orth_tol:
        if not auto_project:
            raise ValueError(
                f"<Y0, nu phi0 + phi1> = {defect:.3e} violates admissibility "
                "(pass auto_project=True to remove it)")
        phi1 = phi1 - defect * frame.Y0
        correction = defect
    state = SimState(t=0.0, phi=phi0 + d * frame.Y0,
                     phi_t=phi1 + d * frame.nu * frame.Y0)
    state.orthogonality_correction = correction
    return state


def energy(frame: SolitonFrame, state: SimState) -> float:
    """Conserved energy of the full field Phi = Q + phi:

        E = int 1/2 (d_t Phi)^2 + 1/2 (d_x Phi)^2 + 1/2 Phi^2 - 1/4 Phi^4.
    """
    grid = frame.grid
    full = frame.Q + state.phi
    full_x = spectral_derivative(grid, full)
    density = (0.5 * state.phi_t ** 2 + 0.5 * full_x ** 2
               + 0.5 * full ** 2 - 0.25 * full ** 4)
    return float(grid.dx * np.sum(density))


def nonlinearity(frame: SolitonFrame, phi: np.ndarray) -> np.ndarray:
    """Right-hand side 3 Q phi^2 + phi^3."""
    return 3.0 * frame.Q * phi ** 2 + phi ** 3


class StrangStepper:
    """Kick-drift-kick splitting with the exact flat Klein-Gordon flow.

    The drift solves u_tt = -(-d_x^2 + 1) u exactly in Fourier space; the
    kick applies the potential force 6 sech^2 phi plus the nonlinearity to
    phi_t.  Exact linear propagation leaves no dispersion error to pollute
    decay-rate fits; the cubic products are dealiased by the 2/3 rule.
    """

    order = 2

    def __init__(self, frame: SolitonFrame, dt: float, dealias: bool = True,
                 linearized: bool = False):
        self.frame = frame
        self.dt = dt
        self.linearized = linearized
        grid = frame.grid
        xi_r = 2.0 * np.pi * np.fft.rfftfreq(grid.N, d=grid.dx)
        omega = np.sqrt(1.0 + xi_r ** 2)
        self._cos = np.cos(omega * dt)
        self._sinc = np.sin(omega * dt) / omega
        self._msin = -omega * np.sin(omega * dt)
        cutoff = (2.0 / 3.0) * xi_r[-1]
        self._mask = (xi_r <= cutoff).astype(float) if dealias else None
        self._pot = 6.0 * frame.sech2

    def _force(self, phi: np.ndarray) -> np.ndarray:
        f = self._pot * phi
        if not self.linearized:
            f = f + nonlinearity(self.frame, phi)
        if self._mask is not None:
            f = np.fft.irfft(self._mask * np.fft.rfft(f), n=self.frame.grid.N)
        return f

    def step(self, phi: np.ndarray, phi_t: np.ndarray):
        half = 0.5 * self.dt
        phi_t = phi_t + half * self._force(phi)
        ph = np.fft.rfft(phi)
        pt = np.fft.rfft(phi_t)
        ph, pt = (self._cos * ph + self._sinc * pt,
                  self._msin * ph + self._cos * pt)
        phi = np.fft.irfft(ph, n=self.frame.grid.N)
        phi_t = np.fft.irfft(pt, n=self.frame.grid.N)
        phi_t = phi_t + half * self._force(phi)
        return phi, phi_t


class ETDRK4Stepper:
    """Exponential time differencing RK4 on z = phi_t + i <D> phi.

    The first-order form z_t = i <D> z + F(phi), phi = <D>^{-1} Im z, has a
    diagonal purely-imaginary linear part; the phi-function weights are
    evaluated by the standard unit-circle contour averages.
    """

    order = 4

    def __init__(self, frame: SolitonFrame, dt: float, dealias: bool = True,
                 n_contour: int = 32, linearized: bool = False):
        self.frame = frame
        self.dt = dt
        self.linearized = linearized
        grid = frame.grid
        omega = np.sqrt(1.0 + grid.xi ** 2)
        self._omega = omega
        lin = 1j * omega * dt
        roots = np.exp(2j * np.pi * (np.arange(n_contour) + 0.5) / n_contour)
        lr = lin[:, None] + roots[None, :]
        self._E = np.exp(lin)
        self._E2 = np.exp(lin / 2.0)
        self._q = dt * ((np.exp(lr / 2.0) - 1.0) / lr).mean(1)
        self._f1 = dt * ((-4.0 - lr + np.exp(lr) * (4.0 - 3.0 * lr + lr ** 2))
                         / lr ** 3).mean(1)
        self._f2 = dt * ((2.0 + lr + np.exp(lr) * (lr - 2.0)) / lr ** 3).mean(1)
        self._f3 = dt * ((-4.0 - 3.0 * lr - lr ** 2 + np.exp(lr) * (4.0 - lr))
                         / lr ** 3).mean(1)
        self._mask = grid.dealias_mask() if dealias else None
        self._pot = 6.0 * frame.sech2

    def _nonlinear_hat(self, z_hat: np.ndarray) -> np.ndarray:
        z = np.fft.ifft(z_hat)
        phi = np.fft.ifft(np.fft.fft(z.imag) / self._omega).real
        f = self._pot * phi
        if not self.linearized:
            f = f + nonlinearity(self.frame, phi)
        f_hat = np.fft.fft(f)
        if self._mask is not None:
            f_hat = self._mask * f_hat
        return f_hat

    def step(self, phi: np.ndarray, phi_t: np.ndarray):
        grid = self.frame.grid
        lam_phi = np.fft.ifft(self._omega * np.fft.fft(phi)).real
        z_hat = np.fft.fft(phi_t + 1j * lam_phi)
        n0 = self._nonlinear_hat(z_hat)
        a = self._E2 * z_hat + self._q * n0
        na = self._nonlinear_hat(a)
        b = self._E2 * z_hat + self._q * na
        nb = self._nonlinear_hat(b)
        c = self._E2 * a + self._q * (2.0 * nb - n0)
        nc = self._nonlinear_hat(c)
        z_hat = (self._E * z_hat + self._f1 * n0 + 2.0 * self._f2 * (na + nb)
                 + self._f3 * nc)
        z = np.fft.ifft(z_hat)
        phi = np.fft.ifft(np.fft.fft(z.imag) / self._omega).real
        phi_t = z.real
        return phi, phi_t


def make_stepper(frame: SolitonFrame, cfg: SolverConfig):
    if cfg.integrator == "strang":
        return StrangStepper(frame, cfg.dt, cfg.dealias,
                             linearized=cfg.linearized)
    return ETDRK4Stepper(frame, cfg.dt, cfg.dealias,
                         linearized=cfg.linearized)


@dataclass
class Trajectory:
    """Recorded scalar series plus (optionally) field snapshots."""

    times: np.ndarray
    a: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    linf: np.ndarray
    l2: np.ndarray
    energy: np.ndarray
    status: str = "completed"
    field_times: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    field_velocities: list = field(default_factory=list)

    def final_state(self) -> tuple[float, np.ndarray, np.ndarray] | None:
        if not self.fields:
            return None
        return self.field_times[-1], self.fields[-1], self.field_velocities[-1]


def evolve(frame: SolitonFrame, state: SimState, cfg: SolverConfig,
           stop=None, validate_box: bool = True) -> Trajectory:
    """Advance the state to t_end, recording scalars every output_stride
    steps (always including t = 0 and the final time).

    stop(t, scalars) may end the run early (status 'stopped'); non-finite
    fields end it with status 'nan' and the series truncated to the last
    good frame.
    """
    if validate_box:
        cfg.validate_box(frame.grid)
    stepper = make_stepper(frame, cfg)
    n_steps = int(round(cfg.t_end / cfg.dt))
    phi, phi_t = state.phi.copy(), state.phi_t.copy()
    t0 = state.t

    times, a_s, ap_s, am_s, linf_s, l2_s, en_s = [], [], [], [], [], [], []
    ftimes, fphis, fvels = [], [], []
    status = "completed"

    def record(step_index: int, t: float) -> str | None:
        cur = SimState(t=t, phi=phi, phi_t=phi_t)
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(phi_t))):
            return "nan"
        scal = mode_amplitudes(frame, cur)
        times.append(t)
        a_s.append(scal["a"])
        ap_s.append(scal["a_plus"])
        am_s.append(scal["a_minus"])
        linf_s.append(float(np.max(np.abs(phi))))
        l2_s.append(frame.grid.norm2(phi))
        en_s.append(energy(frame, cur))
        due = step_index % (cfg.output_stride * cfg.field_stride) == 0
        if cfg.store_fields and (due or step_index == n_steps):
            ftimes.append(t)
            fphis.append(phi.copy())
            fvels.append(phi_t.copy())
        if stop is not None and stop(t, scal):
            return "stopped"
        return None

    outcome = record(0, t0)
    if outcome is None:
        for n in range(1, n_steps + 1):
            phi, phi_t = stepper.step(phi, phi_t)
            if cfg.project_unstable:
                phi = phi - frame.grid.inner(frame.Y0, phi) * frame.Y0
                phi_t = phi_t - frame.grid.inner(frame.Y0, phi_t) * frame.Y0
            if n % cfg.output_stride == 0 or n == n_steps:
                outcome = record(n, t0 + n * cfg.dt)
                if outcome is not None:
                    break
    status = outcome or "completed"
    return Trajectory(times=np.asarray(times), a=np.asarray(a_s),
                      a_plus=np.asarray(ap_s), a_minus=np.asarray(am_s),
                      linf=np.asarray(linf_s), l2=np.asarray(l2_s),
                      energy=np.asarray(en_s), status=status,
                      field_times=ftimes, fields=fphis, field_velocities=fvels)


# ---------------------------------------------------------------------------
# Derived (Darboux-transformed) variables and residual checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformedFields:
    w: np.ndarray
    w_t: np.ndarray
    v: np.ndarray
    f: np.ndarray
    pc_residual: float


def derive_transformed(frame: SolitonFrame, state: SimState) -> TransformedFields:
    """Compute w = D1 D2 Pc phi, the first-order variable
    v = (w - i <D>^{-1} w_t)/2, the profile f = e^{-i t <D>} v, and the
    residual of the reconstruction identity Pc phi = Pc J[w]."""
    grid = frame.grid
    pc_phi = project_pc_even(frame, state.phi)
    pc_phi_t = project_pc_even(frame, state.phi_t)
    w = d1d2_apply(grid, pc_phi)
    w_t = d1d2_apply(grid, pc_phi_t)
    inv_jd = 1.0 / np.sqrt(1.0 + grid.xi ** 2)
    v = 0.5 * (w - 1j * apply_multiplier(grid, inv_jd, w_t))
    f = inverse_ft(grid, np.exp(-1j * state.t * np.sqrt(1.0 + grid.xi ** 2))
                   * forward_ft(grid, v))
    recon = project_pc_even(frame, j_apply(grid, w))
    pc_residual = float(np.max(np.abs(pc_phi - recon)))
    return TransformedFields(w=w, w_t=w_t, v=v, f=f, pc_residual=pc_residual)


def ode_residual_aplus(frame: SolitonFrame, s1: SimState, s2: SimState) -> float:
    """Residual of (d_t - nu) a+ = (2 nu)^{-1} <Y0, 3 Q phi^2 + phi^3>,
    midpoint finite difference across two consecutive frames."""
    m1 = mode_amplitudes(frame, s1)
    m2 = mode_amplitudes(frame, s2)
    dt = s2.t - s1.t
    lhs = (m2["a_plus"] - m1["a_plus"]) / dt
    mid_aplus = 0.5 * (m1["a_plus"] + m2["a_plus"])
    rhs1 = float(frame.grid.inner(frame.Y0, nonlinearity(frame, s1.phi)))
    rhs2 = float(frame.grid.inner(frame.Y0, nonlinearity(frame, s2.phi)))
    rhs = frame.nu * mid_aplus + 0.5 * (rhs1 + rhs2) / (2.0 * frame.nu)
    return abs(lhs - rhs)


def flat_equation_residual(frame: SolitonFrame, s_prev: SimState,
                           s_mid: SimState, s_next: SimState) -> float:
    """Residual of the transformed flat equation

        (d_t^2 - d_x^2 + 1) w = D1 D2 (3 Q phi^2 + phi^3)

    with w_tt by centered differences across three equispaced frames."""
    grid = frame.grid
    dt = s_mid.t - s_prev.t
    w_p = d1d2_apply(grid, project_pc_even(frame, s_prev.phi))
    w_m = d1d2_apply(grid, project_pc_even(frame, s_mid.phi))
    w_n = d1d2_apply(grid, project_pc_even(frame, s_next.phi))
    w_tt = (w_n - 2.0 * w_m + w_p) / dt ** 2
    lhs = w_tt - spectral_derivative(grid, w_m, 2) + w_m
    rhs = d1d2_apply(grid, nonlinearity(frame, s_mid.phi))
    return float(np.max(np.abs(lhs - rhs)))
