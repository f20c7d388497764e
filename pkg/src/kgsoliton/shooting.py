"""Topological shooting: select the unstable-mode amplitude d by bisection.

A trajectory is "trapped" at time t while

    |a+(t)| <= threshold(t) := (log 2)^{-2} eps^{3/2} (log(2+t))^2 / <t>.

The exit time T(d) is the first crossing; at an exit the unstable dynamics
makes the crossing outgoing (d/dt a+^2 >= nu a+^2 > 0), so the exit side
sign(a+) is well defined and flips between the bracket endpoints
d = +-(log 2)^{-2} eps^{3/2}, which saturate the threshold at t = 0.  The
intermediate value theorem then drives an interval bisection on d.

In IEEE doubles the attainable survival horizon is limited: a perturbation
delta_d of the selected amplitude grows like delta_d e^{nu t}, so halving
the bracket buys 1/nu * log 2 ~ 0.4 extra time units per probe and the
machine-epsilon floor of the bracket caps T(d*) near
log(threshold / (eps_mach |d*|)) / nu.  The bisection therefore terminates
either at t_goal or at the double-precision bracket floor, reporting the
final bracket as an interval (the selected d is not unique).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import SimState, SolverConfig, Trajectory, evolve, make_initial_state
from .poschl_teller import SolitonFrame


LOG2_INV_SQ = 1.0 / np.log(2.0) ** 2


class NoSignChange(RuntimeError):
    """Bracket endpoints exited to the same side."""


class SolverFailureAtExit(RuntimeError):
    """Trajectory ended by NaN; reported as solver failure, not as an exit."""


def default_bracket(eps: float) -> float:
    """Half-width (log 2)^{-2} eps^{3/2} of the shooting bracket."""
    return LOG2_INV_SQ * eps ** 1.5


def trapping_threshold(t, eps: float):
    """(log 2)^{-2} eps^{3/2} (log(2+t))^2 / <t>."""
    t = np.asarray(t, dtype=float)
    return default_bracket(eps) * np.log(2.0 + t) ** 2 / np.sqrt(1.0 + t ** 2)


def trapping_violation_time(times: np.ndarray, a_plus: np.ndarray,
                            eps: float) -> tuple[float, int] | None:
    """First time |a+| crosses the trapping threshold, with the exit side.

    Linear interpolation between frames locates the crossing; returns None
    when the whole trajectory stays trapped.  Frames must be dense enough
    that the first crossing is bracketed within one frame.
    """
    if not np.all(np.isfinite(a_plus)):
        raise SolverFailureAtExit("trajectory contains non-finite a+ values")
    excess = np.abs(a_plus) - trapping_threshold(times, eps)
    above = np.flatnonzero(excess > 0.0)
    if above.size == 0:
        return None
    k = int(above[0])
    side = int(np.sign(a_plus[k])) or +1
    if k == 0:
        return float(times[0]), side
    frac = excess[k - 1] / (excess[k - 1] - excess[k])
    T = float(times[k - 1] + frac * (times[k] - times[k - 1]))
    return T, side


def outgoing_check(times: np.ndarray, a_plus: np.ndarray, T: float,
                   nu: float = float(np.sqrt(3.0))) -> bool | None:
    """Check d/dt(a+^2) >= nu a+^2 > 0 at the exit time T.

    Finite differences on the recorded frames; returns None (not
    applicable) when a+ vanishes at T.
    """
    k = int(np.searchsorted(times, T))
    k = min(max(k, 1), len(times) - 1)
    sq = a_plus ** 2
    deriv = (sq[k] - sq[k - 1]) / (times[k] - times[k - 1])
    value = 0.5 * (sq[k] + sq[k - 1])
    if value == 0.0:
        return None
    return bool(deriv >= nu * value > 0.0)


@dataclass
class ProbeRecord:
    d: float
    exit_time: float | None
    exit_side: int | None
    survived: bool
    status: str
    outgoing: bool | None = None


@dataclass
class ShootingResult:
    d_star: float
    T_star: float
    survived: bool
    bracket: tuple[float, float]
    bracket_history: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    eps: float = 0.0
    termination: str = ""

    @property
    def final_width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def probe_trajectory(frame: SolitonFrame, phi0: np.ndarray, phi1: np.ndarray,
                     d: float, eps: float, cfg: SolverConfig,
                     stop_factor: float = 4.0) -> tuple[Trajectory, ProbeRecord]:
    """Run one trajectory at amplitude d, stopping shortly after the
    trapping exit (|a+| beyond stop_factor times the threshold)."""
    state0 = make_initial_state(frame, phi0, phi1, d)

    def stop(t: float, scal: dict) -> bool:
        return abs(scal["a_plus"]) > stop_factor * float(trapping_threshold(t, eps))

    traj = evolve(frame, state0, cfg, stop=stop)
    if traj.status == "nan":
        record = ProbeRecord(d=d, exit_time=None, exit_side=None,
                             survived=False, status="nan")
        return traj, record
    hit = trapping_violation_time(traj.times, traj.a_plus, eps)
    if hit is None:
        record = ProbeRecord(d=d, exit_time=None, exit_side=None,
                             survived=True, status=traj.status)
    else:
        T, side = hit
        record = ProbeRecord(d=d, exit_time=T, exit_side=side,
                             survived=False, status=traj.status,
                             outgoing=outgoing_check(traj.times, traj.a_plus, T,
                                                     frame.nu))
    return traj, record


def shoot(frame: SolitonFrame, phi0: np.ndarray, phi1: np.ndarray, eps: float,
          t_goal: float, max_iter: int, cfg: SolverConfig | None = None,
          bracket: float | None = None) -> ShootingResult:
    """Bisection on d maximizing the trapped time T(d).

    Terminates when a probe survives to t_goal, when max_iter midpoint
    probes are spent, or when the bracket width reaches the double-precision
    floor.  The endpoints must exit to opposite sides (they do for the
    default bracket, which saturates the threshold at t = 0).
    """
    if cfg is None:
        cfg = SolverConfig(dt=0.01, t_end=t_goal, output_stride=5)
    if cfg.t_end < t_goal:
        raise ValueError("solver window shorter than t_goal")
    B = bracket if bracket is not None else default_bracket(eps)

    probes: list[ProbeRecord] = []
    history: list[tuple[float, float]] = []

    def run(d: float) -> ProbeRecord:
        _, rec = probe_trajectory(frame, phi0, phi1, d, eps, cfg)
        if rec.survived and rec.exit_time is None:
            rec.exit_time = None
        probes.append(rec)
        return rec

    lo, hi = -B, B
    rec_lo, rec_hi = run(lo), run(hi)
    if rec_lo.status == "nan" or rec_hi.status == "nan":
        raise SolverFailureAtExit("endpoint probe failed with non-finite fields")
    if rec_lo.survived or rec_hi.survived:
        rec = rec_lo if rec_lo.survived else rec_hi
        return ShootingResult(d_star=rec.d, T_star=t_goal, survived=True,
                              bracket=(lo, hi), bracket_history=[(lo, hi)],
                              probes=probes, eps=eps, termination="t_goal")
    if rec_lo.exit_side == rec_hi.exit_side:
        raise NoSignChange(
            f"no sign change: both endpoints exit to side {rec_lo.exit_side:+d}")
    if rec_lo.exit_side > 0:
        lo, hi = hi, lo

    best_d, best_T = max(
        ((r.d, r.exit_time) for r in (rec_lo, rec_hi)), key=lambda p: p[1])
    history.append((min(lo, hi), max(lo, hi)))
    floor = 8.0 * np.finfo(float).eps * max(B, 1e-300)
    termination = "max_iter"
    for _ in range(max_iter):
        if abs(hi - lo) < floor:
            termination = "bracket_floor"
            break
        mid = 0.5 * (lo + hi)
        rec = run(mid)
        if rec.status == "nan":
            raise SolverFailureAtExit(f"probe at d={mid!r} failed")
        if rec.survived:
            best_d, best_T = mid, t_goal
            termination = "t_goal"
            break
        if rec.exit_time >= best_T:
            best_d, best_T = mid, rec.exit_time
        if rec.exit_side > 0:
            hi = mid
        else:
            lo = mid
        history.append((min(lo, hi), max(lo, hi)))
    else:
        termination = "max_iter"

    return ShootingResult(d_star=best_d, T_star=best_T,
                          survived=(termination == "t_goal"),
                          bracket=(min(lo, hi), max(lo, hi)),
                          bracket_history=history, probes=probes, eps=eps,
                          termination=termination)
