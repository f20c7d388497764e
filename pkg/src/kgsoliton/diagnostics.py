"""Measurable decay functionals: the adapted profile norm, dispersive and
local-decay envelopes, and the stable-coefficient envelope.

All fits are taken over dyadic time windows [2^j, 2^(j+1)], using the
per-window maximum before any regression; Klein-Gordon local norms
oscillate at the mass frequency and the window maxima are the robust
envelope observable.  Fits use only frames with t >= 1 and before the
wraparound guard time of the box.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cutoffs import adapted_cutoff, contributing_time_indices, littlewood_paley, time_partition
from .grid import Grid, apply_multiplier, forward_ft, inverse_ft, spectral_derivative


@dataclass(frozen=True)
class DecayFit:
    window: tuple[float, float]
    model: str
    constant: float
    residual: float
    details: dict = field(default_factory=dict)


def dyadic_window_maxima(times: np.ndarray, values: np.ndarray,
                         t_min: float, t_max: float) -> list[tuple[tuple[float, float], float]]:
    """Per-window maxima of |values| over dyadic windows inside [t_min, t_max]."""
    out = []
    left = t_min
    while left < t_max:
        right = min(2.0 * left, t_max)
        mask = (times >= left) & (times <= right)
        if np.any(mask):
            out.append(((left, right), float(np.max(np.abs(values[mask])))))
        left = right
        if right >= t_max:
            break
    return out


# ---------------------------------------------------------------------------
# Adapted profile norm
# ---------------------------------------------------------------------------

def resolvable_annulus_depth(grid: Grid, sharpness: int = 0) -> int:
    """Largest l whose annulus width 2^(-l-s) is still above the spectral
    resolution 2 pi / L."""
    return max(0, int(np.floor(np.log2(1.0 / (grid.dxi * 2.0 ** sharpness)))))


def profile_xi_derivative(grid: Grid, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(xi_sorted, d fhat / d xi) by centered lattice differences
    (one-sided at the lattice ends)."""
    order = np.argsort(grid.xi)
    xi = grid.xi[order]
    fhat = forward_ft(grid, f)[order]
    dfhat = np.gradient(fhat, grid.dxi)
    return xi, dfhat


def nt_norm(grid: Grid, f: np.ndarray, t: float, n_max: int = 30,
            sharpness: int = 0, warn_resolution: bool = True) -> float:
    """Two-term adapted norm of a profile at time t:

        ||<D>^2 f||_2  +  sup_{n, l} 2^{-l/2} tau_n(t)
                           || phi_l^(n)(xi) <xi>^2 d_xi fhat ||_2,

    the sup over the n with tau_n(t) > 0 (n <= n_max) and l <= n.  Annuli
    finer than the spectral resolution cannot be represented on the lattice;
    the sup is restricted to resolvable l (with a warning).
    """
    jap2 = 1.0 + grid.xi ** 2
    fhat = forward_ft(grid, f)
    energy_term = grid.spectral_norm2(jap2 * fhat)

    xi, dfhat = profile_xi_derivative(grid, f)
    weight = (1.0 + xi ** 2) * np.abs(dfhat)
    l_cap = resolvable_annulus_depth(grid, sharpness)
    sup_term = 0.0
    restricted = False
    for n in contributing_time_indices(t, n_max):
        for l in range(0, n + 1):
            if l > l_cap:
                restricted = True
                break
            cut = adapted_cutoff(n, l, xi, sharpness)
            term = (2.0 ** (-0.5 * l) * float(time_partition(n, t))
                    * float(np.sqrt(grid.dxi * np.sum((cut * weight) ** 2))))
            sup_term = max(sup_term, term)
    if restricted and warn_resolution:
        warnings.warn(
            f"adapted annuli below spectral resolution restricted to l <= {l_cap}",
            RuntimeWarning, stacklevel=2)
    return energy_term + sup_term


# ---------------------------------------------------------------------------
# Decay-envelope fits
# ---------------------------------------------------------------------------

def linf_decay_ratio(times: np.ndarray, linf: np.ndarray, eps: float,
                     t_min: float = 1.0, t_max: float | None = None) -> DecayFit:
    """sup_t <t>^{1/2} ||phi(t)||_inf / (eps log(2+t)) over the window,
    reported as the fitted constant; residual is the spread (max/min) of the
    per-dyadic-window suprema."""
    t_max = t_max if t_max is not None else float(times[-1])
    mask = (times >= t_min) & (times <= t_max)
    t = times[mask]
    ratio = np.sqrt(1.0 + t ** 2) ** 0.5 * linf[mask] / (eps * np.log(2.0 + t))
    windows = dyadic_window_maxima(t, ratio, t_min, t_max)
    maxima = np.array([m for _, m in windows])
    spread = float(maxima.max() / max(maxima.min(), 1e-300)) if maxima.size else np.inf
    return DecayFit(window=(t_min, t_max), model="power_log",
                    constant=float(np.max(ratio)), residual=spread,
                    details={"window_maxima": windows})


def local_decay_norm(grid: Grid, v: np.ndarray, variant: str = "dx",
                     weight_power: float = 1.0) -> float:
    """Weighted local norm of a (complex) field:

        variant 'dx':          || <x>^-a d_x v ||_{H^1},
        variant 'jD_minus_1':  || <x>^-a (<D> - 1) v ||_{H^1},

    with a = weight_power (the stronger-weight variants take a > 3/2).
    """
    weight = (1.0 + grid.x ** 2) ** (-0.5 * weight_power)
    if variant == "dx":
        core = spectral_derivative(grid, v)
    elif variant == "jD_minus_1":
        core = apply_multiplier(grid, np.sqrt(1.0 + grid.xi ** 2) - 1.0, v)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    h = weight * core
    hp = spectral_derivative(grid, h)
    return float(np.sqrt(grid.norm2(h) ** 2 + grid.norm2(hp) ** 2))


def a_minus_envelope(times: np.ndarray, a_minus: np.ndarray, eps: float,
                     nu: float = float(np.sqrt(3.0)),
                     early_window: tuple[float, float] = (0.0, 3.0),
                     late_start: float | None = None) -> tuple[DecayFit, DecayFit]:
    """Two-regime envelope of the stable coefficient:

        |a-(t)| <= C1 e^{-nu t} eps + C2 (log(2+t))^2 / <t> eps^2.

    Early fit: least-squares slope of log|a-| on the early window (compared
    against -nu) with C1 from the intercept.  Late fit: C2 as the supremum
    of |a-| <t> / ((log(2+t))^2 eps^2) over dyadic windows from late_start
    (default: half the trajectory span).
    """
    mask = (times >= early_window[0]) & (times <= early_window[1]) & (np.abs(a_minus) > 0)
    t_e = times[mask]
    y = np.log(np.abs(a_minus[mask]))
    slope, intercept = np.polyfit(t_e, y, 1)
    early = DecayFit(window=early_window, model="exponential",
                     constant=float(np.exp(intercept) / eps),
                     residual=float(abs(slope + nu) / nu),
                     details={"slope": float(slope)})

    t_end = float(times[-1])
    start = late_start if late_start is not None else max(1.0, t_end / 3.0)
    mask = times >= start
    t_l = times[mask]
    env = (np.abs(a_minus[mask]) * np.sqrt(1.0 + t_l ** 2)
           / (np.log(2.0 + t_l) ** 2 * eps ** 2))
    windows = dyadic_window_maxima(t_l, env, start, t_end)
    maxima = np.array([m for _, m in windows])
    spread = float(maxima.max() / max(maxima.min(), 1e-300)) if maxima.size else np.inf
    late = DecayFit(window=(start, t_end), model="algebraic_log",
                    constant=float(np.max(env)) if env.size else np.inf,
                    residual=spread, details={"window_maxima": windows})
    return early, late


# ---------------------------------------------------------------------------
# Free (flat) Klein-Gordon surrogates
# ---------------------------------------------------------------------------

def free_evolve(grid: Grid, f: np.ndarray, t: float) -> np.ndarray:
    """Exact half-Klein-Gordon propagator e^{i t <D>} f (spectral)."""
    phase = np.exp(1j * t * np.sqrt(1.0 + grid.xi ** 2))
    return inverse_ft(grid, phase * forward_ft(grid, f))


def dispersive_envelope(grid: Grid, f: np.ndarray, times: np.ndarray) -> np.ndarray:
    """||e^{i t <D>} f||_inf sampled at the given times."""
    return np.array([float(np.max(np.abs(free_evolve(grid, f, t)))) for t in times])


def pk_project(grid: Grid, f: np.ndarray, k: int) -> np.ndarray:
    """Littlewood-Paley piece P_k f."""
    return apply_multiplier(grid, littlewood_paley(k, grid.xi), f)


def flat_spectrum_profile(grid: Grid, xi_cap: float = 100.0) -> np.ndarray:
    """Synthetic even profile with fhat = <xi>^-2 exp(-(xi/xi_cap)^8): flat
    weighted content across dyadic bands up to xi_cap."""
    fhat = (1.0 + grid.xi ** 2) ** -1.0 * np.exp(-(grid.xi / xi_cap) ** 8)
    return inverse_ft(grid, fhat)


def annulus_profile(grid: Grid, n: int, sharpness: int = 0) -> np.ndarray:
    """Synthetic profile whose d_xi fhat concentrates on the 2^-n annuli
    around +-sqrt(3): fhat is a smoothed step of width 2^(-n) across the
    problematic circle."""
    from .cutoffs import SQRT3, smoothstep
    y = 2.0 ** (n + sharpness) * (np.abs(grid.xi) - SQRT3)
    fhat = ((1.0 + grid.xi ** 2) ** -2.0 * smoothstep(0.5 * (y + 1.0))
            * np.exp(-(grid.xi / 6.0) ** 8))
    return inverse_ft(grid, fhat)


def adapted_dispersive_constant(grid: Grid, n: int, sharpness: int = 0,
                                n_max: int = 30) -> float:
    """Measured ratio ||e^{i t <D>} f_n||_inf <t>^{1/2} / (n * N[f_n]) at
    t = 2^n for the annulus profile f_n, N the adapted norm."""
    t = 2.0 ** n
    f = annulus_profile(grid, n, sharpness)
    norm = nt_norm(grid, f, t, n_max=n_max, sharpness=sharpness,
                   warn_resolution=False)
    amp = float(np.max(np.abs(free_evolve(grid, f, t))))
    return amp * np.sqrt(1.0 + t ** 2) ** 0.5 / (n * norm)
