"""Admissible initial-data families for the perturbation equation.

Every family returns an even pair (phi0, phi1) with phi1 = -nu phi0, which
satisfies the admissibility condition <Y0, nu phi0 + phi1> = 0 identically.
The pair is scaled so that the weighted Sobolev size

    eps = ( ||<x> phi0||_{H^4}^2 + ||<x> phi1||_{H^3}^2 )^{1/2}

equals the requested eps; all shooting thresholds are stated in terms of
this measure of the data.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, forward_ft
from .poschl_teller import SolitonFrame

FAMILIES = ("gaussian_bump", "y2_localized", "custom_file")


def weighted_sobolev_size(grid: Grid, phi0: np.ndarray, phi1: np.ndarray) -> float:
    """l2 combination of ||<x> phi0||_{H^4} and ||<x> phi1||_{H^3}."""
    jx = np.sqrt(1.0 + grid.x ** 2)
    jxi2 = 1.0 + grid.xi ** 2

    def weighted(f: np.ndarray, k: int) -> float:
        vhat = forward_ft(grid, jx * f)
        return grid.spectral_norm2(jxi2 ** (0.5 * k) * vhat) ** 2

    return float(np.sqrt(weighted(phi0, 4) + weighted(phi1, 3)))


def _normalized_pair(frame: SolitonFrame, shape: np.ndarray,
                     eps: float) -> tuple[np.ndarray, np.ndarray]:
    phi0 = shape
    phi1 = -frame.nu * shape
    size = weighted_sobolev_size(frame.grid, phi0, phi1)
    scale = eps / size
    return scale * phi0, scale * phi1


def gaussian_bump(frame: SolitonFrame, eps: float,
                  sigma: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Plain even Gaussian bump."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    shape = np.exp(-(frame.grid.x / sigma) ** 2)
    return _normalized_pair(frame, shape, eps)


def y2_localized(frame: SolitonFrame, eps: float,
                 sigma: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    """Localized copy of the threshold resonance, Y2 times a Gaussian window
    (maximal overlap with the slow-decay channel)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    shape = frame.Y2 * np.exp(-(frame.grid.x / sigma) ** 2)
    return _normalized_pair(frame, shape, eps)


def from_file(frame: SolitonFrame, eps: float,
              path: str) -> tuple[np.ndarray, np.ndarray]:
    """Load (phi0, phi1) as two columns of length N; rescaled to eps."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] < 2 or data.shape[0] != frame.grid.N:
        raise ValueError(
            f"custom data must have shape (N, 2) with N={frame.grid.N}")
    phi0, phi1 = data[:, 0], data[:, 1]
    size = weighted_sobolev_size(frame.grid, phi0, phi1)
    return eps / size * phi0, eps / size * phi1


def make_family(frame: SolitonFrame, family: str, eps: float,
                sigma: float | None = None,
                path: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    if family == "gaussian_bump":
        return gaussian_bump(frame, eps, sigma if sigma else 3.0)
    if family == "y2_localized":
        return y2_localized(frame, eps, sigma if sigma else 4.0)
    if family == "custom_file":
        if not path:
            raise ValueError("custom_file family requires data.file")
        return from_file(frame, eps, path)
    raise ValueError(f"unknown data family {family!r}; choose from {FAMILIES}")
