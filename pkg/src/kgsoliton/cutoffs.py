"""Smooth cutoff families: Littlewood-Paley, adapted annuli, time partition.

All families are generated from one mother bump phi, a C-infinity even
function with phi = 1 on [-1, 1] and phi = 0 outside [-2, 2], glued with
exp(-1/x).  Identity checks (partitions of unity) are bump-independent.

The adapted family localizes to small annuli around the problematic
frequencies +-sqrt(3), at dyadic widths 2^(-l) relative to a configurable
sharpness exponent s; s = 0 keeps |xi| - sqrt(3) unscaled.  The dyadic
structure, not the absolute sharpness, is what the partition identities and
the weighted norms rely on.
"""

from __future__ import annotations

import numpy as np

SQRT3 = float(np.sqrt(3.0))


def _glue(u: np.ndarray) -> np.ndarray:
    """exp(-1/u) for u > 0, 0 otherwise (all derivatives vanish at 0)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smoothstep(u) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    a = _glue(u)
    b = _glue(1.0 - u)
    return a / (a + b + np.finfo(float).tiny)


def bump(x) -> np.ndarray:
    """Mother bump: 1 on [-1, 1], 0 outside [-2, 2], smooth in between."""
    ax = np.abs(np.asarray(x, dtype=float))
    return smoothstep(2.0 - ax)


def annulus_bump(x) -> np.ndarray:
    """psi(x) = bump(x) - bump(2x), supported on 1/2 <= |x| <= 2."""
    x = np.asarray(x, dtype=float)
    return bump(x) - bump(2.0 * x)


def littlewood_paley(k: int, xi) -> np.ndarray:
    """phi_k(xi) = psi(xi / 2^k)."""
    return annulus_bump(np.asarray(xi, dtype=float) / 2.0 ** k)


def adapted_cutoff(n: int, l: int, xi, sharpness: int = 0) -> np.ndarray:
    """Adapted annulus cutoff phi_l^(n) around |xi| = sqrt(3).

    For 1 <= l <= n-1 supported where 2^s * ||xi| - sqrt(3)| ~ 2^(-l); the
    l = n piece fills the core ||xi| - sqrt(3)| <~ 2^(-n-s) and l = 0 the
    far region.  For every xi: sum_{l=0..n} phi_l^(n)(xi) = 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= l <= n:
        raise ValueError(f"l must satisfy 0 <= l <= n, got l={l}, n={n}")
    y = 2.0 ** sharpness * (np.abs(np.asarray(xi, dtype=float)) - SQRT3)
    if l == 0:
        return 1.0 - bump(2.0 * y)
    if l == n:
        return bump(2.0 ** n * y)
    return annulus_bump(2.0 ** l * y)


def adapted_cutoff_one_sided(n: int, l: int, xi, sign: int,
                             sharpness: int = 0) -> np.ndarray:
    """One-sided variant localizing around sign*sqrt(3) only."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= l <= n:
        raise ValueError(f"l must satisfy 0 <= l <= n, got l={l}, n={n}")
    y = 2.0 ** sharpness * (np.asarray(xi, dtype=float) - sign * SQRT3)
    if l == 0:
        return 1.0 - bump(2.0 * y)
    if l == n:
        return bump(2.0 ** n * y)
    return annulus_bump(2.0 ** l * y)


def time_partition(n: int, t) -> np.ndarray:
    """Smooth partition of unity on [0, inf): tau_n supported at t ~ 2^n.

    tau_1(t) = bump(t/2) and tau_n = bump(t/2^n) - bump(t/2^(n-1)) for
    n >= 2, so sum_{n>=1} tau_n(t) = 1 for every t >= 0.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t = np.asarray(t, dtype=float)
    if n == 1:
        return bump(t / 2.0)
    return bump(t / 2.0 ** n) - bump(t / 2.0 ** (n - 1))


def contributing_time_indices(t: float, n_max: int) -> list[int]:
    """Indices n <= n_max with tau_n(t) > 0."""
    return [n for n in range(1, n_max + 1) if float(time_partition(n, t)) > 0.0]
