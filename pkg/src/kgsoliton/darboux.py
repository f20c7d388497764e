"""Iterated Darboux transform, its adjoints and explicit right inverses.

The first-order operators

    D1 = d/dx + tanh(x),      D2 = d/dx + 2 tanh(x)

factorize the linearized operator (D2* D2 = L + 3, D1 D1* = -d^2/dx^2 + 1)
and conjugate it to the flat Klein-Gordon operator:

    D1 D2 L = (-d^2/dx^2 + 1) D1 D2.

The right inverses are hyperbolic-weighted integrals anchored at x = 0,

    I1[g](x) = sech(x)   int_0^x cosh(y) g(y) dy,
    I2[g](x) = sech^2(x) int_0^x cosh^2(y) g(y) dy,
    J = I2 o I1,

with sinh-weighted "tilde" companions obtained by integration by parts.
Cumulative quadrature is composite Simpson anchored at the center point,
run outward on each half line so that the hyperbolic weights never mix
across the origin; the weights are formed directly, with the admissible
box size validated against IEEE-double overflow of cosh^p (|x|*p <= ~700).
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, spectral_derivative
from .poschl_teller import SolitonFrame, project_pc_even

_COSH_ARG_LIMIT = 690.0  # cosh overflows just above exp(710)


def d1_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """D1 u = u' + tanh * u."""
    return spectral_derivative(grid, u) + np.tanh(grid.x) * u


def d2_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """D2 u = u' + 2 tanh * u."""
    return spectral_derivative(grid, u) + 2.0 * np.tanh(grid.x) * u


def d1_adjoint_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """D1* u = -u' + tanh * u."""
    return -spectral_derivative(grid, u) + np.tanh(grid.x) * u


def d2_adjoint_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """D2* u = -u' + 2 tanh * u."""
    return -spectral_derivative(grid, u) + 2.0 * np.tanh(grid.x) * u


def d1d2_apply(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Iterated transform D1 D2 u; kernel is span{Y0, Y1}."""
    return d1_apply(grid, d2_apply(grid, u))


def cumulative_from_center(grid: Grid, h: np.ndarray) -> np.ndarray:
    """F(x_j) = int_0^{x_j} h dy anchored at the center point x = 0.

    Trapezoid with the first two Euler-Maclaurin endpoint corrections,

        F = T + dx^2/12 (h' - h'(0)) - dx^4/720 (h''' - h'''(0)),

    h', h''' by local finite differences.  Unlike raw trapezoid or Simpson
    sums, the remaining O(dx^4) error is a *smooth* function of x, so
    spectral differentiation of the result does not amplify it; locality
    keeps the hyperbolic-weighted integrands stable near the box edge.
    """
    dx = grid.dx
    ic = grid.center_index
    dtype = np.result_type(h, float)
    increments = 0.5 * dx * (h[1:] + h[:-1])
    T = np.zeros(h.shape, dtype=dtype)
    T[ic + 1:] = np.cumsum(increments[ic:])
    T[:ic] = -np.cumsum(increments[:ic][::-1])[::-1]
    h1 = np.gradient(h, dx, edge_order=2)
    h1[2:-2] = (8.0 * (h[3:-1] - h[1:-3]) - (h[4:] - h[:-4])) / (12.0 * dx)
    h3 = np.gradient(np.gradient(h1, dx, edge_order=2), dx, edge_order=2)
    return (T - dx ** 2 / 12.0 * (h1 - h1[ic])
            + dx ** 4 / 720.0 * (h3 - h3[ic]))


def _check_weight_range(grid: Grid, power: int) -> None:
    if power * grid.L / 2.0 > _COSH_ARG_LIMIT:
        raise ValueError(
            f"box half-width {grid.L / 2:g} exceeds the overflow-safe range "
            f"for cosh^{power} weights (|x|*{power} <= {_COSH_ARG_LIMIT:g})")


def i1_apply(grid: Grid, g: np.ndarray) -> np.ndarray:
    """I1[g](x) = sech(x) int_0^x cosh(y) g(y) dy; D1(I1[g]) = g."""
    _check_weight_range(grid, 1)
    F = cumulative_from_center(grid, np.cosh(grid.x) * g)
    return F / np.cosh(grid.x)


def i2_apply(grid: Grid, g: np.ndarray) -> np.ndarray:
    """I2[g](x) = sech^2(x) int_0^x cosh^2(y) g(y) dy; D2(I2[g]) = g."""
    _check_weight_range(grid, 2)
    F = cumulative_from_center(grid, np.cosh(grid.x) ** 2 * g)
    return F / np.cosh(grid.x) ** 2


def j_apply(grid: Grid, g: np.ndarray) -> np.ndarray:
    """J = I2 o I1, right inverse of the iterated transform."""
    return i2_apply(grid, i1_apply(grid, g))


def i1_tilde_apply(grid: Grid, h: np.ndarray) -> np.ndarray:
    """I1~[h](x) = -sech(x) int_0^x sinh(y) h(y) dy."""
    _check_weight_range(grid, 1)
    F = cumulative_from_center(grid, np.sinh(grid.x) * h)
    return -F / np.cosh(grid.x)


def j_tilde_apply(grid: Grid, h: np.ndarray) -> np.ndarray:
    """J~[h](x) = -(1/2) sech^2(x) int_0^x sinh^2(y) h(y) dy."""
    _check_weight_range(grid, 2)
    F = cumulative_from_center(grid, np.sinh(grid.x) ** 2 * h)
    return -0.5 * F / np.cosh(grid.x) ** 2


def reconstruct(frame: SolitonFrame, w: np.ndarray, f0: float,
                fp0: float) -> np.ndarray:
    """Rebuild f from w = D1 D2 f and the point data (f(0), f'(0)):

        f = J[w] + c0^-1 f(0) Y0 + c1^-1 f'(0) Y1.
    """
    return (j_apply(frame.grid, w)
            + f0 / frame.c0 * frame.Y0
            + fp0 / frame.c1 * frame.Y1)


def j_split_remainder(grid: Grid, h: np.ndarray) -> np.ndarray:
    """Sinh-weighted remainder of J after peeling the non-decaying head:

        J[g] - (1/2) K^2 g = K I1~[h] - J~[h]   with h = g'.

    (Integrating the double integral by parts twice produces the tanh-times-
    I1~ cross term alongside the sinh^2 kernel; both pieces carry the same
    weighted bounds.)
    """
    return np.tanh(grid.x) * i1_tilde_apply(grid, h) - j_tilde_apply(grid, h)


def tilde_split_residuals(grid: Grid, g: np.ndarray) -> tuple[float, float]:
    """Max residuals of the integration-by-parts splittings

        I1[g] = K g + I1~[g'],
        J[g]  = (1/2) K^2 g + K I1~[g'] - J~[g'].
    """
    K = np.tanh(grid.x)
    gp = spectral_derivative(grid, g)
    r1 = i1_apply(grid, g) - (K * g + i1_tilde_apply(grid, gp))
    r2 = j_apply(grid, g) - (0.5 * K ** 2 * g + j_split_remainder(grid, gp))
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


def random_schwartz_field(grid: Grid, rng: np.random.Generator,
                          even: bool = False) -> np.ndarray:
    """Random localized smooth field: cubic polynomial times a Gaussian."""
    coeffs = rng.standard_normal(4)
    sigma = 2.0 + 2.0 * rng.random()
    shift = rng.uniform(-2.0, 2.0)
    x = grid.x
    if even:
        poly = coeffs[0] + coeffs[1] * x ** 2 + coeffs[2] * x ** 4 * 0.1
        return poly * np.exp(-(x / sigma) ** 2)
    poly = coeffs[0] + coeffs[1] * x + coeffs[2] * x ** 2 + coeffs[3] * x ** 3
    return poly * np.exp(-((x - shift) / sigma) ** 2)


def operator_bound_constants(grid: Grid, frame: SolitonFrame,
                             n_samples: int = 100,
                             seed: int = 7) -> dict[str, float]:
    """Measured constants for the basic mapping bounds of the integral
    operators over a random localized test set (the bounds themselves carry
    no explicit constants; we report the observed maxima)."""
    rng = np.random.default_rng(seed)
    jx = np.sqrt(1.0 + grid.x ** 2)
    worst: dict[str, float] = {}

    def record(name: str, num: float, den: float) -> None:
        ratio = num / max(den, 1e-300)
        worst[name] = max(worst.get(name, 0.0), float(ratio))

    for _ in range(n_samples):
        v = random_schwartz_field(grid, rng)
        v_even = random_schwartz_field(grid, rng, even=True)
        vp = spectral_derivative(grid, v)
        i1v = i1_apply(grid, v)
        jv = j_apply(grid, v)
        pcjv = project_pc_even(frame, j_apply(grid, v_even))
        sup_v = np.max(np.abs(v))
        record("i1_sup", np.max(np.abs(i1v)), sup_v)
        record("i1_deriv_sup", np.max(np.abs(spectral_derivative(grid, i1v))), sup_v)
        record("j_sup", np.max(np.abs(jv)), sup_v)
        record("j_deriv_sup", np.max(np.abs(spectral_derivative(grid, jv))), sup_v)
        record("pc_j_sup", np.max(np.abs(pcjv)), np.max(np.abs(v_even)))
        record("i1_weighted_l2", grid.norm2(jx * i1v), grid.norm2(jx * v))
        record("j_weighted_l2", grid.norm2(jx * jv), grid.norm2(jx * v))
        i1t = i1_tilde_apply(grid, vp)
        jt = j_tilde_apply(grid, vp)
        den = grid.norm2(vp / jx)
        record("i1_tilde_weighted_l2", grid.norm2(i1t / jx), den)
        record("j_tilde_weighted_l2", grid.norm2(jt / jx), den)
        record("i1_tilde_weighted_sup", np.max(np.abs(i1t / jx)), den)
        record("j_tilde_weighted_sup", np.max(np.abs(jt / jx)), den)
    return worst
