"""Fourier-side kernels of the integral inverses and the p.v. machinery.

On the Fourier side the right inverses act through a singular Hilbert-type
kernel Omega = p.v. cosech(pi/2 *) plus smooth pieces:

    FT(I1[f]) = i Omega * (m0 fhat) - 2i m3 fhat + i omega1 B1(fhat),
    FT(J[f])  = m4 fhat + Omega * (m5 fhat) + omega3 * (m6 fhat)
                + omega3 B2(fhat) + omega2 B3(fhat),

with bounded rational multipliers m0..m6, Schwartz weights omega1..omega3
and moments B_j(fhat) = int m_j fhat.  Delta parts of the kernels are the
diagonal terms (-2i m3 fhat, m4 fhat) and are always evaluated
analytically; the I1 diagonal term arises from the Sokhotski-Plemelj
boundary value cosech(pi/2 (z - i0)) = p.v. cosech(pi z/2) + 2i delta(z)
and is confirmed against direct high-precision transforms.

Principal-value integrals are computed by subtract-the-singularity
quadrature on a uniform symmetric lattice: the pair cancellation of the
odd kernel is exact by construction and the regularized integrand is
smooth, so the trapezoidal sum converges superalgebraically.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, forward_ft, forward_ft_at

# -- bounded rational multipliers -------------------------------------------

def m0(xi):
    xi = np.asarray(xi, dtype=float)
    return -1.0 / (2.0 * (1.0 + xi ** 2))


def m1(xi):
    xi = np.asarray(xi, dtype=float)
    return xi / (2.0 * (1.0 + xi ** 2))


def m2(xi):
    xi = np.asarray(xi, dtype=float)
    return 1.0 / (2.0 * (4.0 + xi ** 2))


def m3(xi):
    xi = np.asarray(xi, dtype=float)
    return xi / (2.0 * (1.0 + xi ** 2))


def m4(xi):
    xi = np.asarray(xi, dtype=float)
    return (2.0 - xi ** 2) / ((1.0 + xi ** 2) * (4.0 + xi ** 2))


def m5(xi):
    xi = np.asarray(xi, dtype=float)
    return -3.0 * xi / (2.0 * (1.0 + xi ** 2) * (4.0 + xi ** 2))


def m6(xi):
    xi = np.asarray(xi, dtype=float)
    return -3.0 / (2.0 * (1.0 + xi ** 2) * (4.0 + xi ** 2))


# -- Schwartz weights ---------------------------------------------------------

def omega1(xi):
    xi = np.asarray(xi, dtype=float)
    return 1.0 / np.cosh(np.pi * xi / 2.0)


def omega2(xi):
    xi = np.asarray(xi, dtype=float)
    return xi / np.cosh(np.pi * xi / 2.0)


def omega3(xi):
    """xi * cosech(pi xi / 2), extended continuously by 2/pi at xi = 0."""
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.full(xi.shape, 2.0 / np.pi)
    nz = np.abs(xi) > 1e-8
    out[nz] = xi[nz] / np.sinh(np.pi * xi[nz] / 2.0)
    return float(out[0]) if scalar else out


def omega_cosech(z):
    """The raw odd kernel cosech(pi z / 2); singular at z = 0."""
    z = np.asarray(z, dtype=float)
    return 1.0 / np.sinh(np.pi * z / 2.0)


# -- principal-value convolution ---------------------------------------------

def pv_cosech_convolve(psi, xi0: float, step: float = 1.0 / 32.0,
                       halfwidth: float = 40.0, psi_prime=None):
    """p.v. int cosech(pi/2 (xi0 - eta)) psi(eta) d eta.

    Subtract-the-singularity form: with z = xi0 - eta the integrand

        g(z) = cosech(pi z / 2) * (psi(xi0 - z) - psi(xi0))

    is smooth (the subtracted constant integrates to zero in the principal
    value by oddness, exactly on the symmetric lattice), with center value
    g(0) = -(2/pi) psi'(xi0).  psi_prime, when given, supplies the exact
    derivative; otherwise a centered difference on the fine lattice is used.
    """
    nsteps = int(round(halfwidth / step))
    z = step * np.arange(-nsteps, nsteps + 1)
    center = nsteps
    eta = xi0 - z
    psi_vals = np.asarray(psi(eta))
    psi_at = psi_vals[center]
    g = np.zeros_like(psi_vals)
    nz = np.abs(z) > 0
    g[nz] = omega_cosech(z[nz]) * (psi_vals[nz] - psi_at)
    if psi_prime is not None:
        dpsi = psi_prime(np.asarray([xi0]))[0]
    else:
        dpsi = (8.0 * (psi_vals[center - 1] - psi_vals[center + 1])
                - (psi_vals[center - 2] - psi_vals[center + 2])) / (12.0 * step)
    g[center] = -(2.0 / np.pi) * dpsi
    return step * np.sum(g)


def regular_convolve(kernel, psi, xi0: float, step: float = 1.0 / 32.0,
                     halfwidth: float = 40.0):
    """int kernel(xi0 - eta) psi(eta) d eta for a continuous kernel."""
    nsteps = int(round(halfwidth / step))
    z = step * np.arange(-nsteps, nsteps + 1)
    return step * np.sum(kernel(z) * np.asarray(psi(xi0 - z)))


def moment(mj, psi, step: float = 1.0 / 32.0, halfwidth: float = 40.0):
    """int m_j(eta) psi(eta) d eta over the line."""
    nsteps = int(round(halfwidth / step))
    eta = step * np.arange(-nsteps, nsteps + 1)
    return step * np.sum(mj(eta) * np.asarray(psi(eta)))


# -- convolution identities ---------------------------------------------------

_CLOSED_FORMS = {
    1: lambda xi: 2.0 * xi * omega1(xi),
    2: lambda xi: (np.asarray(xi) ** 2 - 1.0) * omega1(xi),
    3: lambda xi: np.asarray(xi) ** 2 * omega_cosech(xi),
}

_OMEGAS = {1: omega1, 2: omega2, 3: omega3}


def _omega_prime(j: int):
    th = lambda xi: np.tanh(np.pi * xi / 2.0)
    if j == 1:
        return lambda xi: -(np.pi / 2.0) * omega1(xi) * th(xi)
    if j == 2:
        return lambda xi: omega1(xi) * (1.0 - (np.pi / 2.0) * np.asarray(xi) * th(xi))
    if j == 3:
        def deriv(xi):
            xi = np.atleast_1d(np.asarray(xi, dtype=float))
            out = np.zeros(xi.shape)
            nz = np.abs(xi) > 1e-8
            w = np.pi * xi[nz] / 2.0
            out[nz] = (1.0 / np.sinh(w)) * (1.0 - w / np.tanh(w))
            return out
        return deriv
    raise ValueError(j)


def convolution_identity_residual(which: int, xi0: float,
                                  step: float = 1.0 / 32.0,
                                  halfwidth: float = 40.0) -> tuple[float, float, float]:
    """(computed, closed_form, |difference|) for (Omega * omega_j)(xi0).

    Closed forms: 2 xi sech(pi xi/2), (xi^2 - 1) sech(pi xi/2) and
    xi^2 cosech(pi xi/2) for j = 1, 2, 3.
    """
    if which not in (1, 2, 3):
        raise ValueError(f"which must be 1..3, got {which}")
    computed = pv_cosech_convolve(_OMEGAS[which], xi0, step=step,
                                  halfwidth=halfwidth,
                                  psi_prime=_omega_prime(which))
    closed = float(_CLOSED_FORMS[which](xi0))
    return float(computed), closed, abs(float(computed) - closed)


def smeared_omega_omega(psi, psi_prime=None, step: float = 1.0 / 32.0,
                        halfwidth: float = 40.0) -> tuple[float, float, float]:
    """Test <Omega * Omega, psi> = -4 psi(0) + 2 <omega3, psi> (smeared form).

    The left side is evaluated as a double principal value: first
    G = Omega conv psi pointwise on the outer lattice, then one more p.v.
    pairing of Omega against G.  Returns (lhs, rhs, |difference|).
    """
    nsteps = int(round(halfwidth / step))
    z = step * np.arange(-nsteps, nsteps + 1)
    center = nsteps
    G = np.array([pv_cosech_convolve(psi, float(zi), step=step,
                                     halfwidth=halfwidth,
                                     psi_prime=psi_prime) for zi in z])
    g = np.zeros_like(G)
    nz = np.abs(z) > 0
    g[nz] = omega_cosech(z[nz]) * (G[nz] - G[center])
    dG = (8.0 * (G[center - 1] - G[center + 1])
          - (G[center - 2] - G[center + 2])) / (12.0 * step)
    g[center] = -(2.0 / np.pi) * dG
    # <Omega*Omega, psi> = - p.v. int Omega(eta) (Omega conv psi)(eta) d eta
    # (the inner integral picks up a reflection of the odd kernel)
    lhs = -step * np.sum(g)
    eta = z
    rhs = (-4.0 * float(np.asarray(psi(np.zeros(1)))[0])
           + 2.0 * step * np.sum(omega3(eta) * np.asarray(psi(eta))))
    return float(lhs), float(rhs), abs(float(lhs) - float(rhs))


# -- kernel consistency for the integral inverses -----------------------------

def _grid_transform_callables(grid: Grid, f: np.ndarray):
    """(fhat, fhat') as functions of arbitrary eta via direct quadrature."""
    def fhat(eta):
        return forward_ft_at(grid, f, np.atleast_1d(np.asarray(eta, dtype=float)))

    def fhat_prime(eta):
        return forward_ft_at(grid, -1j * grid.x * f,
                             np.atleast_1d(np.asarray(eta, dtype=float)))

    return fhat, fhat_prime


def i1_hat_via_kernel(grid: Grid, f: np.ndarray, xi0: float,
                      step: float = 1.0 / 32.0,
                      halfwidth: float = 40.0,
                      b1: complex | None = None) -> complex:
    """Right-hand side of the I1 kernel identity at one frequency; the
    diagonal delta part is the analytic term -2i m3(xi0) fhat(xi0)."""
    fhat, fhat_prime = _grid_transform_callables(grid, f)
    psi = lambda eta: m0(eta) * fhat(eta)
    m0p = lambda eta: np.asarray(eta) / (1.0 + np.asarray(eta) ** 2) ** 2
    psi_prime = lambda eta: m0p(eta) * fhat(eta) + m0(eta) * fhat_prime(eta)
    sing = pv_cosech_convolve(psi, xi0, step=step, halfwidth=halfwidth,
                              psi_prime=psi_prime)
    diag = -2j * m3(xi0) * fhat(np.asarray([xi0]))[0]
    if b1 is None:
        b1 = moment(m1, fhat, step=step, halfwidth=halfwidth)
    return 1j * sing + diag + 1j * omega1(xi0) * b1


def j_hat_via_kernel(grid: Grid, f: np.ndarray, xi0: float,
                     step: float = 1.0 / 32.0,
                     halfwidth: float = 40.0,
                     b2: complex | None = None,
                     b3: complex | None = None) -> complex:
    """Right-hand side of the J kernel identity at one frequency; the
    delta-kernel part is the analytic diagonal term m4(xi0) fhat(xi0)."""
    fhat, fhat_prime = _grid_transform_callables(grid, f)
    psi5 = lambda eta: m5(eta) * fhat(eta)

    def m5p(eta):
        eta = np.asarray(eta, dtype=float)
        num = -3.0 * ((1.0 + eta ** 2) * (4.0 + eta ** 2)
                      - eta * (2.0 * eta * (4.0 + eta ** 2)
                               + 2.0 * eta * (1.0 + eta ** 2)))
        return num / (2.0 * ((1.0 + eta ** 2) * (4.0 + eta ** 2)) ** 2)

    psi5_prime = lambda eta: m5p(eta) * fhat(eta) + m5(eta) * fhat_prime(eta)
    diag = m4(xi0) * fhat(np.asarray([xi0]))[0]
    sing = pv_cosech_convolve(psi5, xi0, step=step, halfwidth=halfwidth,
                              psi_prime=psi5_prime)
    reg = regular_convolve(omega3, lambda e: m6(e) * fhat(e), xi0,
                           step=step, halfwidth=halfwidth)
    if b2 is None:
        b2 = moment(m2, fhat, step, halfwidth)
    if b3 is None:
        b3 = moment(m3, fhat, step, halfwidth)
    return diag + sing + reg + omega3(xi0) * b2 + omega2(xi0) * b3


def kernel_consistency_residuals(grid: Grid, f: np.ndarray,
                                 xi_indices: np.ndarray,
                                 step: float = 1.0 / 32.0,
                                 halfwidth: float = 40.0) -> dict[str, np.ndarray]:
    """Compare FFT-side transforms of I1[f], J[f] against the kernel
    quadratures at the given spectral-lattice indices."""
    from .darboux import i1_apply, j_apply

    i1_hat = forward_ft(grid, i1_apply(grid, f))
    j_hat = forward_ft(grid, j_apply(grid, f))
    fhat, _ = _grid_transform_callables(grid, f)
    b1 = moment(m1, fhat, step, halfwidth)
    b2 = moment(m2, fhat, step, halfwidth)
    b3 = moment(m3, fhat, step, halfwidth)
    res_i1, res_j = [], []
    for idx in xi_indices:
        xi0 = float(grid.xi[idx])
        res_i1.append(abs(i1_hat[idx] - i1_hat_via_kernel(grid, f, xi0,
                                                          step, halfwidth, b1=b1)))
        res_j.append(abs(j_hat[idx] - j_hat_via_kernel(grid, f, xi0,
                                                       step, halfwidth,
                                                       b2=b2, b3=b3)))
    return {"i1": np.asarray(res_i1), "j": np.asarray(res_j)}
