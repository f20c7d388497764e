import numpy as np
import pytest

from kgsoliton.grid import forward_ft
from kgsoliton.darboux import i1_apply
from kgsoliton.fourier_kernels import (convolution_identity_residual,
                                       i1_hat_via_kernel,
                                       j_hat_via_kernel,
                                       kernel_consistency_residuals, m0, m4,
                                       m5, omega3, pv_cosech_convolve,
                                       smeared_omega_omega)

SQRT3 = np.sqrt(3.0)

# frozen oracle values of the closed-form convolutions
CONV_ORACLE = {
    (1, 0.3): 0.53903365376760845241, (1, 1.0): 0.79707363067677336087,
    (1, SQRT3): 0.45410692130884569604, (1, 2.5): 0.19695227236301912171,
    (2, 0.3): -0.81753437488087281949, (2, 1.0): 0.0,
    (2, SQRT3): 0.26217875325853426681, (2, 2.5): 0.20679988598117007779,
    (3, 0.3): 0.18409628640318533765, (3, 1.0): 0.43453720809469579438,
    (3, SQRT3): 0.3966913565282926413, (3, 2.5): 0.24638155844308995586,
}
SMEARED_RHS_ORACLE = -2.079902982655794494127263


def test_multiplier_bounds():
    xi = np.linspace(-50, 50, 2001)
    for m in (m0, m4, m5):
        assert np.all(np.isfinite(m(xi)))
        assert np.max(np.abs(m(xi))) <= 0.51


def test_m5_low_frequency_factorization():
    # m5 = (xi/<xi>) * bounded
    xi = np.linspace(-20, 20, 1001)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(xi) > 1e-12,
                         m5(xi) / (xi / np.sqrt(1 + xi ** 2)), -0.75)
    assert np.all(np.isfinite(ratio))
    assert np.max(np.abs(ratio)) < 2.0


def test_omega3_continuous_extension():
    assert abs(omega3(0.0) - 2.0 / np.pi) < 1e-14
    assert abs(omega3(1e-6) - 2.0 / np.pi) < 1e-9


@pytest.mark.parametrize("which,xi0", sorted(CONV_ORACLE))
def test_convolution_identities(which, xi0):
    computed, closed, res = convolution_identity_residual(which, xi0)
    assert res < 1e-4
    assert abs(closed - CONV_ORACLE[(which, xi0)]) < 1e-12


def test_pv_convolution_scalar_sanity():
    # p.v. integral of the odd kernel against a constant vanishes
    val = pv_cosech_convolve(lambda e: np.ones_like(np.asarray(e)), 0.7,
                             psi_prime=lambda e: np.zeros_like(np.asarray(e)))
    assert abs(val) < 1e-12


def test_smeared_omega_omega():
    psi = lambda e: np.exp(-np.asarray(e) ** 2)
    psip = lambda e: -2.0 * np.asarray(e) * np.exp(-np.asarray(e) ** 2)
    lhs, rhs, res = smeared_omega_omega(psi, psip)
    assert abs(rhs - SMEARED_RHS_ORACLE) < 1e-6
    assert res < 1e-4


class TestKernelConsistency:
    @pytest.fixture(scope="class")
    def gaussian(self, grid80):
        return np.exp(-grid80.x ** 2)

    def test_i1_parity_structure(self, grid80, gaussian):
        # even input -> I1 output odd -> transform purely imaginary odd
        out_hat = forward_ft(grid80, i1_apply(grid80, gaussian))
        assert np.max(np.abs(out_hat.real)) < 1e-12

    def test_kernels_at_lattice_points(self, grid80, gaussian):
        targets = (0.25, 1.0, SQRT3, 2.8)
        idx = np.array([int(np.argmin(np.abs(grid80.xi - x0))) for x0 in targets])
        res = kernel_consistency_residuals(grid80, gaussian, idx)
        assert np.max(res["i1"]) < 1e-5
        assert np.max(res["j"]) < 1e-5

    def test_regular_part_matches(self, grid80):
        # for an odd input the I1 moment term carries the whole omega1 line
        f = grid80.x * np.exp(-grid80.x ** 2)
        i1_hat = forward_ft(grid80, i1_apply(grid80, f))
        idx = int(np.argmin(np.abs(grid80.xi - 1.0)))
        val = i1_hat_via_kernel(grid80, f, float(grid80.xi[idx]))
        assert abs(i1_hat[idx] - val) < 1e-6

    def test_j_diagonal_term(self, grid80, gaussian):
        # the delta part is read off analytically: at large |xi| where the
        # convolution tails vanish, FT(J[f]) ~ m4 fhat
        from kgsoliton.darboux import j_apply
        j_hat = forward_ft(grid80, j_apply(grid80, gaussian))
        fhat = forward_ft(grid80, gaussian)
        idx = int(np.argmin(np.abs(grid80.xi - 6.0)))
        assert abs(j_hat[idx] - m4(grid80.xi[idx]) * fhat[idx]) < 1e-8
