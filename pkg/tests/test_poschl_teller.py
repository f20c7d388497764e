import numpy as np
import pytest

from kgsoliton.grid import forward_ft_at, spectral_derivative
from kgsoliton.darboux import d1d2_apply
from kgsoliton.poschl_teller import (NU, SolitonFrame, alpha_combined,
                                     alpha_ft, alpha_grid_ft, apply_L, c_coeff,
                                     distorted_ft, jost_eigen_residual,
                                     jost_minus, jost_plus, project_pc_even,
                                     resonance_constant,
                                     resonance_polynomial_ft, transmission,
                                     transformed_source_closed_form, wronskian)

SQRT3 = np.sqrt(3.0)

# frozen oracle values (>= 50-digit arithmetic)
RESONANCE = 0.0248946289735015805174552 - 0.1293562866530429499145481j
RESONANCE_ABS = 0.1317299944902166994006928
RES_POLY_AT_0 = 2.409429453574685849608446
RES_POLY_AT_SQRT3 = -0.697049611258044254488747
ALPHA_COMBINED_SQRT3 = -0.1742624028145110636221867
ALPHA_HAT = {
    (1, 0.0): 0.74775396835076457402, (1, 1.0): 0.6180895989398759985,
    (1, SQRT3): 0.34852480562902212724,
    (2, 0.0): -0.14390531830497494369, (2, 1.0): -0.30587502542678163025,
    (2, SQRT3): -0.60366267104753376627,
    (3, 0.0): -0.1869384920876911435, (3, 1.0): -0.33111942800350499919,
    (3, SQRT3): -0.52278720844353319087,
}


class TestEigenstructure:
    def test_eigenrelations(self, frame80):
        assert np.max(np.abs(apply_L(frame80, frame80.Y0) + 3.0 * frame80.Y0)) < 1e-8
        assert np.max(np.abs(apply_L(frame80, frame80.Y1))) < 1e-8
        assert np.max(np.abs(apply_L(frame80, frame80.Y2) - frame80.Y2)) < 1e-8

    def test_normalizations(self, grid80, frame80):
        assert abs(grid80.norm2(frame80.Y0) - 1.0) < 1e-8
        assert abs(grid80.norm2(frame80.Y1) - 1.0) < 1e-8
        assert abs(grid80.inner(frame80.Y0, frame80.Y1)) < 1e-12

    def test_frame_point_values(self, grid80, frame80):
        ic = grid80.center_index
        assert abs(frame80.Y2[ic] + 0.5) < 1e-14
        assert frame80.nu ** 2 == pytest.approx(3.0, abs=1e-15)

    def test_g_integral(self, grid80, frame80):
        total = grid80.dx * np.sum(frame80.G)
        assert abs(total - 1.0 / SQRT3) < 1e-12


class TestProjection:
    def test_kills_y0(self, frame80):
        out = project_pc_even(frame80, frame80.Y0)
        assert np.max(np.abs(out)) < 1e-12

    def test_y2_is_already_projected(self, grid80, frame80):
        out = project_pc_even(frame80, frame80.Y2)
        assert abs(grid80.inner(frame80.Y0, out)) < 1e-12
        assert np.max(np.abs(out - frame80.Y2)) < 1e-10

    def test_idempotent_and_selfadjoint(self, grid80, frame80, rng):
        u = np.exp(-(grid80.x / 3.0) ** 2) * (1.0 + grid80.x ** 2)
        v = np.exp(-(grid80.x / 2.0) ** 2)
        pu = project_pc_even(frame80, u)
        assert np.max(np.abs(project_pc_even(frame80, pu) - pu)) < 1e-12
        lhs = grid80.inner(project_pc_even(frame80, u), v)
        rhs = grid80.inner(u, project_pc_even(frame80, v))
        assert abs(lhs - rhs) < 1e-12

    def test_warns_on_odd_input(self, frame80):
        with pytest.warns(RuntimeWarning):
            project_pc_even(frame80, np.tanh(frame80.grid.x))


class TestScattering:
    def test_transmission_modulus_one(self, rng):
        xi = rng.uniform(-50.0, 50.0, size=1000)
        assert np.max(np.abs(np.abs(transmission(xi)) - 1.0)) < 1e-14

    def test_c_decay(self):
        xi = np.array([10.0, 100.0, 1000.0])
        assert np.all(np.abs(c_coeff(xi)) < 1.1 / xi ** 2)

    def test_jost_normalization_at_infinity(self):
        val = np.exp(-1j * 30.0 * 1.0) * jost_plus(30.0, 1.0)
        assert abs(val - 1.0) < 1e-10
        val = np.exp(1j * 30.0 * 1.0) * jost_minus(-30.0, 1.0)
        assert abs(val - 1.0) < 1e-10

    @pytest.mark.parametrize("xi", [0.5, SQRT3, 3.0])
    def test_jost_eigenfunction_residual(self, grid80, xi):
        assert np.max(jost_eigen_residual(grid80.x, xi)) < 1e-8

    @pytest.mark.parametrize("xi", [1.0, 0.3, 2.2])
    def test_transmission_times_wronskian(self, xi):
        val = transmission(xi) * wronskian(0.7, xi)
        assert abs(val - (-2j * xi)) < 1e-8

    def test_jost_reflection_symmetry(self, grid80):
        assert np.max(np.abs(jost_plus(grid80.x, 1.3)
                             - jost_minus(-grid80.x, 1.3))) < 1e-13


class TestDistortedTransform:
    def test_resonance_constant_against_oracle(self, frame80):
        value = distorted_ft(frame80, frame80.quadratic_source(), SQRT3)
        assert abs(value.real - RESONANCE.real) < 1e-6
        assert abs(value.imag - RESONANCE.imag) < 1e-6
        assert abs(abs(value) - RESONANCE_ABS) < 1e-6
        assert abs(resonance_constant() - RESONANCE) < 1e-15

    def test_conjugation_consistency(self, grid80, frame80):
        # distorted transform equals conj(T c) times the flat transform of
        # the twice Darboux-transformed input, for localized even fields
        u = np.exp(-(grid80.x / 2.5) ** 2)
        for xi in (0.8, SQRT3, 2.4):
            lhs = distorted_ft(frame80, u, xi)
            flat = forward_ft_at(grid80, d1d2_apply(grid80, u), np.array([xi]))[0]
            rhs = np.conj(transmission(xi) * c_coeff(xi)) * flat
            assert abs(lhs - rhs) < 1e-6

    def test_boundary_mass_warning(self, frame80):
        with pytest.warns(RuntimeWarning):
            distorted_ft(frame80, np.ones(frame80.grid.N), 1.0)


class TestResonancePolynomial:
    def test_values(self):
        assert abs(resonance_polynomial_ft(0.0) - RES_POLY_AT_0) < 1e-12
        assert abs(resonance_polynomial_ft(SQRT3) - RES_POLY_AT_SQRT3) < 1e-12

    def test_grid_crosscheck(self, grid80, frame80):
        source = d1d2_apply(grid80, frame80.quadratic_source())
        xi = np.array([0.0, 1.0, SQRT3])
        grid_ft = forward_ft_at(grid80, source, xi)
        assert np.max(np.abs(grid_ft.real - resonance_polynomial_ft(xi))) < 1e-7
        assert np.max(np.abs(grid_ft.imag)) < 1e-10

    def test_physical_closed_form(self, grid80, frame80):
        source = d1d2_apply(grid80, frame80.quadratic_source())
        closed = transformed_source_closed_form(grid80.x)
        assert np.max(np.abs(source - closed)) < 1e-8


class TestAlphaCoefficients:
    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_alpha_hat_oracle_values(self, j):
        for xi in (0.0, 1.0, SQRT3):
            assert abs(float(alpha_ft(j, xi)) - ALPHA_HAT[(j, xi)]) < 1e-12

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_alpha_nonvanishing_at_resonance(self, j):
        assert abs(float(alpha_ft(j, SQRT3))) > 1e-3

    def test_combined_value(self):
        assert abs(float(alpha_combined(SQRT3)) - ALPHA_COMBINED_SQRT3) < 1e-12

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_grid_crosscheck(self, frame80, j):
        xi = np.array([0.0, 1.0, SQRT3])
        vals = alpha_grid_ft(frame80, j, xi)
        closed = alpha_ft(j, xi)
        assert np.max(np.abs(vals.real - closed)) < 1e-7
