import numpy as np
import pytest

from kgsoliton.grid import spectral_derivative
from kgsoliton.poschl_teller import apply_L, project_pc_even
from kgsoliton.darboux import (cumulative_from_center, d1_adjoint_apply,
                               d1_apply, d1d2_apply, d2_adjoint_apply,
                               d2_apply, i1_apply, i1_tilde_apply, i2_apply,
                               j_apply, j_split_remainder, j_tilde_apply,
                               operator_bound_constants, random_schwartz_field,
                               reconstruct, tilde_split_residuals)


def test_cumulative_center_anchor(grid80):
    F = cumulative_from_center(grid80, np.ones(grid80.N))
    assert F[grid80.center_index] == 0.0
    assert np.max(np.abs(F - grid80.x)) < 1e-10


def test_cumulative_accuracy(grid80):
    # int_0^x cos(y) dy = sin(x)
    F = cumulative_from_center(grid80, np.cos(grid80.x))
    assert np.max(np.abs(F - np.sin(grid80.x))) < 1e-10


def test_adjointness(grid80, rng):
    u = random_schwartz_field(grid80, rng)
    v = random_schwartz_field(grid80, rng)
    for op, adj in ((d1_apply, d1_adjoint_apply), (d2_apply, d2_adjoint_apply)):
        lhs = grid80.inner(op(grid80, u), v)
        rhs = grid80.inner(u, adj(grid80, v))
        assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(lhs))


def test_factorizations(grid80, frame80, rng):
    u = random_schwartz_field(grid80, rng)
    scale = np.max(np.abs(u))
    lhs = d2_adjoint_apply(grid80, d2_apply(grid80, u))
    rhs = apply_L(frame80, u) + 3.0 * u
    assert np.max(np.abs(lhs - rhs)) < 1e-8 * scale
    lhs = d1_apply(grid80, d1_adjoint_apply(grid80, u))
    rhs = -spectral_derivative(grid80, u, 2) + u
    assert np.max(np.abs(lhs - rhs)) < 1e-8 * scale


def test_conjugation_identity(grid80, frame80, rng):
    worst = 0.0
    for _ in range(50):
        u = random_schwartz_field(grid80, rng)
        lhs = d1d2_apply(grid80, apply_L(frame80, u))
        w = d1d2_apply(grid80, u)
        rhs = -spectral_derivative(grid80, w, 2) + w
        worst = max(worst, np.max(np.abs(lhs - rhs)) / np.max(np.abs(u)))
    assert worst < 1e-7


def test_kernel_of_iterated_transform(grid80, frame80):
    assert np.max(np.abs(d1d2_apply(grid80, frame80.Y0))) < 1e-9
    assert np.max(np.abs(d1d2_apply(grid80, frame80.Y1))) < 1e-9


def test_d2_kills_y0_d1_kills_z(grid80, frame80):
    assert np.max(np.abs(d2_apply(grid80, frame80.Y0))) < 1e-9
    assert np.max(np.abs(d1_apply(grid80, frame80.Z))) < 1e-9


class TestRightInverses:
    def test_i1_gaussian(self, grid80):
        g = np.exp(-grid80.x ** 2)
        assert np.max(np.abs(d1_apply(grid80, i1_apply(grid80, g)) - g)) < 1e-8

    def test_i1_of_zero(self, grid80):
        assert np.all(i1_apply(grid80, np.zeros(grid80.N)) == 0.0)

    def test_i1_left_inverse_constant(self, grid80, frame80):
        # I1[D1 f] = f - c1^{-1} f(0) Z
        f = 1.0 / np.cosh(grid80.x) ** 2
        lhs = i1_apply(grid80, d1_apply(grid80, f))
        rhs = f - f[grid80.center_index] / frame80.c1 * frame80.Z
        assert np.max(np.abs(lhs - rhs)) < 1e-8

    def test_i2_left_inverse_constant(self, grid80, frame80):
        f = np.exp(-(grid80.x / 2.0) ** 2)
        lhs = i2_apply(grid80, d2_apply(grid80, f))
        rhs = f - f[grid80.center_index] / frame80.c0 * frame80.Y0
        assert np.max(np.abs(lhs - rhs)) < 1e-8

    def test_j_random_even(self, grid80, rng):
        for _ in range(10):
            g = random_schwartz_field(grid80, rng, even=True)
            res = d1d2_apply(grid80, j_apply(grid80, g)) - g
            assert np.max(np.abs(res)) < 1e-7 * np.max(np.abs(g))

    def test_j_is_composition(self, grid80, rng):
        g = random_schwartz_field(grid80, rng)
        lhs = j_apply(grid80, g)
        rhs = i2_apply(grid80, i1_apply(grid80, g))
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_i2_of_z_is_y1(self, grid80, frame80):
        assert np.max(np.abs(i2_apply(grid80, frame80.Z) - frame80.Y1)) < 1e-8

    def test_overflow_guard(self):
        from kgsoliton.grid import make_grid
        big = make_grid(2000.0, 2048)
        with pytest.raises(ValueError):
            i2_apply(big, np.zeros(big.N))


class TestReconstruction:
    def test_roundtrip_sech(self, grid80, frame80):
        f = 1.0 / np.cosh(grid80.x)
        w = d1d2_apply(grid80, f)
        fp = spectral_derivative(grid80, f)
        ic = grid80.center_index
        rebuilt = reconstruct(frame80, w, f[ic], fp[ic])
        assert np.max(np.abs(rebuilt - f)) < 1e-8

    def test_y0_reconstructs_from_kernel(self, grid80, frame80):
        # D1 D2 Y0 = 0, so Y0 = reconstruct(0, Y0(0), 0)
        ic = grid80.center_index
        rebuilt = reconstruct(frame80, np.zeros(grid80.N), frame80.Y0[ic], 0.0)
        assert np.max(np.abs(rebuilt - frame80.Y0)) < 1e-10

    def test_pc_identity(self, grid80, frame80):
        f = np.exp(-grid80.x ** 2)
        w = d1d2_apply(grid80, f)
        lhs = project_pc_even(frame80, f)
        rhs = project_pc_even(frame80, j_apply(grid80, w))
        assert np.max(np.abs(lhs - rhs)) < 1e-8

    def test_roundtrip_random(self, grid80, frame80, rng):
        for _ in range(20):
            f = random_schwartz_field(grid80, rng)
            w = d1d2_apply(grid80, f)
            fp = spectral_derivative(grid80, f)
            ic = grid80.center_index
            rebuilt = reconstruct(frame80, w, f[ic], fp[ic])
            assert np.max(np.abs(rebuilt - f)) < 1e-7 * np.max(np.abs(f))


class TestTildeSplit:
    def test_gaussian(self, grid80):
        r1, r2 = tilde_split_residuals(grid80, np.exp(-grid80.x ** 2))
        assert r1 < 1e-8
        assert r2 < 1e-8

    def test_zero(self, grid80):
        r1, r2 = tilde_split_residuals(grid80, np.zeros(grid80.N))
        assert r1 == 0.0
        assert r2 == 0.0

    def test_random(self, grid80, rng):
        for _ in range(20):
            g = random_schwartz_field(grid80, rng)
            r1, r2 = tilde_split_residuals(grid80, g)
            scale = np.max(np.abs(g))
            assert r1 < 1e-7 * scale
            assert r2 < 1e-7 * scale

    def test_remainder_operator_matches(self, grid80, rng):
        g = random_schwartz_field(grid80, rng)
        gp = spectral_derivative(grid80, g)
        rem = j_split_remainder(grid80, gp)
        direct = j_apply(grid80, g) - 0.5 * np.tanh(grid80.x) ** 2 * g
        assert np.max(np.abs(rem - direct)) < 1e-7 * np.max(np.abs(g))

    def test_tilde_weighted_bound(self, grid80, rng):
        # measured constant of the <x>^-1 I1~[dx g] L2 bound stays small
        jx = np.sqrt(1.0 + grid80.x ** 2)
        worst = 0.0
        for _ in range(100):
            g = random_schwartz_field(grid80, rng)
            gp = spectral_derivative(grid80, g)
            num = grid80.norm2(i1_tilde_apply(grid80, gp) / jx)
            den = grid80.norm2(gp / jx)
            worst = max(worst, num / den)
        assert worst < 10.0


def test_operator_bound_constants(grid80, frame80):
    consts = operator_bound_constants(grid80, frame80, n_samples=100)
    assert len(consts) == 11
    assert all(v < 10.0 for v in consts.values())
    assert all(np.isfinite(v) for v in consts.values())
