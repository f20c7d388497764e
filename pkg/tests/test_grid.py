import numpy as np
import pytest

from kgsoliton.grid import (apply_multiplier, forward_ft, forward_ft_at,
                            inverse_ft, make_grid, spectral_derivative)

# frozen high-precision values of 2^{-1/2} e^{-xi^2/4} at xi = 0, 1, 2
GAUSS_HAT = {
    0.0: 0.7071067811865475244008444,
    1.0: 0.5506953149031837476159811,
    2.0: 0.2601300475114444481790762,
}
SQRT_PI_OVER_2 = 1.2533141373155002512078826


def test_make_grid_lattices():
    g = make_grid(80.0, 8)
    assert g.dx == 10.0
    assert np.allclose(np.sort(g.x), [-40, -30, -20, -10, 0, 10, 20, 30])
    assert np.allclose(np.sort(g.xi), 2 * np.pi * np.arange(-4, 4) / 80.0)
    assert g.x[g.center_index] == 0.0


def test_make_grid_small_box():
    g = make_grid(2 * np.pi, 4)
    assert np.allclose(np.sort(g.xi), [-2, -1, 0, 1])


@pytest.mark.parametrize("L,N", [(80.0, 6), (80.0, 100), (-1.0, 8), (80.0, 0)])
def test_make_grid_rejects(L, N):
    with pytest.raises(ValueError):
        make_grid(L, N)


def test_sech_hat_closed_form(grid80):
    u = 1.0 / np.cosh(grid80.x)
    uhat = forward_ft(grid80, u)
    closed = SQRT_PI_OVER_2 / np.cosh(np.pi * grid80.xi / 2.0)
    assert np.max(np.abs(uhat - closed)) < 1e-12
    assert abs(uhat[0].real - SQRT_PI_OVER_2) < 1e-12


def test_gaussian_hat(grid80):
    u = np.exp(-grid80.x ** 2)
    for xi0, expected in GAUSS_HAT.items():
        val = forward_ft_at(grid80, u, np.array([xi0]))[0]
        assert abs(val - expected) < 1e-13


def test_zero_transform(grid80):
    assert np.all(forward_ft(grid80, np.zeros(grid80.N)) == 0)


def test_roundtrip_random(grid80, rng):
    u = rng.standard_normal(grid80.N) + 1j * rng.standard_normal(grid80.N)
    back = inverse_ft(grid80, forward_ft(grid80, u))
    assert np.max(np.abs(back - u)) < 1e-12 * np.max(np.abs(u))


def test_plancherel(grid80, rng):
    u = rng.standard_normal(grid80.N)
    assert abs(grid80.norm2(u) - grid80.spectral_norm2(forward_ft(grid80, u))) < 1e-10


def test_even_real_field_has_even_real_spectrum(grid80):
    u = np.exp(-grid80.x ** 2) * (1.0 + grid80.x ** 2)
    uhat = forward_ft(grid80, u)
    assert np.max(np.abs(uhat.imag)) < 1e-12


def test_identity_multiplier(grid80, rng):
    u = rng.standard_normal(grid80.N)
    out = apply_multiplier(grid80, np.ones(grid80.N), u)
    assert np.max(np.abs(out - u)) < 1e-12


def test_jd_squared_is_one_minus_laplacian(grid80):
    u = 1.0 / np.cosh(grid80.x)
    jd2 = apply_multiplier(grid80, 1.0 + grid80.xi ** 2, u)
    expected = u - spectral_derivative(grid80, u, 2)
    assert np.max(np.abs(jd2 - expected)) < 1e-10


def test_spectral_derivative_sech(grid80):
    u = 1.0 / np.cosh(grid80.x)
    du = spectral_derivative(grid80, u)
    exact = -np.tanh(grid80.x) / np.cosh(grid80.x)
    assert du.dtype.kind == "f"
    assert np.max(np.abs(du - exact)) < 1e-10


@pytest.mark.parametrize("fn,dfn", [
    (np.tanh, lambda x: 1.0 / np.cosh(x) ** 2),
    (lambda x: 1.0 / np.cosh(x) ** 2,
     lambda x: -2.0 * np.tanh(x) / np.cosh(x) ** 2),
])
def test_spectral_derivative_closed_forms(grid80, fn, dfn):
    # tanh is not periodic-decaying but its derivative content is; the
    # jump at the box edge is exponentially small at L = 80
    du = spectral_derivative(grid80, fn(grid80.x))
    assert np.max(np.abs(du - dfn(grid80.x))) < 1e-9


def test_multiplier_rejects_nan(grid80):
    bad = np.ones(grid80.N)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        apply_multiplier(grid80, bad, np.ones(grid80.N))


def test_odd_symbol_nyquist_zeroed(grid80):
    # iota*xi with the Nyquist entry kept would return a complex result for
    # real input; the odd-symbol path must zero it and stay real
    out = apply_multiplier(grid80, 1j * grid80.xi, np.ones(grid80.N))
    assert out.dtype.kind == "f"
    assert np.max(np.abs(out)) < 1e-12
