import numpy as np
import pytest

from kgsoliton.cutoffs import (SQRT3, adapted_cutoff, adapted_cutoff_one_sided,
                               annulus_bump, bump, contributing_time_indices,
                               littlewood_paley, time_partition)


def test_bump_plateau_and_support():
    assert bump(0.0) == 1.0
    assert bump(1.0) == 1.0
    assert bump(-0.7) == 1.0
    assert bump(2.0) == 0.0
    assert bump(5.0) == 0.0
    mid = bump(1.5)
    assert 0.0 < mid < 1.0


def test_littlewood_paley_telescopes():
    xi = np.linspace(0.01, 50.0, 500)
    total = sum(littlewood_paley(k, xi) for k in range(-10, 10))
    # telescoping: sum_k psi(xi/2^k) = bump(xi/2^9) - bump(xi/2^-10) = 1 here
    assert np.max(np.abs(total - 1.0)) < 1e-12


@pytest.mark.parametrize("n", [1, 5, 20])
def test_adapted_partition_of_unity(n):
    xi = np.array([0.0, 1.0, SQRT3, 10.0, -SQRT3, 0.3])
    total = sum(adapted_cutoff(n, l, xi) for l in range(n + 1))
    assert np.max(np.abs(total - 1.0)) < 1e-12


def test_adapted_center_and_far_values():
    for n in (1, 4, 9):
        assert adapted_cutoff(n, n, np.array([SQRT3]))[0] == 1.0
        assert adapted_cutoff(n, 0, np.array([0.0]))[0] == 1.0


def test_adapted_interior_support():
    # interior piece lives on ||xi| - sqrt3| ~ 2^-l
    n, l = 8, 4
    xi = SQRT3 + 2.0 ** (-l)
    assert adapted_cutoff(n, l, np.array([xi]))[0] > 0.0
    assert adapted_cutoff(n, l, np.array([SQRT3 + 1.0]))[0] == 0.0
    assert adapted_cutoff(n, l, np.array([SQRT3]))[0] == 0.0


def test_adapted_one_sided_partition():
    n = 6
    xi = np.linspace(SQRT3 - 0.5, SQRT3 + 0.5, 101)
    total = sum(adapted_cutoff_one_sided(n, l, xi, +1) for l in range(n + 1))
    assert np.max(np.abs(total - 1.0)) < 1e-12
    # the one-sided family ignores the mirror frequency
    assert adapted_cutoff_one_sided(n, n, np.array([-SQRT3]), +1)[0] == 0.0


def test_adapted_validates_arguments():
    with pytest.raises(ValueError):
        adapted_cutoff(0, 0, np.array([1.0]))
    with pytest.raises(ValueError):
        adapted_cutoff(3, 4, np.array([1.0]))
    with pytest.raises(ValueError):
        adapted_cutoff_one_sided(3, 1, np.array([1.0]), 2)


def test_time_partition_at_zero():
    assert float(time_partition(1, 0.0)) == 1.0


def test_time_partition_sums_to_one():
    t = np.array([0.0, 3.0, 100.0, 1e6])
    total = sum(time_partition(n, t) for n in range(1, 31))
    assert np.max(np.abs(total - 1.0)) < 1e-12


@pytest.mark.parametrize("n", [2, 5, 11])
def test_time_partition_support(n):
    assert float(time_partition(n, 2.0 ** (n + 3))) == 0.0
    assert float(time_partition(n, 2.0 ** n)) > 0.0


def test_contributing_time_indices():
    idx = contributing_time_indices(100.0, 30)
    assert all(float(time_partition(n, 100.0)) > 0 for n in idx)
    assert idx == [6, 7]
