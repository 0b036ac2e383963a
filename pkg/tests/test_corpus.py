import numpy as np
import pytest

from dyadic_lorentz.corpus import (
    corpus,
    mean_zero_in,
    random_coeffs,
    random_interval,
    random_s0,
    random_set,
    s0_function,
)


def test_two_term_instance():
    A = np.array([1, 1, 0, 0], dtype=bool)
    B = np.array([0, 1, 1, 0], dtype=bool)
    f = s0_function(0, 2, {0: A, 1: B})
    assert f.values.tolist() == [1, 1.5, 0.5, 0]
    g = s0_function(0, 2, {0: A}, {1: B})
    assert g.values.tolist() == [1, 0.5, -0.5, 0]


def test_seed_determinism():
    a, b = corpus(42, 5, 1, 6), corpus(42, 5, 1, 6)
    assert all(f.equals(g) for f, g in zip(a, b))
    assert not all(f.equals(g) for f, g in zip(a, corpus(43, 5, 1, 6)))
    assert random_s0(7, 0, 4).equals(random_s0(7, 0, 4))


def test_kmin_kmax():
    with pytest.raises(ValueError):
        random_s0(0, 0, 3, kmin=2, kmax=2)


def test_values_are_dyadic():
    for f in corpus(1, 20, 1, 6, kmin=-3, kmax=4):
        scaled = f.values * 2 ** 4
        assert np.array_equal(scaled, np.round(scaled))
        assert np.abs(f.values).max() <= 2 * (2 ** 4 - 2 ** -4)


def test_unsigned():
    assert all(np.all(f.values >= 0) for f in corpus(3, 10, 0, 5, signed=False))


def test_random_set_shape():
    rng = np.random.default_rng(0)
    for _ in range(20):
        mask = random_set(rng, 1, 5)
        assert mask.shape == (64,) and mask.dtype == bool


def test_random_coeffs_dyadic():
    a = random_coeffs(np.random.default_rng(0), range(-1, 4), rows=3)
    assert set(a.scales()) <= set(range(-1, 4))
    assert all(v in (-2, -1, -0.5, 0.5, 1, 2) for v in a.entries.values())


def test_mean_zero_in():
    rng = np.random.default_rng(2)
    for _ in range(30):
        I0 = random_interval(rng, 1, 6)
        assert I0.fits(1) and I0.k <= 6
        f = mean_zero_in(rng, I0, 1, 6)
        assert f.integral() == 0
        assert not np.any(f.values[~I0.mask(1, 6)])


def test_empty_draws_give_zero():
    empty = np.zeros(8, dtype=bool)
    assert not np.any(s0_function(0, 3, {0: empty, 1: empty}).values)


def test_two_term_same_set():
    half = np.array([1, 1, 0, 0], dtype=bool)
    assert s0_function(0, 2, {0: half, 1: half}).values.tolist() == [1.5, 1.5, 0, 0]
