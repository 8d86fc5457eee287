import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import circular_convolve_naive

from cellmorph.convolution import KernelTooLargeError, convolve_fft, convolve_fft_many, wrap_kernel


def test_wrap_single_tap():
    grid = wrap_kernel(np.array([[7.0]]), 4, 4)
    expected = np.zeros((4, 4))
    expected[0, 0] = 7
    assert np.array_equal(grid, expected)


def test_wrap_three_by_three():
    k = np.array([[11, 12, 13], [21, 22, 23], [31, 32, 33]], dtype=float)
    grid = wrap_kernel(k, 8, 8).real
    assert grid[0, 0] == 22
    assert grid[1, 1] == 33
    assert grid[7, 7] == 11
    assert grid[7, 1] == 13
    assert np.count_nonzero(grid) == 9


def test_wrap_five_by_five_layout():
    k = np.array([[10 * r + c for c in range(1, 6)] for r in range(1, 6)], dtype=float)
    n = 9
    grid = wrap_kernel(k, n, n).real
    expected = np.zeros((n, n))
    expected[:3, :3] = [[33, 34, 35], [43, 44, 45], [53, 54, 55]]
    expected[:3, -2:] = [[31, 32], [41, 42], [51, 52]]
    expected[-2:, :3] = [[13, 14, 15], [23, 24, 25]]
    expected[-2:, -2:] = [[11, 12], [21, 22]]
    assert np.array_equal(grid, expected)


def test_wrap_rejects_oversized_kernel():
    with pytest.raises(KernelTooLargeError, match="kernel exceeds image"):
        wrap_kernel(np.ones((5, 5)), 4, 8)


def test_wrap_rejects_even_kernel():
    with pytest.raises(ValueError):
        wrap_kernel(np.ones((4, 4)), 8, 8)


def test_delta_kernel_is_identity(rng):
    img = rng.uniform(0, 255, size=(23, 31))
    delta = np.zeros((5, 5))
    delta[2, 2] = 1
    assert np.max(np.abs(convolve_fft(img, delta) - img)) < 1e-9


def test_constant_image_scales_by_tap_sum(rng):
    k = rng.normal(size=(7, 7))
    out = convolve_fft(np.full((16, 20), 3.0), k)
    assert np.allclose(out, 3.0 * k.sum(), atol=1e-9)


def test_matches_spatial_oracle_64x64_real_9x9(rng):
    img = rng.uniform(0, 255, size=(64, 64))
    k = rng.normal(size=(9, 9))
    assert np.max(np.abs(convolve_fft(img, k) - circular_convolve_naive(img, k))) < 1e-6


def test_matches_spatial_oracle_non_power_of_two_complex(rng):
    img = rng.uniform(0, 255, size=(139, 139))
    k = rng.normal(size=(31, 31)) + 1j * rng.normal(size=(31, 31))
    assert np.max(np.abs(convolve_fft(img, k) - circular_convolve_naive(img, k))) < 1e-6


def test_linearity(rng):
    f = rng.uniform(size=(20, 24))
    g = rng.uniform(size=(20, 24))
    k = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    lhs = convolve_fft(2.5 * f - 1.5 * g, k)
    rhs = 2.5 * convolve_fft(f, k) - 1.5 * convolve_fft(g, k)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * np.max(np.abs(rhs))


@given(st.integers(0, 19), st.integers(0, 23))
def test_shift_commutes(dy, dx):
    rng = np.random.default_rng(3)
    f = rng.uniform(size=(20, 24))
    k = rng.normal(size=(5, 5))
    shifted = convolve_fft(np.roll(f, (dy, dx), axis=(0, 1)), k)
    assert np.allclose(shifted, np.roll(convolve_fft(f, k), (dy, dx), axis=(0, 1)), atol=1e-9)


def test_many_equals_individual(rng):
    img = rng.uniform(size=(17, 19))
    kernels = [rng.normal(size=(s, s)) for s in (1, 3, 7)]
    for a, k in zip(convolve_fft_many(img, kernels), kernels):
        assert np.allclose(a, convolve_fft(img, k))


def test_concurrent_calls_match_serial(rng):
    from concurrent.futures import ThreadPoolExecutor

    imgs = [rng.uniform(size=(32, 32)) for _ in range(8)]
    k = rng.normal(size=(9, 9))
    serial = [convolve_fft(i, k) for i in imgs]
    with ThreadPoolExecutor(4) as pool:
        parallel = list(pool.map(lambda i: convolve_fft(i, k), imgs))
    for a, b in zip(serial, parallel):
        assert np.array_equal(a, b)
