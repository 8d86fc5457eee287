"""Frequency-domain 2-D circular convolution.

The kernel is laid out in an image-sized grid with its center tap at the
origin and the remaining quadrants wrapped to the four corners, so that the
element-wise product of the two spectra is the spectrum of the circular
convolution. Transform sizes are arbitrary; nothing is padded to a power
of two.
"""

import numpy as np

from ._validation import check_kernel


class KernelTooLargeError(ValueError):
    pass


def wrap_kernel(kernel, out_w, out_h):
    """Place ``kernel`` in an ``out_h`` x ``out_w`` grid wrapped around the origin.

    Tap ``(r, c)`` of a ``K x K`` kernel lands at
    ``((r - K // 2) % out_h, (c - K // 2) % out_w)``; every other entry is zero.

    Raises
    ------
    KernelTooLargeError
        If ``K`` exceeds ``min(out_w, out_h)``.
    """
    taps = check_kernel(kernel)
    size = taps.shape[0]
    if size > min(out_w, out_h):
        raise KernelTooLargeError(
            f"kernel exceeds image: {size}x{size} kernel, {out_w}x{out_h} image")
    half = size // 2
    grid = np.zeros((out_h, out_w), dtype=complex)
    grid[:size, :size] = taps
    return np.roll(grid, (-half, -half), axis=(0, 1))


def convolve_fft(img, kernel):
    """Circular convolution of a real 2-D grid with a kernel via the DFT.

    Forward transforms are unnormalized and the inverse divides by W*H, so a
    unit center tap reproduces the input.

    Parameters
    ----------
    img : array_like, shape (H, W)
        Real-valued image (gray tones or any float grid).
    kernel : array_like, shape (K, K)
        Odd-sized real or complex kernel, ``K <= min(H, W)``.

    Returns
    -------
    ndarray of complex, shape (H, W)
    """
    grid = np.asarray(getattr(img, "tones", img), dtype=float)
    if grid.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {grid.shape}")
    h, w = grid.shape
    wrapped = wrap_kernel(kernel, w, h)
    return np.fft.ifft2(np.fft.fft2(grid) * np.fft.fft2(wrapped))


def convolve_fft_many(img, kernels):
    """Convolve one image with several kernels, transforming the image once."""
    grid = np.asarray(getattr(img, "tones", img), dtype=float)
    h, w = grid.shape
    spectrum = np.fft.fft2(grid)
    return [np.fft.ifft2(spectrum * np.fft.fft2(wrap_kernel(k, w, h))) for k in kernels]
