"""Input validation helpers shared by the descriptor and estimator code."""

import numbers

import numpy as np


def check_rgb(img, min_size=1, name="image"):
    """Return ``img`` as a C-contiguous ``(H, W, 3)`` uint8 array.

    Accepts :class:`~cellmorph.imagecore.RasterImage` instances, integer
    arrays with values in [0, 255] and ``(H, W, 4)`` arrays (alpha is
    dropped).
    """
    pixels = getattr(img, "pixels", img)
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] not in (3, 4):
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    arr = arr[:, :, :3]
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.number):
            raise TypeError(f"{name} must be numeric, got {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError(f"{name} channel values must lie in [0, 255]")
        if np.issubdtype(arr.dtype, np.floating) and not np.all(arr == np.floor(arr)):
            raise ValueError(f"{name} channel values must be integers")
        arr = arr.astype(np.uint8)
    h, w = arr.shape[:2]
    if h < min_size or w < min_size:
        raise ValueError(f"{name} must be at least {min_size}x{min_size}, got {w}x{h}")
    return np.ascontiguousarray(arr)


def check_gray(img, min_size=1, name="gray image"):
    """Return ``img`` as a 2-D int64 array of tones in [0, 255]."""
    tones = getattr(img, "tones", img)
    arr = np.asarray(tones)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError(f"{name} tones must lie in [0, 255]")
    h, w = arr.shape
    if h < min_size or w < min_size:
        raise ValueError(f"{name} must be at least {min_size}x{min_size}, got {w}x{h}")
    return arr.astype(np.int64, copy=False)


def check_kernel(kernel):
    """Return ``kernel`` as a square complex array of odd size."""
    taps = np.asarray(getattr(kernel, "taps", kernel), dtype=complex)
    if taps.ndim != 2 or taps.shape[0] != taps.shape[1]:
        raise ValueError(f"kernel must be square, got shape {taps.shape}")
    if taps.shape[0] % 2 == 0:
        raise ValueError(f"kernel size must be odd, got {taps.shape[0]}")
    return taps


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
