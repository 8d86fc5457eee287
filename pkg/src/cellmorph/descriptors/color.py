"""Scalable Color, Color Structure and Color Layout descriptors."""

import math

import numpy as np
from scipy.fft import dctn

from .._validation import check_rgb
from ..imagecore import N_HSV_BINS, hsv_bins, rgb_to_yuv

STRUCTURE_SIZE = 8
LAYOUT_GRID = 8
LAYOUT_COEFFS = (10, 5, 5)


def scalable_color(img):
    """Relative frequency of each of the 256 quantized HSV colors."""
    bins = hsv_bins(img)
    counts = np.bincount(bins.ravel(), minlength=N_HSV_BINS)
    return counts / bins.size


def _round_half_away(x):
    return math.copysign(math.floor(abs(x) + 0.5), x)


def subsample_params(w, h):
    """Sub-sampling exponent ``p``, factor ``K = 2**p`` and element extent ``E = 8K``."""
    if w < 1 or h < 1:
        raise ValueError(f"image size must be positive, got {w}x{h}")
    p = max(0, int(_round_half_away(0.5 * math.log2(w * h) - 8)))
    k = 2 ** p
    return p, k, STRUCTURE_SIZE * k


def _rgb_bins(px, levels):
    q = (px.astype(np.int64) * levels) // 256
    return (q[..., 0] * levels + q[..., 1]) * levels + q[..., 2]


def color_structure(img, levels_per_channel=None):
    """Color Structure histogram.

    The image is replacement-subsampled by ``K`` from :func:`subsample_params`
    and an 8x8 structuring element is slid over the subsampled grid in steps
    of one. Each window counts once for every color present in it and the
    histogram is divided by the number of window positions.

    Parameters
    ----------
    img : RasterImage or array_like
    levels_per_channel : int, optional
        ``None`` (default) quantizes with the shared 256-bin HSV quantizer.
        An integer ``L`` instead quantizes R, G and B uniformly into ``L``
        levels each, giving ``L**3`` bins.
    """
    px = check_rgb(img)
    h, w = px.shape[:2]
    _, k, _ = subsample_params(w, h)
    sub = px[::k, ::k]
    sh, sw = sub.shape[:2]
    if sh < STRUCTURE_SIZE or sw < STRUCTURE_SIZE:
        raise ValueError(
            f"image too small for color structure: {w}x{h} subsampled by {k} is {sw}x{sh}")

    if levels_per_channel is None:
        bins = hsv_bins(sub)
        n_bins = N_HSV_BINS
    else:
        if levels_per_channel < 1 or levels_per_channel > 256:
            raise ValueError(f"levels_per_channel must be in [1, 256], got {levels_per_channel}")
        bins = _rgb_bins(sub, levels_per_channel)
        n_bins = levels_per_channel ** 3

    n_rows = sh - STRUCTURE_SIZE + 1
    n_cols = sw - STRUCTURE_SIZE + 1
    hist = np.zeros(n_bins)
    for color in np.unique(bins):
        mask = (bins == color).astype(np.int64)
        integral = np.zeros((sh + 1, sw + 1), dtype=np.int64)
        integral[1:, 1:] = mask.cumsum(0).cumsum(1)
        s = STRUCTURE_SIZE
        window = (integral[s:, s:] - integral[:-s, s:]
                  - integral[s:, :-s] + integral[:-s, :-s])
        hist[color] = np.count_nonzero(window)
    return hist / (n_rows * n_cols)


def zigzag_indices(n):
    """(row, column) pairs of an ``n x n`` matrix in zigzag scan order.

    The scan starts at the top-left, steps down to (1, 0), then runs along
    the anti-diagonals alternating direction.
    """
    # x is the column and y the row; "forward" walks down-left.
    x = y = 0
    forward = True
    order = [(0, 0)]
    for _ in range(n * n - 1):
        if forward:
            if y < n - 1:
                y += 1
                x -= 1
                if x < 0:
                    x = 0
                    forward = False
            else:
                x += 1
                forward = False
        else:
            if x < n - 1:
                x += 1
                y -= 1
                if y < 0:
                    y = 0
                    forward = True
            else:
                y += 1
                forward = True
        order.append((y, x))
    return order


def zigzag(matrix):
    """Entries of a square matrix listed in zigzag order."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"zigzag needs a square matrix, got shape {m.shape}")
    rows, cols = zip(*zigzag_indices(m.shape[0]))
    return m[list(rows), list(cols)]


def _pool_matrix(n_in, n_out):
    # Area-weighted block means; pixel i covers [i, i+1), block b covers
    # [b*n_in/n_out, (b+1)*n_in/n_out). Exact under integer upscaling.
    edges = np.arange(n_out + 1) * (n_in / n_out)
    lo = np.maximum(edges[:-1, None], np.arange(n_in)[None, :])
    hi = np.minimum(edges[1:, None], np.arange(1, n_in + 1)[None, :])
    weights = np.clip(hi - lo, 0.0, None)
    return weights / weights.sum(axis=1, keepdims=True)


def block_means(channel, grid=LAYOUT_GRID):
    """Average-pool a 2-D array into a ``grid x grid`` array of block means."""
    channel = np.asarray(channel, dtype=float)
    ph = _pool_matrix(channel.shape[0], grid)
    pw = _pool_matrix(channel.shape[1], grid)
    return ph @ channel @ pw.T


def color_layout(img):
    """Color Layout descriptor: 10 Y, 5 U and 5 V DCT coefficients.

    Each YUV channel is pooled to 8x8 block means, transformed with an
    orthonormal 2-D DCT-II and read in zigzag order.
    """
    px = check_rgb(img)
    h, w = px.shape[:2]
    if h < LAYOUT_GRID or w < LAYOUT_GRID:
        raise ValueError(f"image too small for color layout: {w}x{h}, need at least 8x8")
    channels = rgb_to_yuv(px[..., 0], px[..., 1], px[..., 2])
    out = []
    for channel, n_coeffs in zip(channels, LAYOUT_COEFFS):
        coeffs = dctn(block_means(channel), type=2, norm="ortho")
        out.append(zigzag(coeffs)[:n_coeffs])
    return np.concatenate(out)
