"""Neighborhood gray-tone difference matrix and the five perceptual texture measures.

Only interior pixels, those at least ``d`` pixels from every border, are
counted, so rectangular images are handled with ``n = (W - 2d)(H - 2d)``.
"""

from dataclasses import dataclass

import numpy as np

from .._validation import check_gray, check_positive_int
from ..imagecore import MAX_TONE

N_TONES = MAX_TONE + 1


@dataclass(frozen=True)
class NgtdmConfig:
    distance: int = 1
    epsilon: float = 1e-8

    def __post_init__(self):
        check_positive_int(self.distance, "distance")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class Ngtdm:
    """Per-tone deviation sums ``s`` and probabilities ``p`` over ``n`` interior pixels."""

    s: np.ndarray
    p: np.ndarray
    n: int

    @property
    def n_tones_present(self):
        return int(np.count_nonzero(self.p))


def _interior_shape(tones, d):
    h, w = tones.shape
    ih, iw = h - 2 * d, w - 2 * d
    if ih < 1 or iw < 1:
        raise ValueError(f"image too small for NGTDM radius d={d}: {w}x{h}")
    return ih, iw


def neighborhood_sums(img, d=1):
    """Sum of the ``(2d+1)^2`` window (center included) at every interior pixel.

    The first interior pixel is summed in full, the rest of the first row is
    updated from its left neighbor, and each later row from the row above by
    adding the entering row and subtracting the leaving one. Cost is O(d)
    per pixel and the arithmetic is exact integer.
    """
    f = check_gray(img)
    d = check_positive_int(d, "d")
    ih, iw = _interior_shape(f, d)
    span = 2 * d + 1
    sums = np.empty((ih, iw), dtype=np.int64)

    sums[0, 0] = f[:span, :span].sum()
    for c in range(1, iw):
        sums[0, c] = sums[0, c - 1] + f[:span, c + 2 * d].sum() - f[:span, c - 1].sum()

    for r in range(1, ih):
        entering = np.zeros(iw, dtype=np.int64)
        leaving = np.zeros(iw, dtype=np.int64)
        for j in range(span):
            entering += f[r + 2 * d, j:j + iw]
            leaving += f[r - 1, j:j + iw]
        sums[r] = sums[r - 1] + entering - leaving
    return sums


def ngtdm_incremental_abar(img, d=1):
    """Mean of the neighbors (center excluded) at each interior pixel."""
    f = check_gray(img)
    sums = neighborhood_sums(f, d)
    ih, iw = sums.shape
    center = f[d:d + ih, d:d + iw]
    return (sums - center) / ((2 * d + 1) ** 2 - 1)


def ngtdm(img, cfg=None):
    """Compute the NGTDM of a gray image."""
    cfg = cfg or NgtdmConfig()
    f = check_gray(img)
    d = cfg.distance
    abar = ngtdm_incremental_abar(f, d)
    ih, iw = abar.shape
    center = f[d:d + ih, d:d + iw].ravel()
    n = ih * iw
    counts = np.bincount(center, minlength=N_TONES)
    s = np.bincount(center, weights=np.abs(center - abar.ravel()), minlength=N_TONES)
    return Ngtdm(s=s, p=counts / n, n=n)


def _present(ng):
    idx = np.flatnonzero(ng.p)
    return idx.astype(float), ng.p[idx], ng.s[idx]


def _epsilon(cfg):
    return (cfg or NgtdmConfig()).epsilon


def coarseness(ng, cfg=None):
    return 1.0 / (_epsilon(cfg) + float(np.dot(ng.p, ng.s)))


def contrast(ng, cfg=None):
    """Dynamic range times mean local variation; 0 when fewer than two tones occur."""
    tones, p, _ = _present(ng)
    n_g = len(tones)
    if n_g < 2:
        return 0.0
    diff2 = (tones[:, None] - tones[None, :]) ** 2
    spread = float(np.sum(p[:, None] * p[None, :] * diff2)) / (n_g * (n_g - 1))
    return spread * float(ng.s.sum()) / ng.n


def busyness(ng, cfg=None):
    """Spatial rate of change over the sum of ``|i p_i - j p_j|``, ``j >= i``, both tones present."""
    tones, p, _ = _present(ng)
    numerator = float(np.dot(ng.p, ng.s))
    ip = tones * p
    denominator = 0.5 * float(np.abs(ip[:, None] - ip[None, :]).sum())
    if denominator == 0.0:
        return numerator / _epsilon(cfg)
    return numerator / denominator


def complexity(ng, cfg=None):
    tones, p, s = _present(ng)
    ps = p * s
    dist = np.abs(tones[:, None] - tones[None, :])
    terms = dist * (ps[:, None] + ps[None, :]) / (ng.n * (p[:, None] + p[None, :]))
    return float(terms.sum())


def strength(ng, cfg=None):
    tones, p, _ = _present(ng)
    diff2 = (tones[:, None] - tones[None, :]) ** 2
    numerator = float(np.sum((p[:, None] + p[None, :]) * diff2))
    return numerator / (_epsilon(cfg) + float(ng.s.sum()))


TEXTURE_MEASURES = (
    ("coarseness", coarseness),
    ("contrast", contrast),
    ("busyness", busyness),
    ("complexity", complexity),
    ("strength", strength),
)


def visual_texture(img, cfg=None):
    """The five measures, in the order of :data:`TEXTURE_MEASURES`."""
    ng = ngtdm(img, cfg)
    return np.array([fn(ng, cfg) for _, fn in TEXTURE_MEASURES])
