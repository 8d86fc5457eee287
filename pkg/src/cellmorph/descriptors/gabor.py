"""Gabor wavelet filter bank and the Homogeneous Texture descriptor.

Adjacent filters are placed so that their half-peak contours touch in the
frequency plane. The filter is rotated rather than the image.
"""

import math
from dataclasses import dataclass

import numpy as np

from .._validation import check_gray
from ..convolution import convolve_fft_many

LN2 = math.log(2.0)
MAX_KERNEL_SIZE = 91
TRUNCATION_SIGMAS = 4.0


@dataclass(frozen=True)
class GaborBankConfig:
    """Frequency range (cycles/pixel), scale count and orientation count."""

    u_lo: float = 0.05
    u_hi: float = 0.4
    n_scales: int = 5
    n_orientations: int = 6
    max_kernel_size: int = MAX_KERNEL_SIZE

    def __post_init__(self):
        if not 0 < self.u_lo < self.u_hi < 0.5:
            raise ValueError(
                f"need 0 < u_lo < u_hi < 0.5, got u_lo={self.u_lo}, u_hi={self.u_hi}")
        if self.n_scales < 2:
            raise ValueError(f"n_scales must be >= 2, got {self.n_scales}")
        if self.n_orientations < 1:
            raise ValueError(f"n_orientations must be >= 1, got {self.n_orientations}")
        if self.max_kernel_size < 1 or self.max_kernel_size % 2 == 0:
            raise ValueError(f"max_kernel_size must be odd and positive, got {self.max_kernel_size}")

    @property
    def n_features(self):
        return 2 * self.n_scales * self.n_orientations


@dataclass(frozen=True)
class GaborParams:
    scale_factor: float
    sigma_u: float
    sigma_v: float
    sigma_x: float
    sigma_y: float


def bank_params(cfg):
    """Scale factor ``a`` and the frequency/spatial widths of the mother wavelet."""
    a = (cfg.u_hi / cfg.u_lo) ** (1.0 / (cfg.n_scales - 1))
    sigma_u = (a - 1.0) * cfg.u_hi / ((a + 1.0) * math.sqrt(2.0 * LN2))
    sigma_v = (math.tan(math.pi / (2.0 * cfg.n_orientations))
               * (cfg.u_hi - 2.0 * LN2 * sigma_u ** 2 / cfg.u_hi)
               * math.sqrt(2.0 * LN2 - (2.0 * LN2 * sigma_u / cfg.u_hi) ** 2))
    if sigma_v <= 0:
        raise ValueError(f"configuration gives non-positive sigma_v={sigma_v}")
    return GaborParams(
        scale_factor=a,
        sigma_u=sigma_u,
        sigma_v=sigma_v,
        sigma_x=1.0 / (2.0 * math.pi * sigma_u),
        sigma_y=1.0 / (2.0 * math.pi * sigma_v),
    )


def bandwidth_sigma_over_lambda(octaves=1.0):
    """Ratio of Gaussian width to wavelength for a bandwidth given in octaves."""
    two_b = 2.0 ** octaves
    return math.sqrt(LN2 / 2.0) / math.pi * (two_b + 1.0) / (two_b - 1.0)


def kernel_size(cfg, scale, limit=None):
    """Odd side length of the kernel at ``scale``.

    Taps beyond four (scaled) spatial sigmas are dropped; the size is capped
    at ``cfg.max_kernel_size`` and at ``limit`` when given.
    """
    p = bank_params(cfg)
    reach = TRUNCATION_SIGMAS * max(p.sigma_x, p.sigma_y) * p.scale_factor ** scale
    size = 2 * math.ceil(reach) + 1
    cap = cfg.max_kernel_size
    if limit is not None:
        cap = min(cap, limit if limit % 2 else limit - 1)
    return max(1, min(size, cap))


def gabor_kernel(cfg, scale, orientation, size=None):
    """Complex Gabor kernel for scale index ``scale`` and orientation index ``orientation``.

    Row offsets are ``y`` (downwards), column offsets ``x``.
    """
    if not 0 <= scale < cfg.n_scales:
        raise ValueError(f"scale must be in [0, {cfg.n_scales}), got {scale}")
    if not 0 <= orientation < cfg.n_orientations:
        raise ValueError(f"orientation must be in [0, {cfg.n_orientations}), got {orientation}")
    p = bank_params(cfg)
    if size is None:
        size = kernel_size(cfg, scale)
    half = size // 2
    y, x = np.mgrid[-half:half + 1, -half:half + 1].astype(float)
    theta = orientation * math.pi / cfg.n_orientations
    shrink = p.scale_factor ** (-scale)
    xr = shrink * (x * math.cos(theta) + y * math.sin(theta))
    yr = shrink * (-x * math.sin(theta) + y * math.cos(theta))
    envelope = np.exp(-0.5 * (xr ** 2 / p.sigma_x ** 2 + yr ** 2 / p.sigma_y ** 2))
    envelope /= 2.0 * math.pi * p.sigma_x * p.sigma_y
    return shrink * envelope * np.exp(2j * math.pi * cfg.u_hi * xr)


def gabor_bank(cfg, limit=None):
    """All ``S * K`` kernels as ``(scale, orientation, kernel)`` tuples, scale-major."""
    bank = []
    for m in range(cfg.n_scales):
        size = kernel_size(cfg, m, limit)
        for n in range(cfg.n_orientations):
            bank.append((m, n, gabor_kernel(cfg, m, n, size)))
    return bank


def homogeneous_texture(img, cfg=None, clip_to_image=False):
    """Mean and standard deviation of the Gabor response magnitude per filter.

    Values are interleaved ``[mean, std]`` per filter in scale-major order,
    ``2 * S * K`` numbers in total.

    With ``clip_to_image`` the kernels are additionally truncated to the
    largest odd size that fits the image; otherwise an oversized kernel
    raises :class:`~cellmorph.convolution.KernelTooLargeError`.
    """
    cfg = cfg or GaborBankConfig()
    tones = check_gray(img)
    limit = min(tones.shape) if clip_to_image else None
    bank = gabor_bank(cfg, limit)
    responses = convolve_fft_many(tones, [k for _, _, k in bank])
    out = np.empty(2 * len(bank))
    for i, response in enumerate(responses):
        mag = np.abs(response)
        out[2 * i] = mag.mean()
        out[2 * i + 1] = mag.std()
    return out
