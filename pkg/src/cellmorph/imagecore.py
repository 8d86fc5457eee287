"""Pixel storage, color-space conversion and HSV quantization.

All conversion functions accept scalars or numpy arrays and broadcast.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_gray, check_rgb

#: Largest gray tone. Gray images always use 256 tones.
MAX_TONE = 255

HUE_LEVELS = 16
SAT_LEVELS = 4
VAL_LEVELS = 4
N_HSV_BINS = HUE_LEVELS * SAT_LEVELS * VAL_LEVELS

_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True, eq=False)
class RasterImage:
    """An 8-bit RGB image stored row-major as a ``(height, width, 3)`` array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = check_rgb(self.pixels)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @classmethod
    def filled(cls, width, height, rgb):
        return cls(np.broadcast_to(np.asarray(rgb, dtype=np.uint8), (height, width, 3)).copy())

    def crop(self, left, top, width, height):
        """Return the ``width`` x ``height`` region whose top-left corner is ``(left, top)``."""
        if left < 0 or top < 0 or width < 1 or height < 1 \
                or left + width > self.width or top + height > self.height:
            raise ValueError(
                f"crop ({left}, {top}, {width}x{height}) outside image {self.width}x{self.height}")
        return RasterImage(self.pixels[top:top + height, left:left + width])

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """A gray-tone image, row-major ``(height, width)`` integers in [0, 255]."""

    tones: np.ndarray

    def __post_init__(self):
        arr = check_gray(self.tones)
        arr.setflags(write=False)
        object.__setattr__(self, "tones", arr)

    @property
    def width(self):
        return self.tones.shape[1]

    @property
    def height(self):
        return self.tones.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.tones, other.tones)


def load_image(path):
    """Decode a PNG or JPEG file into a :class:`RasterImage` (alpha stripped)."""
    from PIL import Image

    with Image.open(path) as im:
        return RasterImage(np.asarray(im.convert("RGB")))


def save_image(img, path):
    from PIL import Image

    Image.fromarray(check_rgb(img)).save(path)


def rgb_to_hsv(r, g, b):
    """Hexcone RGB -> HSV.

    Returns hue in degrees [0, 360) and saturation, value in [0, 1].
    Achromatic colors get hue 0; black gets saturation 0.
    """
    r = np.asarray(r, dtype=float) / 255.0
    g = np.asarray(g, dtype=float) / 255.0
    b = np.asarray(b, dtype=float) / 255.0
    cmax = np.maximum(np.maximum(r, g), b)
    cmin = np.minimum(np.minimum(r, g), b)
    delta = cmax - cmin
    safe = np.where(delta > 0, delta, 1.0)

    hue = np.zeros(np.broadcast(r, g, b).shape)
    hue = np.where(cmax == b, 4.0 + (r - g) / safe, hue)
    hue = np.where(cmax == g, 2.0 + (b - r) / safe, hue)
    hue = np.where(cmax == r, ((g - b) / safe) % 6.0, hue)
    hue = np.where(delta > 0, hue * 60.0, 0.0)
    hue = np.where(hue >= 360.0, hue - 360.0, hue)

    sat = np.where(cmax > 0, delta / np.where(cmax > 0, cmax, 1.0), 0.0)
    if hue.ndim == 0:
        return float(hue), float(sat), float(cmax)
    return hue, sat, cmax


def hsv_to_rgb(h, s, v):
    """Inverse of :func:`rgb_to_hsv`; channels are returned as floats in [0, 255]."""
    h = np.asarray(h, dtype=float) % 360.0
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    c = v * s
    hp = h / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    sector = np.floor(hp).astype(int) % 6
    zero = np.zeros_like(c)
    r = np.choose(sector, [c, x, zero, zero, x, c])
    g = np.choose(sector, [x, c, c, x, zero, zero])
    b = np.choose(sector, [zero, zero, x, c, c, x])
    m = v - c
    return (r + m) * 255.0, (g + m) * 255.0, (b + m) * 255.0


def rgb_to_yuv(r, g, b):
    """BT.601 RGB -> YUV with U and V offset by 128 and clamped to [0, 255]."""
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    u = np.clip(0.492 * (b - y) + 128.0, 0.0, 255.0)
    v = np.clip(0.877 * (r - y) + 128.0, 0.0, 255.0)
    if y.ndim == 0:
        return float(y), float(u), float(v)
    return y, u, v


def to_gray(img):
    """Luminance gray image: BT.601 luma rounded half-up and clamped to [0, 255]."""
    px = check_rgb(img).astype(float)
    luma = px @ _LUMA
    tones = np.clip(np.floor(luma + 0.5), 0, MAX_TONE).astype(np.int64)
    return GrayImage(tones)


def quantize_hsv(h, s, v):
    """Map HSV to one of 256 bins: 16 hue x 4 saturation x 4 value levels.

    Levels are uniform half-open intervals; the top boundary (s or v equal
    to 1) belongs to the last level.
    """
    h = np.asarray(h, dtype=float)
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    hl = np.minimum(np.floor(h / (360.0 / HUE_LEVELS)), HUE_LEVELS - 1).astype(np.int64)
    sl = np.minimum(np.floor(s * SAT_LEVELS), SAT_LEVELS - 1).astype(np.int64)
    vl = np.minimum(np.floor(v * VAL_LEVELS), VAL_LEVELS - 1).astype(np.int64)
    bins = hl * (SAT_LEVELS * VAL_LEVELS) + sl * VAL_LEVELS + vl
    if bins.ndim == 0:
        return int(bins)
    return bins


def hsv_bins(img):
    """Quantized HSV bin index of every pixel, shape ``(H, W)``."""
    px = check_rgb(img)
    h, s, v = rgb_to_hsv(px[..., 0], px[..., 1], px[..., 2])
    return quantize_hsv(h, s, v)
