"""Synthetic test images and a small labeled texture data set."""

import os

import numpy as np

from .imagecore import RasterImage, save_image

FLAT, CHECKERBOARD, GRATING = 0, 1, 2
TEXTURE_CLASSES = {FLAT: "flat", CHECKERBOARD: "checkerboard", GRATING: "grating"}


def _to_image(rgb):
    return RasterImage(np.clip(np.rint(rgb), 0, 255).astype(np.uint8))


def flat_image(width, height, rgb):
    return RasterImage.filled(width, height, rgb)


def checkerboard(width, height, cell=1, dark=(0, 0, 0), light=(255, 255, 255)):
    """Alternating squares of ``cell`` pixels, dark at the top-left."""
    r, c = np.mgrid[0:height, 0:width]
    light_mask = ((r // cell + c // cell) % 2).astype(bool)
    out = np.where(light_mask[..., None], np.asarray(light), np.asarray(dark))
    return RasterImage(out.astype(np.uint8))


def grating(width, height, frequency, angle=0.0, mean=128.0, amplitude=100.0, color=(1.0, 1.0, 1.0)):
    """Sinusoidal grating; ``frequency`` in cycles per pixel, ``angle`` in radians."""
    r, c = np.mgrid[0:height, 0:width].astype(float)
    phase = 2 * np.pi * frequency * (c * np.cos(angle) + r * np.sin(angle))
    gray = mean + amplitude * np.cos(phase)
    return _to_image(gray[..., None] * np.asarray(color, dtype=float))


def disk_mask(size, center, radius):
    r, c = np.mgrid[0:size, 0:size]
    return (r - center[0] + 0.5) ** 2 + (c - center[1] + 0.5) ** 2 <= radius ** 2


def one_big_disk(size=64, radius=12):
    """Black disk on white; the disk is a 2x upscale of a disk of half the radius.

    Paired with :func:`four_small_disks` of the same ``size`` and ``radius``
    the two images have exactly the same number of black pixels.
    """
    half = size // 2
    small = disk_mask(half // 2, (half // 4, half // 4), radius / 2)
    big = np.kron(small, np.ones((2, 2), dtype=bool))
    mask = np.zeros((size, size), dtype=bool)
    off = (size - big.shape[0]) // 2
    mask[off:off + big.shape[0], off:off + big.shape[1]] = big
    return _mask_image(mask)


def four_small_disks(size=64, radius=12):
    """Four black disks of radius ``radius / 2``, one centered in each quadrant."""
    half = size // 2
    small = disk_mask(half // 2, (half // 4, half // 4), radius / 2)
    mask = np.zeros((size, size), dtype=bool)
    q = half // 2
    for top in (q // 2, half + q // 2):
        for left in (q // 2, half + q // 2):
            mask[top:top + q, left:left + q] = small
    return _mask_image(mask)


def _mask_image(mask):
    out = np.where(mask[..., None], 0, 255).astype(np.uint8)
    return RasterImage(np.repeat(out, 3, axis=2))


def texture_image(kind, rng, size=64):
    """One randomized member of a texture class.

    Flat patches get a random color, checkerboards are near black and white
    with a random cell size, gratings are gray with random frequency and
    orientation.
    """
    if kind == FLAT:
        base = rng.uniform(40, 215, size=3)
        noise = rng.normal(0, 4, size=(size, size, 3))
        return _to_image(base + noise)
    if kind == CHECKERBOARD:
        cell = int(rng.integers(2, 6))
        dark = rng.integers(0, 60, size=3)
        light = rng.integers(190, 256, size=3)
        return checkerboard(size, size, cell, tuple(dark), tuple(light))
    if kind == GRATING:
        freq = rng.uniform(0.08, 0.2)
        angle = rng.uniform(0, np.pi)
        return grating(size, size, freq, angle, amplitude=rng.uniform(60, 110))
    raise ValueError(f"unknown texture class {kind}")


def texture_dataset(n_per_class=50, seed=0, size=64, classes=(FLAT, CHECKERBOARD, GRATING)):
    """Return ``(images, labels)`` with classes interleaved."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for _ in range(n_per_class):
        for kind in classes:
            images.append(texture_image(kind, rng, size))
            labels.append(kind)
    return images, np.array(labels, dtype=np.int64)


def write_dataset(root, images, labels):
    """Save images as ``root/<label>/<index>.png``; returns the written paths."""
    paths = []
    for i, (img, label) in enumerate(zip(images, labels)):
        folder = os.path.join(root, str(int(label)))
        os.makedirs(folder, exist_ok=True)
        path = os.path.join(folder, f"{i:05d}.png")
        save_image(img, path)
        paths.append(path)
    return paths
