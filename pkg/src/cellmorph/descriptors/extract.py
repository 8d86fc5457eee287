"""Concatenate every descriptor into one feature vector per image."""

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, TransformerMixin

from ..imagecore import N_HSV_BINS, RasterImage, to_gray
from .color import LAYOUT_COEFFS, color_layout, color_structure, scalable_color
from .gabor import GaborBankConfig, homogeneous_texture
from .ngtdm import TEXTURE_MEASURES, NgtdmConfig, visual_texture


class DescriptorError(ValueError):
    """A descriptor failed; ``descriptor`` names which one."""

    def __init__(self, descriptor, cause):
        super().__init__(f"{descriptor}: {cause}")
        self.descriptor = descriptor


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    layout: tuple

    def __len__(self):
        return len(self.values)

    def segment(self, name):
        start = 0
        for seg, length in self.layout:
            if seg == name:
                return self.values[start:start + length]
            start += length
        raise KeyError(name)

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.values, other.values)


def feature_layout(gabor_cfg=None, cs_levels=None):
    """Ordered ``(segment name, length)`` pairs for a configuration."""
    gabor_cfg = gabor_cfg or GaborBankConfig()
    cs_len = N_HSV_BINS if cs_levels is None else cs_levels ** 3
    return (
        ("scalable_color", N_HSV_BINS),
        ("color_structure", cs_len),
        ("color_layout", sum(LAYOUT_COEFFS)),
        ("homogeneous_texture", gabor_cfg.n_features),
        ("visual_texture", len(TEXTURE_MEASURES)),
    )


def extract_all(img, gabor_cfg=None, ngtdm_cfg=None, cs_levels=None):
    """Compute every descriptor of ``img`` and concatenate them.

    Gabor kernels larger than the image are truncated to fit it, so small
    images (down to 8x8) are accepted.
    """
    gabor_cfg = gabor_cfg or GaborBankConfig()
    ngtdm_cfg = ngtdm_cfg or NgtdmConfig()
    if not isinstance(img, RasterImage):
        img = RasterImage(img)
    gray = to_gray(img)
    steps = (
        ("scalable_color", lambda: scalable_color(img)),
        ("color_structure", lambda: color_structure(img, cs_levels)),
        ("color_layout", lambda: color_layout(img)),
        ("homogeneous_texture", lambda: homogeneous_texture(gray, gabor_cfg, clip_to_image=True)),
        ("visual_texture", lambda: visual_texture(gray, ngtdm_cfg)),
    )
    parts = []
    for name, step in steps:
        try:
            parts.append(np.asarray(step(), dtype=float))
        except ValueError as exc:
            raise DescriptorError(name, exc) from exc
    values = np.concatenate(parts)
    if not np.all(np.isfinite(values)):
        raise DescriptorError("extract_all", "non-finite feature value")
    return FeatureVector(values, feature_layout(gabor_cfg, cs_levels))


class DescriptorExtractor(TransformerMixin, BaseEstimator):
    """Transform a sequence of RGB images into a feature matrix.

    Parameters
    ----------
    u_lo, u_hi : float
        Lowest and highest Gabor center frequency in cycles per pixel.
    n_scales, n_orientations : int
        Size of the Gabor bank.
    ngtdm_distance : int
        Neighborhood radius of the gray-tone difference matrix.
    epsilon : float
        Guard added to the coarseness and strength denominators.
    cs_levels : int or None
        Color Structure quantizer; ``None`` uses the 256-bin HSV quantizer.
    n_jobs : int
        Images processed in parallel; output order always follows input order.
    """

    def __init__(self, u_lo=0.05, u_hi=0.4, n_scales=5, n_orientations=6,
                 ngtdm_distance=1, epsilon=1e-8, cs_levels=None, n_jobs=1):
        self.u_lo = u_lo
        self.u_hi = u_hi
        self.n_scales = n_scales
        self.n_orientations = n_orientations
        self.ngtdm_distance = ngtdm_distance
        self.epsilon = epsilon
        self.cs_levels = cs_levels
        self.n_jobs = n_jobs

    def _configs(self):
        return (GaborBankConfig(self.u_lo, self.u_hi, self.n_scales, self.n_orientations),
                NgtdmConfig(self.ngtdm_distance, self.epsilon))

    def fit(self, X, y=None):
        gabor_cfg, _ = self._configs()
        self.layout_ = feature_layout(gabor_cfg, self.cs_levels)
        self.n_features_out_ = sum(n for _, n in self.layout_)
        return self

    def transform(self, X):
        gabor_cfg, ngtdm_cfg = self._configs()
        rows = Parallel(n_jobs=self.n_jobs)(
            delayed(extract_all)(img, gabor_cfg, ngtdm_cfg, self.cs_levels) for img in X)
        width = sum(n for _, n in feature_layout(gabor_cfg, self.cs_levels))
        if not rows:
            return np.empty((0, width))
        return np.vstack([r.values for r in rows])

    def get_feature_names_out(self, input_features=None):
        gabor_cfg, _ = self._configs()
        names = []
        for seg, length in feature_layout(gabor_cfg, self.cs_levels):
            names.extend(f"{seg}_{i}" for i in range(length))
        return np.asarray(names, dtype=object)
