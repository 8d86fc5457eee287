from .color import (
    block_means,
    color_layout,
    color_structure,
    scalable_color,
    subsample_params,
    zigzag,
    zigzag_indices,
)
from .extract import (
    DescriptorError,
    DescriptorExtractor,
    FeatureVector,
    extract_all,
    feature_layout,
)
from .gabor import (
    GaborBankConfig,
    bandwidth_sigma_over_lambda,
    bank_params,
    gabor_bank,
    gabor_kernel,
    homogeneous_texture,
    kernel_size,
)
from .ngtdm import (
    Ngtdm,
    NgtdmConfig,
    busyness,
    coarseness,
    complexity,
    contrast,
    neighborhood_sums,
    ngtdm,
    ngtdm_incremental_abar,
    strength,
    visual_texture,
)

__all__ = [
    "DescriptorError", "DescriptorExtractor", "FeatureVector", "GaborBankConfig",
    "Ngtdm", "NgtdmConfig", "bandwidth_sigma_over_lambda", "bank_params",
    "block_means", "busyness", "coarseness", "color_layout", "color_structure",
    "complexity", "contrast", "extract_all", "feature_layout", "gabor_bank",
    "gabor_kernel", "homogeneous_texture", "kernel_size", "neighborhood_sums",
    "ngtdm", "ngtdm_incremental_abar", "scalable_color", "strength",
    "subsample_params", "visual_texture", "zigzag", "zigzag_indices",
]
