"""Color and texture descriptors for image classification with a kernel SVM."""

from .dataview import MidrangeScaler
from .descriptors import DescriptorExtractor, extract_all
from .evaluation import cross_validate
from .imagecore import GrayImage, RasterImage, load_image
from .svm import KernelSVC, KernelSpec, TrainConfig

__version__ = "0.1.0"

__all__ = [
    "DescriptorExtractor", "GrayImage", "KernelSVC", "KernelSpec", "MidrangeScaler",
    "RasterImage", "TrainConfig", "cross_validate", "extract_all", "load_image",
]
