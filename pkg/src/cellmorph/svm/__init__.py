from .binary import (
    BinarySvmModel,
    TrainConfig,
    decision_value,
    feasibility_gap,
    sgn,
    train_binary,
)
from .estimator import KernelSVC
from .io import ModelFormatError, dumps_model, load_model, loads_model, save_model
from .kernels import GramCache, KernelSpec, gram_psd_check, kernel_eval, kernel_matrix
from .multiclass import OneVsRestModel, train_multiclass

__all__ = [
    "BinarySvmModel", "GramCache", "KernelSVC", "KernelSpec", "ModelFormatError",
    "OneVsRestModel", "TrainConfig", "decision_value", "dumps_model", "feasibility_gap",
    "gram_psd_check", "kernel_eval", "kernel_matrix", "load_model", "loads_model",
    "save_model", "sgn", "train_binary", "train_multiclass",
]
