"""One-against-the-rest multiclass SVM."""

from dataclasses import dataclass

import numpy as np

from ..dataview import ArrayView, DataView, view_class_map_binary
from .binary import TrainConfig, train_binary
from .kernels import KernelSpec


@dataclass(frozen=True, eq=False)
class OneVsRestModel:
    """``machines[i]`` separates ``classes[i]`` from every other class."""

    classes: tuple
    machines: tuple

    @property
    def converged(self):
        return all(m.converged for m in self.machines)

    @property
    def n_features(self):
        return self.machines[0].n_features

    def decision_function(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.column_stack([m.decision_function(X) for m in self.machines])

    def predict(self, X):
        """Class of the most confident machine; ties go to the lowest class index."""
        scores = self.decision_function(X)
        return np.asarray(self.classes)[np.argmax(scores, axis=1)]


def train_multiclass(data, spec=None, cfg=None, classes=None):
    """Train one binary machine per class.

    Parameters
    ----------
    data : DataView or (X, y)
        Labels are expected to be ``0..k-1``.
    classes : sequence of int, optional
        Classes to train; defaults to ``range(max(label) + 1)``. Every one of
        them must occur in ``data``.
    """
    spec = spec or KernelSpec()
    cfg = cfg or TrainConfig()
    view = data if isinstance(data, DataView) else ArrayView(*data)
    labels = view.labels()
    if len(labels) == 0:
        raise ValueError("cannot train on an empty data set")
    if classes is None:
        classes = range(int(labels.max()) + 1)
    classes = tuple(int(c) for c in classes)
    if len(classes) < 2:
        raise ValueError(f"multiclass training needs at least 2 classes, got {len(classes)}")
    present = set(labels.tolist())
    for c in classes:
        if c not in present:
            raise ValueError(f"class {c} has no examples")

    X = view.features()
    machines = []
    for c in classes:
        binary = view_class_map_binary(view, c)
        machines.append(train_binary((X, binary.labels()), spec, cfg))
    return OneVsRestModel(classes, tuple(machines))
