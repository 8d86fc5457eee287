"""Cross-validation, confusion matrices and error reports."""

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .dataview import (
    ArrayView,
    DataView,
    apply_scale,
    fit_scale,
    make_folds,
    view_class_join,
    view_class_remove,
)
from .svm.binary import TrainConfig
from .svm.kernels import KernelSpec
from .svm.multiclass import train_multiclass

SIMPLIFIED_REMOVED = (0, 9, 10, 11, 21, 24, 25, 29)
SIMPLIFIED_JOINED = {30: (1, 6), 31: (4, 7)}
SCALE_MODES = ("train", "global", "none")


class ConfusionMatrix:
    """``counts[i, j]`` is how often true class ``classes[i]`` was guessed as ``classes[j]``."""

    def __init__(self, classes):
        self.classes = tuple(int(c) for c in classes)
        self._index = {c: i for i, c in enumerate(self.classes)}
        self.counts = np.zeros((len(self.classes),) * 2, dtype=np.int64)

    def add(self, true, guessed):
        for t, g in zip(np.atleast_1d(true), np.atleast_1d(guessed)):
            self.counts[self._index[int(t)], self._index[int(g)]] += 1

    def merge(self, other):
        if other.classes != self.classes:
            raise ValueError("cannot merge confusion matrices over different classes")
        self.counts += other.counts

    @property
    def totals(self):
        """Number of test examples per true class."""
        return self.counts.sum(axis=1)

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def n_errors(self):
        return self.total - int(np.trace(self.counts))

    def off_diagonal(self):
        """``(true class, guessed class, count)`` for every nonzero confusion."""
        rows, cols = np.nonzero(self.counts)
        return [(self.classes[r], self.classes[c], int(self.counts[r, c]))
                for r, c in zip(rows, cols) if r != c]


def _error_rate(n_errors, total):
    return 100.0 * n_errors / total if total else 0.0


@dataclass
class EvalReport:
    """Outcome of a cross-validation run. Error rates are percentages."""

    total_error: float
    fold_errors: list
    confusion: ConfusionMatrix
    params: dict
    warnings: list = field(default_factory=list)
    models: list = field(default_factory=list, repr=False)
    scales: list = field(default_factory=list, repr=False)

    @property
    def max_error(self):
        return max(self.fold_errors)

    @property
    def min_error(self):
        return min(self.fold_errors)

    def to_dict(self):
        return {
            "total_error": round(self.total_error, 4),
            "max_error": round(self.max_error, 4),
            "min_error": round(self.min_error, 4),
            "fold_errors": [round(e, 4) for e in self.fold_errors],
            "classes": list(self.confusion.classes),
            "confusion": self.confusion.counts.tolist(),
            "params": self.params,
            "warnings": list(self.warnings),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self):
        p = self.params
        lines = [
            f"kernel: {p['kernel']}  degree={p['degree']}  sigma2={p['sigma2']}  "
            f"mlp_bias={p['mlp_bias']}",
            f"C={p['C']}  gap_tol={p['gap_tol']}  terminator={p['terminator']}  "
            f"folds={p['n_folds']}  seed={p['seed']}  scale={p['scale']}",
            f"total error: {self.total_error:.4f}%",
            f"max error:   {self.max_error:.4f}%",
            f"min error:   {self.min_error:.4f}%",
            "fold errors: " + " ".join(f"{e:.4f}" for e in self.fold_errors),
            "confusions (class, guessed class, n):",
        ]
        confusions = self.confusion.off_diagonal()
        lines += [f"  {t} {g} {n}" for t, g, n in confusions] or ["  none"]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def _check_class_sizes(view, n_folds):
    labels, counts = np.unique(view.labels(), return_counts=True)
    for label, count in zip(labels, counts):
        if count < n_folds:
            raise ValueError(
                f"class {label} has {count} examples, fewer than the {n_folds} folds")
    return tuple(int(c) for c in labels)


def _run_fold(fold, train, test, spec, cfg, scale_mode, global_scale):
    scale = fit_scale(train) if scale_mode == "train" else global_scale
    if scale is not None:
        train, test = apply_scale(train, scale), apply_scale(test, scale)
    X, y = train.to_arrays()
    classes = tuple(int(c) for c in np.unique(y))
    if len(classes) < 2:
        raise ValueError(f"fold {fold}: training set contains a single class")
    encode = {c: i for i, c in enumerate(classes)}
    model = train_multiclass((X, np.array([encode[int(v)] for v in y])), spec,
                             dataclasses.replace(cfg, warn=False))
    guessed = np.asarray(classes)[np.argmax(model.decision_function(test.features()), axis=1)]
    notes = [f"fold {fold}: machine for class {classes[i]} did not converge "
             f"after {m.n_epochs} epochs"
             for i, m in enumerate(model.machines) if not m.converged]
    # Store the model with its original class ids.
    model = dataclasses.replace(model, classes=classes)
    return test.labels(), guessed, notes, model, scale


def cross_validate(data, spec=None, cfg=None, n_folds=2, seed=0, scale="train", n_jobs=None):
    """k-fold cross-validation of the one-against-rest SVM.

    Parameters
    ----------
    data : DataView or (X, y)
    spec : KernelSpec
    cfg : TrainConfig
    n_folds : int
        With 1 the model is trained and tested on all data.
    seed : int
        Shuffle seed for the fold assignment.
    scale : {"train", "global", "none"}
        Fit the [-1, 1] scaling on each training split, once on all data, or skip it.
    n_jobs : int, optional
        Folds to train in parallel.

    Returns
    -------
    EvalReport
        Folds that did not converge are still scored; they add an entry to
        ``warnings``.
    """
    spec = spec or KernelSpec()
    cfg = cfg or TrainConfig()
    if scale not in SCALE_MODES:
        raise ValueError(f"scale must be one of {SCALE_MODES}, got {scale!r}")
    view = data if isinstance(data, DataView) else ArrayView(*data)
    classes = _check_class_sizes(view, n_folds)
    if len(classes) < 2:
        raise ValueError("cross-validation needs at least 2 classes")
    global_scale = fit_scale(view) if scale == "global" else None

    folds = make_folds(view, n_folds, seed)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_run_fold)(i, train, test, spec, cfg, scale, global_scale)
        for i, (train, test) in enumerate(folds))

    confusion = ConfusionMatrix(classes)
    fold_errors, notes, models, scales = [], [], [], []
    for true, guessed, fold_notes, model, fold_scale in results:
        fold_cm = ConfusionMatrix(classes)
        fold_cm.add(true, guessed)
        confusion.merge(fold_cm)
        fold_errors.append(_error_rate(fold_cm.n_errors, fold_cm.total))
        notes.extend(fold_notes)
        models.append(model)
        scales.append(fold_scale)

    params = {
        "kernel": spec.kind, "degree": spec.degree, "sigma2": spec.sigma2,
        "mlp_bias": spec.mlp_bias, "C": cfg.C, "gap_tol": cfg.gap_tol,
        "terminator": cfg.terminator, "max_epochs": cfg.max_epochs,
        "n_folds": n_folds, "seed": seed, "scale": scale,
    }
    return EvalReport(
        total_error=_error_rate(confusion.n_errors, confusion.total),
        fold_errors=fold_errors,
        confusion=confusion,
        params=params,
        warnings=notes,
        models=models,
        scales=scales,
    )


def apply_simplified_problem(view):
    """Drop the rare and ambiguous cell classes and merge the look-alike pairs.

    Leaves classes 2, 3, 5, 30 (from 1 and 6) and 31 (from 4 and 7). Classes
    that are absent are ignored, so applying it twice changes nothing.
    """
    for c in SIMPLIFIED_REMOVED:
        view = view_class_remove(view, c)
    return view_class_join(view, {new: list(old) for new, old in SIMPLIFIED_JOINED.items()})
