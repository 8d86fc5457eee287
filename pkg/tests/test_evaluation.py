import json

import numpy as np
import pytest
from conftest import three_clusters

from cellmorph.dataview import ArrayView
from cellmorph.evaluation import (
    ConfusionMatrix,
    apply_simplified_problem,
    cross_validate,
)
from cellmorph.svm import KernelSpec, TrainConfig

RBF = KernelSpec("rbf", sigma2=1.0)
# Every class id used by the white blood cell data set; 0 marks unidentified objects.
CELL_CLASSES = (0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 21, 24, 25, 29)


def test_separable_clusters_have_zero_error(rng):
    X, y = three_clusters(rng)
    report = cross_validate((X, y), RBF, TrainConfig(C=10), n_folds=3, seed=1)
    assert report.total_error == 0.0
    assert report.fold_errors == [0.0, 0.0, 0.0]
    assert report.confusion.off_diagonal() == []


def test_contradictory_duplicate_forces_an_error(rng):
    X, y = three_clusters(rng)
    X = np.vstack([X, X[:1], X[:1]])
    y = np.concatenate([y, [1, 2]])
    report = cross_validate((X, y), RBF, TrainConfig(C=10, max_epochs=300), n_folds=1)
    # Three identical points carry three labels; at most one can be right.
    assert report.total_error >= 100.0 * 2 / len(y) - 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_total_error_lies_between_fold_extremes(seed):
    rng = np.random.default_rng(seed)
    X, y = three_clusters(rng, spread=1.5)
    report = cross_validate((X, y), RBF, TrainConfig(C=1, max_epochs=300), n_folds=3, seed=seed)
    assert report.min_error <= report.total_error <= report.max_error


def test_same_seed_same_report(rng):
    X, y = three_clusters(rng, spread=1.2)
    a = cross_validate((X, y), RBF, TrainConfig(C=1), n_folds=3, seed=5)
    b = cross_validate((X, y), RBF, TrainConfig(C=1), n_folds=3, seed=5, n_jobs=2)
    assert a.to_json() == b.to_json()


def test_class_smaller_than_fold_count(rng):
    X, y = three_clusters(rng)
    y = y.copy()
    y[:] = np.where(y == 2, 0, y)
    y[0] = 2
    with pytest.raises(ValueError, match="class 2 has 1 examples"):
        cross_validate((X, y), RBF, n_folds=2)


def test_confusion_counts_every_test_example(rng):
    X, y = three_clusters(rng, spread=1.5)
    report = cross_validate((X, y), RBF, TrainConfig(C=1, max_epochs=300), n_folds=5)
    assert report.confusion.total == len(y)
    assert list(report.confusion.totals) == [15, 15, 15]


def test_confusion_matrix_bookkeeping():
    cm = ConfusionMatrix([3, 7])
    cm.add([3, 3, 7, 7], [3, 7, 7, 7])
    assert cm.n_errors == 1
    assert cm.off_diagonal() == [(3, 7, 1)]
    with pytest.raises(ValueError):
        cm.merge(ConfusionMatrix([3]))


def test_report_json_and_text(rng):
    X, y = three_clusters(rng)
    report = cross_validate((X, y), RBF, TrainConfig(C=10), n_folds=2)
    data = json.loads(report.to_json())
    assert {"total_error", "max_error", "min_error", "fold_errors", "classes",
            "confusion", "params", "warnings"} <= set(data)
    assert data["params"]["kernel"] == "rbf"
    assert "total error: 0.0000%" in report.to_text()
    assert len(report.models) == 2


def test_unknown_scale_mode(rng):
    X, y = three_clusters(rng)
    with pytest.raises(ValueError):
        cross_validate((X, y), RBF, scale="minmax")


@pytest.mark.parametrize("scale", ["train", "global", "none"])
def test_scale_modes_run(rng, scale):
    X, y = three_clusters(rng)
    report = cross_validate((X * 100, y), KernelSpec("rbf", sigma2=1.0), TrainConfig(C=10),
                            scale=scale)
    assert report.params["scale"] == scale
    if scale != "none":
        assert report.total_error == 0.0


def _labelled_view(labels):
    labels = np.asarray(labels)
    return ArrayView(np.zeros((len(labels), 1)), labels)


def test_simplified_problem_mapping():
    view = _labelled_view(CELL_CLASSES)
    out = apply_simplified_problem(view)
    assert sorted(set(out.labels())) == [2, 3, 5, 30, 31]
    assert list(out.labels()).count(30) == 2
    assert list(out.labels()).count(31) == 2
    twice = apply_simplified_problem(out)
    assert list(twice.labels()) == list(out.labels())


def test_simplified_problem_joins_counts():
    out = apply_simplified_problem(_labelled_view([1, 1, 1, 6, 6, 0, 9, 2]))
    assert list(out.labels()).count(30) == 5
    assert len(out) == 6
