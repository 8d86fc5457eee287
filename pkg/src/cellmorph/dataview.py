"""Lazy, read-only views over collections of labeled examples.

Views never copy feature data: each one keeps a reference to its parent and
maps indices, labels or feature values on access. They chain freely, e.g.
``apply_scale(view_range(view_shuffle(base, 7), 0, 50), params)``.
"""

import abc
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class Example:
    features: np.ndarray
    label: int
    id: int

    def __eq__(self, other):
        if not isinstance(other, Example):
            return NotImplemented
        return (self.label == other.label and self.id == other.id
                and np.array_equal(self.features, other.features))


class DataView(Sequence, abc.ABC):
    """Indexed, read-only collection of :class:`Example` objects."""

    @abc.abstractmethod
    def __len__(self):
        ...

    @abc.abstractmethod
    def _get(self, i):
        ...

    @property
    @abc.abstractmethod
    def n_features(self):
        ...

    def __getitem__(self, i):
        if isinstance(i, slice):
            raise TypeError("use view_range() to take a sub-range of a view")
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for view of length {n}")
        return self._get(i)

    def labels(self):
        return np.array([self._get(i).label for i in range(len(self))], dtype=np.int64)

    def ids(self):
        return np.array([self._get(i).id for i in range(len(self))], dtype=np.int64)

    def features(self):
        """Materialize the feature matrix, shape ``(len(self), n_features)``."""
        if len(self) == 0:
            return np.empty((0, self.n_features))
        return np.vstack([self._get(i).features for i in range(len(self))])

    def to_arrays(self):
        return self.features(), self.labels()

    def __repr__(self):
        return f"{type(self).__name__}(len={len(self)}, n_features={self.n_features})"


def _readonly(arr):
    arr = np.asarray(arr, dtype=float)
    if arr.flags.writeable:
        arr = arr.view()
        arr.setflags(write=False)
    return arr


class ExampleView(DataView):
    """Base view over a list of :class:`Example` instances."""

    def __init__(self, examples):
        self._examples = list(examples)
        if self._examples:
            arity = len(self._examples[0].features)
            for ex in self._examples:
                if len(ex.features) != arity:
                    raise ValueError("feature length differs between examples")
            self._n_features = arity
        else:
            self._n_features = 0

    def __len__(self):
        return len(self._examples)

    def _get(self, i):
        return self._examples[i]

    @property
    def n_features(self):
        return self._n_features


class ArrayView(DataView):
    """Base view over a feature matrix and label vector."""

    def __init__(self, X, y, ids=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise ValueError(f"X must be 2-D, got shape {X.shape}")
        y = np.asarray(y).astype(np.int64)
        if len(y) != len(X):
            raise ValueError(f"X has {len(X)} rows but y has {len(y)} labels")
        self._X = _readonly(X)
        self._y = y
        self._ids = np.arange(len(X)) if ids is None else np.asarray(ids, dtype=np.int64)

    def __len__(self):
        return len(self._y)

    def _get(self, i):
        return Example(self._X[i], int(self._y[i]), int(self._ids[i]))

    @property
    def n_features(self):
        return self._X.shape[1]

    def labels(self):
        return self._y.copy()

    def ids(self):
        return self._ids.copy()

    def features(self):
        return self._X.copy()


class _IndexedView(DataView):
    """A view selecting parent items by an index array."""

    def __init__(self, parent, index):
        self._parent = parent
        self._index = np.asarray(index, dtype=np.int64)

    def __len__(self):
        return len(self._index)

    def _get(self, i):
        return self._parent._get(int(self._index[i]))

    @property
    def n_features(self):
        return self._parent.n_features

    def labels(self):
        return self._parent.labels()[self._index]

    def ids(self):
        return self._parent.ids()[self._index]


class RangeView(_IndexedView):
    def __init__(self, parent, start, end):
        if not 0 <= start <= end <= len(parent):
            raise IndexError(f"range [{start}, {end}) invalid for view of length {len(parent)}")
        super().__init__(parent, np.arange(start, end))
        self.start, self.end = start, end


class ShuffleView(_IndexedView):
    def __init__(self, parent, seed):
        super().__init__(parent, permutation(len(parent), seed))
        self.seed = seed


class ClassRemoveView(_IndexedView):
    def __init__(self, parent, class_id):
        super().__init__(parent, np.flatnonzero(parent.labels() != class_id))
        self.class_id = class_id


class ConcatView(DataView):
    def __init__(self, first, second):
        if len(first) and len(second) and first.n_features != second.n_features:
            raise ValueError(
                f"cannot concatenate views with {first.n_features} and {second.n_features} features")
        self._first = first
        self._second = second

    def __len__(self):
        return len(self._first) + len(self._second)

    def _get(self, i):
        n = len(self._first)
        return self._first._get(i) if i < n else self._second._get(i - n)

    @property
    def n_features(self):
        return self._first.n_features if len(self._first) else self._second.n_features

    def labels(self):
        return np.concatenate([self._first.labels(), self._second.labels()]).astype(np.int64)

    def ids(self):
        return np.concatenate([self._first.ids(), self._second.ids()]).astype(np.int64)


class _LabelMapView(DataView):
    """Relabels items through ``self._map_label``; features pass through."""

    def __init__(self, parent):
        self._parent = parent

    def __len__(self):
        return len(self._parent)

    def _get(self, i):
        ex = self._parent._get(i)
        return Example(ex.features, self._map_label(ex.label), ex.id)

    @property
    def n_features(self):
        return self._parent.n_features

    def labels(self):
        return np.array([self._map_label(int(c)) for c in self._parent.labels()], dtype=np.int64)

    def ids(self):
        return self._parent.ids()


class ClassMapLinearView(_LabelMapView):
    def __init__(self, parent):
        super().__init__(parent)
        self.classes = tuple(int(c) for c in np.unique(parent.labels()))
        self._forward = {c: i for i, c in enumerate(self.classes)}

    def _map_label(self, label):
        return self._forward[label]


class ClassMapBinaryView(_LabelMapView):
    def __init__(self, parent, positive_class):
        super().__init__(parent)
        self.positive_class = positive_class

    def _map_label(self, label):
        return 1 if label == self.positive_class else -1


class ClassJoinView(_LabelMapView):
    def __init__(self, parent, groups):
        super().__init__(parent)
        self._forward = {}
        for new_label, members in dict(groups).items():
            for old in members:
                if old in self._forward and self._forward[old] != new_label:
                    raise ValueError(f"class {old} appears in more than one group")
                self._forward[old] = new_label

    def _map_label(self, label):
        return self._forward.get(label, label)


@dataclass(frozen=True)
class ScaleParams:
    """Per-feature minimum and maximum fitted on a view."""

    minimum: np.ndarray
    maximum: np.ndarray

    @property
    def range(self):
        return self.maximum - self.minimum

    @property
    def midrange(self):
        return (self.maximum + self.minimum) / 2.0

    @property
    def constant(self):
        return self.range == 0

    def __len__(self):
        return len(self.minimum)

    def transform(self, X):
        """Map each fitted column's min to -1 and max to +1; constant columns to 0."""
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != len(self):
            raise ValueError(f"expected {len(self)} features, got {X.shape[-1]}")
        rng = self.range
        safe = np.where(rng == 0, 1.0, rng)
        # 2(x - min)/range - 1 equals (x - midrange)/(range/2) and hits +-1 exactly.
        return np.where(rng == 0, 0.0, 2.0 * (X - self.minimum) / safe - 1.0)


class ScaledView(DataView):
    def __init__(self, parent, params):
        if len(params) != parent.n_features:
            raise ValueError(
                f"scale parameters have {len(params)} features, view has {parent.n_features}")
        self._parent = parent
        self.params = params

    def __len__(self):
        return len(self._parent)

    def _get(self, i):
        ex = self._parent._get(i)
        return Example(_readonly(self.params.transform(ex.features)), ex.label, ex.id)

    @property
    def n_features(self):
        return self._parent.n_features

    def labels(self):
        return self._parent.labels()

    def ids(self):
        return self._parent.ids()

    def features(self):
        return self.params.transform(self._parent.features())


def splitmix64(state):
    """One step of the SplitMix64 generator: returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def permutation(n, seed):
    """Fisher-Yates permutation of ``range(n)`` driven by SplitMix64.

    Depends only on ``n`` and ``seed``; identical on every platform.
    """
    order = list(range(n))
    state = int(seed) & _MASK64
    for i in range(n - 1, 0, -1):
        state, r = splitmix64(state)
        j = r % (i + 1)
        order[i], order[j] = order[j], order[i]
    return np.array(order, dtype=np.int64)


def view_base(examples):
    """Identity view over a list of examples or an ``(X, y)`` pair."""
    if isinstance(examples, DataView):
        return examples
    if isinstance(examples, tuple) and len(examples) == 2:
        return ArrayView(*examples)
    examples = list(examples)
    if not examples:
        raise ValueError("cannot build a view over no examples")
    return ExampleView(examples)


def fit_scale(view):
    if len(view) == 0:
        raise ValueError("cannot fit scaling on an empty view")
    X = view.features()
    return ScaleParams(X.min(axis=0), X.max(axis=0))


def apply_scale(view, params):
    return ScaledView(view, params)


def view_range(view, start, end):
    return RangeView(view, start, end)


def view_concat(first, second):
    return ConcatView(first, second)


def view_shuffle(view, seed):
    return ShuffleView(view, seed)


def view_class_map_linear(view):
    """Relabel to ``0..k-1`` in ascending order of the original labels.

    Returns the view and the tuple of original labels, so ``mapping[new]``
    recovers the original class.
    """
    mapped = ClassMapLinearView(view)
    return mapped, mapped.classes


def view_class_map_binary(view, positive_class):
    return ClassMapBinaryView(view, positive_class)


def view_class_join(view, groups):
    """Relabel every member of each group, ``{new_label: [old, ...]}``."""
    return ClassJoinView(view, groups)


def view_class_remove(view, class_id):
    return ClassRemoveView(view, class_id)


def fold_sizes(n, n_folds):
    base, extra = divmod(n, n_folds)
    return [base + (1 if i < extra else 0) for i in range(n_folds)]


def make_folds(view, n_folds, seed):
    """Shuffled contiguous cross-validation folds as ``(train, test)`` pairs.

    Earlier folds take the remainder when ``len(view)`` is not divisible by
    ``n_folds``. A single fold trains and tests on the whole view.
    """
    if n_folds < 1:
        raise ValueError(f"n_folds must be >= 1, got {n_folds}")
    n = len(view)
    if n_folds > n:
        raise ValueError(f"n_folds={n_folds} exceeds the number of examples ({n})")
    if n_folds == 1:
        return [(view, view)]
    shuffled = view_shuffle(view, seed)
    folds = []
    start = 0
    for size in fold_sizes(n, n_folds):
        end = start + size
        test = view_range(shuffled, start, end)
        train = view_concat(view_range(shuffled, 0, start), view_range(shuffled, end, n))
        folds.append((train, test))
        start = end
    return folds


class MidrangeScaler(TransformerMixin, BaseEstimator):
    """Scale each feature to [-1, 1] using its fitted range and midrange.

    Constant features map to 0. Values outside the fitted range fall
    outside [-1, 1].
    """

    def fit(self, X, y=None):
        X = check_array(X)
        self.params_ = ScaleParams(X.min(axis=0), X.max(axis=0))
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X)
        return self.params_.transform(X)
