"""scikit-learn compatible front end for the gradient-ascent SVM."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import check_classification_targets
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .binary import TrainConfig
from .kernels import KernelSpec
from .multiclass import OneVsRestModel, train_multiclass


class KernelSVC(ClassifierMixin, BaseEstimator):
    """Multiclass kernel SVM (one-against-the-rest).

    Parameters
    ----------
    kernel : {"linear", "polynomial", "rbf", "mlp"}
    degree : int
        Polynomial degree.
    sigma2 : float
        RBF width, ``K = exp(-||x - y||^2 / (2 sigma2))``.
    mlp_bias : float
        Offset inside the tanh of the mlp kernel.
    squared_norm : bool
        If False the rbf kernel uses ``||x - y||`` instead of its square.
    C : float
        Upper bound on the dual coefficients.
    gap_tol : float
        Relative feasibility gap tolerance.
    terminator : {1, 2, 3}
        Bit mask of stopping criteria: 1 gap, 2 KKT.
    max_epochs : int
    use_cache : bool
        Cache Gram matrix rows during training.
    """

    def __init__(self, kernel="rbf", degree=3, sigma2=1.0, mlp_bias=0.0, squared_norm=True,
                 C=1.0, gap_tol=1e-3, terminator=3, max_epochs=1000, use_cache=True):
        self.kernel = kernel
        self.degree = degree
        self.sigma2 = sigma2
        self.mlp_bias = mlp_bias
        self.squared_norm = squared_norm
        self.C = C
        self.gap_tol = gap_tol
        self.terminator = terminator
        self.max_epochs = max_epochs
        self.use_cache = use_cache

    def _kernel_spec(self):
        return KernelSpec(self.kernel, self.degree, self.sigma2, self.mlp_bias, self.squared_norm)

    def _train_config(self):
        return TrainConfig(C=self.C, gap_tol=self.gap_tol, terminator=self.terminator,
                           max_epochs=self.max_epochs, use_cache=self.use_cache)

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        check_classification_targets(y)
        self.classes_, encoded = np.unique(y, return_inverse=True)
        if len(self.classes_) < 2:
            raise ValueError(f"need at least 2 classes, got {len(self.classes_)}")
        self.model_ = train_multiclass((X, encoded), self._kernel_spec(), self._train_config())
        self.n_features_in_ = X.shape[1]
        self.converged_ = self.model_.converged
        return self

    @classmethod
    def from_model(cls, model, classes=None):
        """Wrap an already trained :class:`OneVsRestModel`."""
        first = model.machines[0]
        spec = first.kernel
        est = cls(kernel=spec.kind, degree=spec.degree, sigma2=spec.sigma2,
                  mlp_bias=spec.mlp_bias, squared_norm=spec.squared_norm, C=first.C)
        est.model_ = OneVsRestModel(tuple(range(len(model.classes))), model.machines)
        est.classes_ = np.asarray(model.classes if classes is None else classes)
        est.n_features_in_ = model.n_features
        est.converged_ = model.converged
        return est

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return self.model_.decision_function(X)

    def predict(self, X):
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]
