"""Binary kernel SVM trained by coordinate-wise gradient ascent on the dual.

The dual ``W(a) = sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij`` is maximized
over the box ``0 <= a_i <= C``. Each update moves one coefficient along its
partial derivative and clips it back into the box; the new value is used
immediately by the following updates. Coefficients violating the KKT
conditions are swept first ("chunking"); a full sweep follows once they
are clean or stop making progress.

The equality constraint ``sum(a_i y_i) = 0`` is handled with an augmented
Lagrangian: the bias acts as its multiplier and the quadratic penalty
``rho/2 (sum a_i y_i)^2`` is folded into the kernel as the constant ``rho``.
The bias is updated after every epoch, which drives the constraint
residual to zero without projecting individual updates.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from .kernels import GramCache, KernelSpec, kernel_matrix

TERMINATE_GAP = 1
TERMINATE_KKT = 2

# Three violator sweeps in a row that improve the objective by less than
# this (relative) count as stalled.
_STALL_RTOL = 1e-9
_STALL_SWEEPS = 3
_MAX_CHUNK_SWEEPS = 50


@dataclass(frozen=True)
class TrainConfig:
    """Training parameters.

    ``terminator`` is a bit mask: 1 requires the relative feasibility gap
    ``gap / max(1, primal)`` to be at most ``gap_tol``, 2 requires every KKT
    condition to hold within ``kkt_tol``. ``C`` may be ``math.inf`` for a
    hard margin.
    """

    C: float = 1.0
    gap_tol: float = 1e-3
    terminator: int = 3
    max_epochs: int = 1000
    kkt_tol: float = 1e-3
    eq_tol: float = 1e-6
    use_cache: bool = True
    warn: bool = True

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if not self.gap_tol > 0:
            raise ValueError(f"gap_tol must be positive, got {self.gap_tol}")
        if self.terminator not in (1, 2, 3):
            raise ValueError(f"terminator must be 1, 2 or 3, got {self.terminator}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")


@dataclass(frozen=True, eq=False)
class BinarySvmModel:
    """A trained two-class machine, keeping only its support vectors."""

    kernel: KernelSpec
    C: float
    bias: float
    alphas: np.ndarray
    labels: np.ndarray
    support_vectors: np.ndarray
    support_index: np.ndarray
    converged: bool = True
    n_epochs: int = 0
    gap_history: tuple = field(default=())

    @property
    def n_features(self):
        return self.support_vectors.shape[1]

    def decision_function(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features and len(self.alphas):
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        if not len(self.alphas):
            return np.full(len(X), self.bias)
        K = kernel_matrix(self.kernel, X, self.support_vectors)
        return K @ (self.alphas * self.labels) + self.bias

    def predict(self, X):
        return sgn(self.decision_function(X))

    def dual_objective(self):
        K = kernel_matrix(self.kernel, self.support_vectors, self.support_vectors)
        ay = self.alphas * self.labels
        return float(self.alphas.sum() - 0.5 * ay @ K @ ay)

    def weight_norm2(self):
        """``||w||^2`` in feature space, ``sum_ij a_i a_j y_i y_j K_ij``."""
        K = kernel_matrix(self.kernel, self.support_vectors, self.support_vectors)
        ay = self.alphas * self.labels
        return float(ay @ K @ ay)


def sgn(values):
    """Sign with ``sgn(0) = +1``."""
    values = np.asarray(values)
    out = np.where(values >= 0, 1, -1)
    return int(out) if out.ndim == 0 else out


def decision_value(model, x):
    """Real-valued score of one feature vector."""
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if x.ndim != 1:
        raise ValueError("decision_value expects a single feature vector")
    if len(model.alphas) and len(x) != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {len(x)}")
    return float(model.decision_function(x[None, :])[0])


def _as_arrays(data):
    if hasattr(data, "to_arrays"):
        return data.to_arrays()
    X, y = data
    return np.asarray(X, dtype=float), np.asarray(y)


def _gap_terms(alpha, y, margin_free, bias, C):
    """Primal and dual objective from ``alpha`` and ``F_i = sum_j a_j y_j K_ij``."""
    quad = float(np.dot(alpha * y, margin_free))
    slack = np.maximum(0.0, 1.0 - y * (margin_free + bias))
    if math.isinf(C):
        hinge = math.inf if np.any(slack > 0) else 0.0
    else:
        hinge = C * float(slack.sum())
    primal = 0.5 * quad + hinge
    dual = float(alpha.sum()) - 0.5 * quad
    return primal, dual


def _bias(alpha, y, F, C, fallback):
    free = (alpha > 0) & (alpha < C)
    if np.any(free):
        return float(np.mean(y[free] - F[free]))
    return fallback


def _violators(alpha, y, F, bias, C, tol):
    m = y * (F + bias)
    return np.flatnonzero(((alpha < C) & (m < 1.0 - tol)) | ((alpha > 0) & (m > 1.0 + tol)))


def feasibility_gap(model, data):
    """Primal minus dual objective of ``model`` on its training data."""
    X, y = _as_arrays(data)
    y = np.asarray(y, dtype=float)
    alpha = np.zeros(len(y))
    alpha[model.support_index] = model.alphas
    F = model.decision_function(X) - model.bias
    primal, dual = _gap_terms(alpha, y, F, model.bias, model.C)
    return primal - dual


def train_binary(data, spec=None, cfg=None, callback=None):
    """Train a two-class machine on labels in {-1, +1}.

    Parameters
    ----------
    data : DataView or (X, y)
    spec : KernelSpec
    cfg : TrainConfig
    callback : callable, optional
        Called after every epoch with ``(epoch, alpha, bias, gap)``.

    Returns
    -------
    BinarySvmModel
        ``converged`` is False when ``max_epochs`` ran out first; a
        :class:`~sklearn.exceptions.ConvergenceWarning` is also issued.
    """
    spec = spec or KernelSpec()
    cfg = cfg or TrainConfig()
    X, y = _as_arrays(data)
    y = np.asarray(y)
    if not np.all(np.isin(y, (-1, 1))):
        raise ValueError("binary training needs labels in {-1, +1}")
    if not (np.any(y == 1) and np.any(y == -1)):
        raise ValueError("binary training needs at least one example of each label")
    y = y.astype(float)
    n = len(y)
    C = float(cfg.C)

    gram = GramCache(spec, X, enabled=cfg.use_cache)
    diag = gram.diag
    rho = float(np.mean(np.abs(diag))) or 1.0
    step = 1.0 / (diag + rho)

    alpha = np.zeros(n)
    F = np.zeros(n)
    resid = 0.0
    lam = 0.0

    def sweep(indices):
        nonlocal resid, F
        for i in indices:
            grad = 1.0 - y[i] * (F[i] + lam + rho * resid)
            new = min(max(alpha[i] + grad * step[i], 0.0), C)
            delta = new - alpha[i]
            if delta != 0.0:
                alpha[i] = new
                F += (delta * y[i]) * gram.row(i)
                resid += delta * y[i]

    def objective():
        return float(alpha.sum() - 0.5 * np.dot(alpha * y, F) - lam * resid - 0.5 * rho * resid ** 2)

    def refresh():
        # Rebuild F and the residual from scratch to stop drift.
        nonlocal resid, F
        F[:] = 0.0
        for j in np.flatnonzero(alpha):
            F += (alpha[j] * y[j]) * gram.row(j)
        resid = float(np.dot(alpha, y))

    everything = np.arange(n)
    history = []
    converged = False
    bias = 0.0
    epoch = 0
    for epoch in range(1, cfg.max_epochs + 1):
        stalled = 0
        previous = objective()
        for _ in range(_MAX_CHUNK_SWEEPS):
            chunk = _violators(alpha, y, F, lam + rho * resid, C, cfg.kkt_tol)
            if not len(chunk):
                break
            sweep(chunk)
            current = objective()
            if current - previous < _STALL_RTOL * max(1.0, abs(current)):
                stalled += 1
                if stalled >= _STALL_SWEEPS:
                    break
            else:
                stalled = 0
            previous = current
        sweep(everything)
        refresh()
        lam += rho * resid

        bias = _bias(alpha, y, F, C, lam)
        primal, dual = _gap_terms(alpha, y, F, bias, C)
        gap = primal - dual
        history.append(gap)
        if callback is not None:
            callback(epoch, alpha.copy(), bias, gap)

        feasible = abs(resid) <= cfg.eq_tol
        kkt_ok = not len(_violators(alpha, y, F, bias, C, cfg.kkt_tol))
        gap_ok = gap <= cfg.gap_tol * max(1.0, abs(primal))
        if feasible \
                and (kkt_ok or not cfg.terminator & TERMINATE_KKT) \
                and (gap_ok or not cfg.terminator & TERMINATE_GAP):
            converged = True
            break

    if not converged and cfg.warn:
        warnings.warn(
            f"SVM training stopped after {cfg.max_epochs} epochs without meeting "
            f"the termination criteria", ConvergenceWarning, stacklevel=2)

    support = np.flatnonzero(alpha > 0)
    return BinarySvmModel(
        kernel=spec,
        C=C,
        bias=bias,
        alphas=alpha[support],
        labels=y[support],
        support_vectors=np.asarray(X, dtype=float)[support],
        support_index=support,
        converged=converged,
        n_epochs=epoch,
        gap_history=tuple(history),
    )
