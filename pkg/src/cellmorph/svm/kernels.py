"""Mercer kernels, Gram matrix caching and a PSD diagnostic."""

import math
from dataclasses import dataclass

import numpy as np

KERNEL_KINDS = ("linear", "polynomial", "rbf", "mlp")

# Keeps the broadcast product of a kernel-matrix chunk under ~32 MB.
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its parameters.

    ``degree`` applies to ``polynomial``, ``sigma2`` to ``rbf`` and
    ``mlp_bias`` to ``mlp``. With ``squared_norm=False`` the rbf kernel uses
    the plain Euclidean distance in the exponent instead of its square.
    """

    kind: str = "rbf"
    degree: int = 3
    sigma2: float = 1.0
    mlp_bias: float = 0.0
    squared_norm: bool = True

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.kind == "polynomial" and (int(self.degree) != self.degree or self.degree < 1):
            raise ValueError(f"polynomial degree must be a positive integer, got {self.degree}")
        if self.kind == "rbf" and not self.sigma2 > 0:
            raise ValueError(f"rbf sigma2 must be positive, got {self.sigma2}")
        if not math.isfinite(self.mlp_bias):
            raise ValueError(f"mlp_bias must be finite, got {self.mlp_bias}")


def _from_dot_or_dist(spec, dot, sq_dist):
    if spec.kind == "linear":
        return dot
    if spec.kind == "polynomial":
        return (dot + 1.0) ** int(spec.degree)
    if spec.kind == "rbf":
        dist = sq_dist if spec.squared_norm else np.sqrt(sq_dist)
        return np.exp(-dist / (2.0 * spec.sigma2))
    return np.tanh(dot + spec.mlp_bias)


def kernel_matrix(spec, A, B):
    """``K[i, j] = k(A[i], B[j])``.

    Each entry is reduced from the elementwise product (or squared
    difference) of its two rows, so ``k(a, b)`` and ``k(b, a)`` are bitwise
    equal and a row computed alone matches the same row of a full matrix.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"feature length mismatch: {A.shape[1]} vs {B.shape[1]}")
    out = np.empty((A.shape[0], B.shape[0]))
    step = max(1, _CHUNK_ELEMENTS // max(1, B.shape[0] * A.shape[1]))
    need_dist = spec.kind == "rbf"
    for start in range(0, A.shape[0], step):
        a = A[start:start + step, None, :]
        if need_dist:
            diff = a - B[None, :, :]
            out[start:start + step] = _from_dot_or_dist(spec, None, (diff * diff).sum(axis=2))
        else:
            out[start:start + step] = _from_dot_or_dist(spec, (a * B[None, :, :]).sum(axis=2), None)
    return out


def kernel_eval(spec, x, y):
    """Kernel value of two feature vectors."""
    x = np.asarray(getattr(x, "values", x), dtype=float)
    y = np.asarray(getattr(y, "values", y), dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"feature length mismatch: {x.shape} vs {y.shape}")
    return float(kernel_matrix(spec, x[None, :], y[None, :])[0, 0])


def kernel_diag(spec, X):
    X = np.asarray(X, dtype=float)
    if spec.kind == "rbf":
        return np.ones(len(X))
    return _from_dot_or_dist(spec, (X * X).sum(axis=1), None)


class GramCache:
    """Lazily filled Gram matrix over a training set.

    With ``enabled=False`` every row request recomputes the kernel values,
    which yields the same numbers as the cached path.
    """

    def __init__(self, spec, X, enabled=True):
        self.spec = spec
        self.X = np.asarray(X, dtype=float)
        self.enabled = enabled
        self._rows = {}
        self.hits = 0
        self.misses = 0
        self.diag = kernel_diag(spec, self.X)
        if not np.all(np.isfinite(self.diag)):
            raise ValueError("kernel produced non-finite values")

    def __len__(self):
        return len(self.X)

    def row(self, i):
        if self.enabled and i in self._rows:
            self.hits += 1
            return self._rows[i]
        self.misses += 1
        row = kernel_matrix(self.spec, self.X[i:i + 1], self.X)[0]
        if not np.all(np.isfinite(row)):
            raise ValueError(f"kernel produced non-finite values in row {i}")
        row.setflags(write=False)
        if self.enabled:
            self._rows[i] = row
        return row

    def __getitem__(self, ij):
        i, j = ij
        return float(self.row(i)[j])

    def full(self):
        return np.vstack([self.row(i) for i in range(len(self))])


def gram_psd_check(spec, points):
    """Smallest eigenvalue of the Gram matrix of ``points``.

    Purely diagnostic: indefinite kernels (e.g. some ``mlp`` settings)
    report a negative value instead of raising.
    """
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        raise ValueError("need at least two points")
    gram = kernel_matrix(spec, points, points)
    return float(np.linalg.eigvalsh(gram).min())
