"""Text serialization of trained models.

Format (version 1), one record per line, fields separated by single spaces,
floats written with Python's shortest round-trip ``repr``::

    cellmorph-model 1
    kernel <kind> <degree> <sigma2> <mlp_bias> <squared_norm:0|1>
    C <C>
    features <n_features>
    classes <k> <class_0> ... <class_k-1>
    scale <0|1>
    min <v_1> ... <v_n>                    (only when scale is 1)
    max <v_1> ... <v_n>                    (only when scale is 1)
    machine <i> <bias> <n_sv> <converged:0|1> <n_epochs>
    sv <train_index> <alpha> <y> <v_1> ... <v_n>   (n_sv lines)
    ...                                            (k machine blocks)
    end

Reading and re-writing a file reproduces it byte for byte.
"""

import numpy as np

from ..dataview import ScaleParams
from .binary import BinarySvmModel
from .kernels import KernelSpec
from .multiclass import OneVsRestModel

MAGIC = "cellmorph-model"
VERSION = 1


class ModelFormatError(ValueError):
    pass


def _f(x):
    return repr(float(x))


def _floats(values):
    return " ".join(_f(v) for v in values)


def dumps_model(model, scale=None):
    first = model.machines[0]
    spec = first.kernel
    n_features = first.support_vectors.shape[1] if scale is None else len(scale)
    lines = [
        f"{MAGIC} {VERSION}",
        f"kernel {spec.kind} {int(spec.degree)} {_f(spec.sigma2)} {_f(spec.mlp_bias)} "
        f"{int(bool(spec.squared_norm))}",
        f"C {_f(first.C)}",
        f"features {n_features}",
        "classes " + " ".join(str(v) for v in [len(model.classes), *model.classes]),
        f"scale {0 if scale is None else 1}",
    ]
    if scale is not None:
        lines.append("min " + _floats(scale.minimum))
        lines.append("max " + _floats(scale.maximum))
    for i, m in enumerate(model.machines):
        lines.append(f"machine {i} {_f(m.bias)} {len(m.alphas)} {int(bool(m.converged))} {m.n_epochs}")
        for idx, a, y, sv in zip(m.support_index, m.alphas, m.labels, m.support_vectors):
            lines.append(f"sv {int(idx)} {_f(a)} {int(y)} {_floats(sv)}".rstrip())
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(path, model, scale=None):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_model(model, scale))


class _Lines:
    def __init__(self, text):
        self._lines = text.splitlines()
        self._pos = 0

    def next(self, keyword):
        if self._pos >= len(self._lines):
            raise ModelFormatError(f"unexpected end of file, expected {keyword!r}")
        fields = self._lines[self._pos].split(" ")
        self._pos += 1
        if fields[0] != keyword:
            raise ModelFormatError(f"line {self._pos}: expected {keyword!r}, got {fields[0]!r}")
        return fields[1:]


def loads_model(text):
    """Parse a model; returns ``(OneVsRestModel, ScaleParams or None)``."""
    lines = _Lines(text)
    try:
        version = lines.next(MAGIC)
        if version != [str(VERSION)]:
            raise ModelFormatError(f"unsupported model version {' '.join(version)}")
        kind, degree, sigma2, mlp_bias, squared = lines.next("kernel")
        spec = KernelSpec(kind, int(degree), float(sigma2), float(mlp_bias), squared == "1")
        (C,) = lines.next("C")
        C = float(C)
        (n_features,) = lines.next("features")
        n_features = int(n_features)
        cls_fields = lines.next("classes")
        k = int(cls_fields[0])
        classes = tuple(int(c) for c in cls_fields[1:])
        if len(classes) != k:
            raise ModelFormatError(f"declared {k} classes, listed {len(classes)}")
        (has_scale,) = lines.next("scale")
        scale = None
        if has_scale == "1":
            lo = np.array([float(v) for v in lines.next("min")])
            hi = np.array([float(v) for v in lines.next("max")])
            if len(lo) != n_features or len(hi) != n_features:
                raise ModelFormatError("scale arity does not match the feature count")
            scale = ScaleParams(lo, hi)
        machines = []
        for i in range(k):
            idx_s, bias, n_sv, converged, n_epochs = lines.next("machine")
            if int(idx_s) != i:
                raise ModelFormatError(f"machine {idx_s} out of order, expected {i}")
            rows = [lines.next("sv") for _ in range(int(n_sv))]
            vectors = np.array([[float(v) for v in r[3:]] for r in rows]).reshape(len(rows), n_features)
            machines.append(BinarySvmModel(
                kernel=spec,
                C=C,
                bias=float(bias),
                alphas=np.array([float(r[1]) for r in rows]),
                labels=np.array([float(int(r[2])) for r in rows]),
                support_vectors=vectors,
                support_index=np.array([int(r[0]) for r in rows], dtype=np.int64),
                converged=converged == "1",
                n_epochs=int(n_epochs),
            ))
        lines.next("end")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    return OneVsRestModel(classes, tuple(machines)), scale


def load_model(path):
    with open(path, encoding="ascii") as fh:
        return loads_model(fh.read())
