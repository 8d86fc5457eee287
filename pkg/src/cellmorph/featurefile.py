"""Feature set files and sparse (libsvm-style) export.

A feature set file is plain text::

    # cellmorph-features 1
    # arity 597
    # layout scalable_color:256 color_structure:256 ...
    <id>\t<label>\t<v1> <v2> ...

Values are written with ``repr`` so reading them back is exact. Unlabeled
rows carry label -1.
"""

from dataclasses import dataclass

import numpy as np

from .dataview import ArrayView

FORMAT_NAME = "cellmorph-features"
FORMAT_VERSION = 1
UNLABELED = -1


class FeatureFileError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureSet:
    ids: np.ndarray
    labels: np.ndarray
    X: np.ndarray
    layout: tuple = ()

    def __post_init__(self):
        if self.X.ndim != 2 or len(self.X) != len(self.labels) or len(self.ids) != len(self.labels):
            raise ValueError("ids, labels and X must describe the same number of rows")

    def __len__(self):
        return len(self.labels)

    @property
    def arity(self):
        return self.X.shape[1]

    def to_view(self):
        return ArrayView(self.X, self.labels, self.ids)

    @classmethod
    def from_rows(cls, rows, layout=(), arity=None):
        """Build from ``(id, label, values)`` tuples."""
        rows = list(rows)
        if arity is None:
            arity = sum(n for _, n in layout) if layout else (len(rows[0][2]) if rows else 0)
        X = np.array([np.asarray(r[2], dtype=float) for r in rows]).reshape(len(rows), arity)
        return cls(np.array([int(r[0]) for r in rows], dtype=np.int64),
                   np.array([int(r[1]) for r in rows], dtype=np.int64), X, tuple(layout))


def dumps_features(fs):
    layout = " ".join(f"{name}:{n}" for name, n in fs.layout)
    lines = [f"# {FORMAT_NAME} {FORMAT_VERSION}", f"# arity {fs.arity}", f"# layout {layout}".rstrip()]
    for i, label, row in zip(fs.ids, fs.labels, fs.X):
        lines.append(f"{int(i)}\t{int(label)}\t" + " ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_features(path, fs):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_features(fs))


def loads_features(text):
    header = {}
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value.strip()
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FeatureFileError(f"line {lineno}: expected id, label and values separated by tabs")
        try:
            values = [float(v) for v in parts[2].split()]
            rows.append((int(parts[0]), int(parts[1]), values))
        except ValueError as exc:
            raise FeatureFileError(f"line {lineno}: {exc}") from exc
    if header.get(FORMAT_NAME) != str(FORMAT_VERSION):
        raise FeatureFileError("not a cellmorph feature file (missing or unsupported version header)")
    try:
        arity = int(header["arity"])
    except (KeyError, ValueError) as exc:
        raise FeatureFileError("missing or invalid arity header") from exc
    layout = []
    for item in header.get("layout", "").split():
        name, _, n = item.rpartition(":")
        layout.append((name, int(n)))
    if layout and sum(n for _, n in layout) != arity:
        raise FeatureFileError("layout lengths do not add up to the arity")
    for lineno, (_, _, values) in enumerate(rows, 1):
        if len(values) != arity:
            raise FeatureFileError(f"row {lineno} has {len(values)} values, expected {arity}")
    return FeatureSet.from_rows(rows, tuple(layout), arity)


def read_features(path):
    with open(path, encoding="ascii") as fh:
        return loads_features(fh.read())


def _sparse_value(v):
    v = float(v)
    if v.is_integer() and abs(v) < 2 ** 53:
        return str(int(v))
    return repr(v)


def sparse_line(label, values):
    """``<label> <index>:<value> ...`` with 1-based indices and zeros left out."""
    items = [f"{i}:{_sparse_value(v)}" for i, v in enumerate(values, 1) if v != 0]
    return " ".join([str(int(label)), *items])


def parse_sparse_line(line, arity=None):
    """Inverse of :func:`sparse_line`; returns ``(label, dense values)``."""
    fields = line.split()
    label = int(fields[0])
    pairs = [(int(k), float(v)) for k, v in (f.split(":", 1) for f in fields[1:])]
    n = arity if arity is not None else max((k for k, _ in pairs), default=0)
    values = np.zeros(n)
    for k, v in pairs:
        values[k - 1] = v
    return label, values
