"""Labelled point sets and their CSV form (``x1,...,xN,label``)."""
from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError, ParameterError

__all__ = [
    "LabeledPoint",
    "TrainingSet",
    "load_dataset",
    "save_dataset",
    "load_points",
    "save_points",
    "holdout_split",
]


@dataclass(frozen=True)
class LabeledPoint:
    x: tuple[float, ...]
    label: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not all(math.isfinite(v) for v in self.x):
            raise DataError("coordinates must be finite")
        if self.label not in (0, 1):
            raise DataError(f"label must be 0 or 1, got {self.label!r}")
        object.__setattr__(self, "label", int(self.label))


class TrainingSet:
    """Immutable labelled sample: ``X`` is ``(q, N)`` float, ``y`` is ``(q,)`` int."""

    def __init__(self, X, y):
        X = np.array(X, dtype=float)
        y = np.array(y)
        if X.ndim != 2 or X.shape[0] == 0:
            raise DataError("a training set needs a non-empty (q, N) coordinate array")
        if y.shape != (X.shape[0],):
            raise DimensionError(f"{X.shape[0]} points but {y.shape} labels")
        if not np.all(np.isfinite(X)):
            raise DataError("coordinates must be finite")
        if not np.all((y == 0) | (y == 1)):
            raise DataError("labels must be 0 or 1")
        y = y.astype(np.int64)
        _check_conflicts(X, y)
        X.setflags(write=False)
        y.setflags(write=False)
        self.X = X
        self.y = y

    @classmethod
    def from_points(cls, points) -> TrainingSet:
        points = list(points)
        if not points:
            raise DataError("a training set needs at least one point")
        dims = {len(p.x) for p in points}
        if len(dims) != 1:
            raise DimensionError(f"points have mixed dimensions {sorted(dims)}")
        return cls([p.x for p in points], [p.label for p in points])

    @property
    def input_dim(self) -> int:
        return self.X.shape[1]

    @property
    def points(self) -> list[LabeledPoint]:
        return [LabeledPoint(tuple(x), int(l)) for x, l in zip(self.X, self.y)]

    def __len__(self):
        return self.X.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TrainingSet):
            return NotImplemented
        return np.array_equal(self.X, other.X) and np.array_equal(self.y, other.y)

    def __repr__(self):
        return f"TrainingSet(q={len(self)}, N={self.input_dim}, positives={int(self.y.sum())})"

    def fingerprint(self) -> str:
        """SHA-256 over shape, coordinates and labels."""
        h = hashlib.sha256()
        h.update(np.array(self.X.shape, dtype="<i8").tobytes())
        h.update(np.ascontiguousarray(self.X, dtype="<f8").tobytes())
        h.update(np.ascontiguousarray(self.y, dtype="<i8").tobytes())
        return h.hexdigest()

    def subset(self, rows) -> TrainingSet:
        rows = np.asarray(rows, dtype=np.intp)
        return TrainingSet(self.X[rows], self.y[rows])


def _check_conflicts(X, y):
    seen = {}
    for i, (x, label) in enumerate(zip(X, y)):
        key = (x + 0.0).tobytes()  # folds -0.0 onto 0.0
        first = seen.setdefault(key, (i, label))
        if first[1] != label:
            raise DataError(
                f"point {tuple(x)} duplicates row {first[0] + 1} with a different label",
                row=i + 1,
            )


def _parse_row(row, lineno, width):
    if width is not None and len(row) != width:
        raise DimensionError(f"row {lineno}: expected {width} columns, got {len(row)}")
    try:
        values = [float(v) for v in row]
    except ValueError:
        raise DataError(f"non-numeric field in {row!r}", row=lineno) from None
    if not all(math.isfinite(v) for v in values):
        raise DataError("non-finite value", row=lineno)
    return values


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not UTF-8 ({exc})") from None
    if not rows:
        raise DataError(f"{path}: empty file")
    return rows[0], rows[1:]


def load_dataset(path) -> TrainingSet:
    """Read a labelled CSV with header ``x1,...,xN,label``.

    Rows keep their file order.  Data rows are numbered from 1 in error
    messages (the header is not counted).
    """
    header, body = _read_rows(path)
    header = [h.strip() for h in header]
    if len(header) < 2 or header[-1] != "label":
        raise DataError(f"{path}: header must be x1,...,xN,label, got {header}")
    if not body:
        raise DataError(f"{path}: no data rows")
    X, y = [], []
    for lineno, row in enumerate(body, start=1):
        values = _parse_row(row, lineno, len(header))
        label = row[-1].strip()
        if label not in ("0", "1"):
            raise DataError(f"label must be 0 or 1, got {label!r}", row=lineno)
        X.append(values[:-1])
        y.append(int(label))
    return TrainingSet(X, y)


def load_points(path, input_dim=None) -> np.ndarray:
    """Read unlabelled points; a trailing ``label`` column is ignored if present."""
    header, body = _read_rows(path)
    header = [h.strip() for h in header]
    has_label = header[-1] == "label"
    if not body:
        raise DataError(f"{path}: no data rows")
    pts = []
    for lineno, row in enumerate(body, start=1):
        values = _parse_row(row, lineno, len(header))
        pts.append(values[:-1] if has_label else values)
    X = np.array(pts, dtype=float)
    if input_dim is not None and X.shape[1] != input_dim:
        raise DimensionError(f"{path}: points have dimension {X.shape[1]}, expected {input_dim}")
    return X


def _fmt(v: float) -> str:
    return repr(float(v))


def save_dataset(ts: TrainingSet, path) -> None:
    """Write ``ts`` so that :func:`load_dataset` reproduces it bit-exactly."""
    n = ts.input_dim
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(n)] + ["label"])
        for x, label in zip(ts.X, ts.y):
            w.writerow([_fmt(v) for v in x] + [str(int(label))])


def save_points(X, path) -> None:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(X.shape[1])])
        for x in X:
            w.writerow([_fmt(v) for v in x])


def holdout_split(ts: TrainingSet, fraction: float, seed: int):
    """Shuffle deterministically and cut off ``round(fraction * q)`` points.

    Returns ``(held_out, remaining)``.
    """
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"fraction must lie in (0, 1), got {fraction}")
    q = len(ts)
    k = int(round(fraction * q))
    if k == 0 or k == q:
        raise ParameterError(
            f"fraction {fraction} of {q} points leaves an empty part ({k} vs {q - k})"
        )
    perm = np.random.default_rng(seed).permutation(q)
    return ts.subset(perm[:k]), ts.subset(perm[k:])
