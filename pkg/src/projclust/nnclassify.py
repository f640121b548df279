"""Binary nearest-neighbour diagnosis with the remove-and-recompute tie rule."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import as_signal
from .errors import (
    ClassesExhausted,
    DatasetError,
    DimensionMismatch,
    EmptyClass,
    NonNumericCell,
    OutOfRange,
    RaggedRow,
    UnknownLabel,
)

METRICS = ("F", "sqnorm")
TIE_TOL = 1e-12
CELIAC_RANGE = (0.0, 10.0)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    features: np.ndarray  # (m, dim)
    labels: np.ndarray  # (m,) of 0/1
    feature_names: tuple[str, ...] | None = None

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def __len__(self):
        return self.features.shape[0]

    def split(self):
        """``(S0, S1)`` feature matrices."""
        return self.features[self.labels == 0], self.features[self.labels == 1]


def make_dataset(features, labels, feature_names=None) -> LabeledDataset:
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = np.asarray(labels).astype(np.int64).ravel()
    if X.shape[0] != y.size:
        raise DimensionMismatch(f"{X.shape[0]} records but {y.size} labels")
    if not np.all(np.isfinite(X)):
        raise DatasetError("feature values must be finite")
    bad = np.flatnonzero((y != 0) & (y != 1))
    if bad.size:
        raise UnknownLabel(f"label {y[bad[0]]} is not 0 or 1", row=int(bad[0]) + 1)
    X = np.ascontiguousarray(X)
    X.setflags(write=False)
    y.setflags(write=False)
    names = tuple(feature_names) if feature_names is not None else None
    return LabeledDataset(X, y, names)


def load_dataset(path, value_range=None) -> LabeledDataset:
    """Read a CSV with a header row; the last column is the 0/1 label.

    Row numbers in errors count data rows from 1.  ``value_range`` (for
    instance :data:`CELIAC_RANGE`) enables a bounds check on every feature.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        width = len(header)
        if width < 2:
            raise DatasetError(f"{path}: need at least one feature and a label column")
        X, y = [], []
        for rownum, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise RaggedRow(f"expected {width} cells, got {len(row)}", row=rownum)
            try:
                values = [float(c) for c in row[:-1]]
            except ValueError:
                raise NonNumericCell("non-numeric feature value", row=rownum) from None
            if not all(np.isfinite(values)):
                raise NonNumericCell("non-finite feature value", row=rownum)
            label = row[-1].strip()
            if label not in ("0", "1"):
                raise UnknownLabel(f"label {label!r} is not 0 or 1", row=rownum)
            if value_range is not None:
                lo, hi = value_range
                if any(v < lo or v > hi for v in values):
                    raise OutOfRange(f"feature outside [{lo:g}, {hi:g}]", row=rownum)
            X.append(values)
            y.append(int(label))
    if not X:
        raise DatasetError(f"{path}: no data rows")
    return make_dataset(np.array(X), np.array(y), [h.strip() for h in header[:-1]])


@dataclass(frozen=True)
class Diagnosis:
    label: int
    d0: float
    d1: float
    tie_rounds: int = 0

    def to_dict(self):
        return {"label": self.label, "d0": self.d0, "d1": self.d1, "tie_rounds": self.tie_rounds}


def _unit_rows(X):
    n = np.linalg.norm(X, axis=1, keepdims=True)
    return np.divide(X, n, out=np.zeros_like(X), where=n > 0)


def diagnose(ds: LabeledDataset, f_new, metric: str = "F", normalize: bool = False) -> Diagnosis:
    """Label ``f_new`` by its nearest record in each class.

    ``d_i`` is the smallest metric value over class ``i``; label 0 iff
    ``d0 < d1``.  On an exact tie both minimizers are dropped and the
    minima recomputed.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; use one of {METRICS}")
    q = as_signal(f_new, "f_new")
    if q.size != ds.dim:
        raise DimensionMismatch(f"query has dim {q.size}, dataset has dim {ds.dim}")
    S0, S1 = ds.split()
    if len(S0) == 0 or len(S1) == 0:
        raise EmptyClass("both classes need at least one record")
    if normalize:
        S0, S1 = _unit_rows(S0), _unit_rows(S1)
        nq = np.linalg.norm(q)
        q = q / nq if nq > 0 else q
    active0 = np.ones(len(S0), dtype=np.uint8)
    active1 = np.ones(len(S1), dtype=np.uint8)
    rounds = 0
    while True:
        j0, d0 = kernels.nearest(S0, active0, q, metric)
        j1, d1 = kernels.nearest(S1, active1, q, metric)
        if j0 < 0 or j1 < 0:
            raise ClassesExhausted("classes exhausted during tie resolution", tie_rounds=rounds)
        if abs(d0 - d1) > TIE_TOL:
            return Diagnosis(0 if d0 < d1 else 1, d0, d1, rounds)
        active0[j0] = 0
        active1[j1] = 0
        rounds += 1
