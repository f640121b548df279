"""Inner-product primitives and the projector-based clustering machine.

A clustering machine is an orthonormal family ``e_1 .. e_N`` in R^n whose
indices are partitioned into ``M`` output groups.  Each group induces the
orthogonal projector ``Q_a = sum_{k in group a} |e_k><e_k|`` and the score
``q_a(f) = ||Q_a f||^2``.  Signals are plain 1-d float64 numpy arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AlreadySpanned,
    DimensionMismatch,
    InvalidPartition,
    InvalidSignal,
    NotOrthonormal,
    ZeroSignal,
)

ORTHONORMAL_TOL = 1e-10
COMPLETENESS_TOL = 1e-8
RESIDUAL_TOL = 1e-8
# slack on eps-ball comparisons so that e.g. ||(1.1,2,3)-(1,2,3)|| <= 0.1 holds
MEMBERSHIP_RTOL = 1e-12

DEFAULT_THETA_HI = 0.9
DEFAULT_THETA_LO = 0.05


def as_signal(x, name="signal") -> np.ndarray:
    """Return ``x`` as a finite, non-empty 1-d float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidSignal(f"{name} must be a non-empty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSignal(f"{name} contains NaN or Inf")
    return arr


def _pair(f, g):
    f = as_signal(f, "f")
    g = as_signal(g, "g")
    if f.shape != g.shape:
        raise DimensionMismatch(f"dimension mismatch: {f.size} vs {g.size}")
    return f, g


def inner(f, g) -> float:
    f, g = _pair(f, g)
    return float(np.dot(f, g))


def norm(f) -> float:
    return float(np.linalg.norm(as_signal(f)))


def dissimilarity_F(f, g) -> float:
    """``||f|| ||g|| - |<f, g>|``; zero exactly on collinear pairs."""
    f, g = _pair(f, g)
    value = np.linalg.norm(f) * np.linalg.norm(g) - abs(np.dot(f, g))
    # Schwarz guarantees >= 0; clip the rounding below it
    return float(max(value, 0.0))


def sq_distance(f, g) -> float:
    f, g = _pair(f, g)
    d = f - g
    return float(np.dot(d, d))


def norm_ball_member(center, f, eps: float) -> bool:
    """True iff ``||center - f|| <= eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return within(np.sqrt(sq_distance(center, f)), eps)


def within(value: float, eps: float) -> bool:
    """``value <= eps`` up to a relative rounding slack."""
    return bool(value <= eps + MEMBERSHIP_RTOL * max(eps, 1.0))


def signal_to_json(f) -> str:
    return json.dumps([float(v) for v in as_signal(f)])


def signal_from_json(text: str) -> np.ndarray:
    return as_signal(json.loads(text))


def signal_to_csv(f) -> str:
    return ",".join(repr(float(v)) for v in as_signal(f))


def signal_from_csv(line: str) -> np.ndarray:
    return as_signal([float(tok) for tok in line.strip().split(",")])


def check_orthonormal(vectors, tol: float = ORTHONORMAL_TOL) -> np.ndarray:
    """Validate an orthonormal family given as rows; return it as a 2-d array."""
    E = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if E.ndim != 2 or E.shape[0] == 0 or E.shape[1] == 0:
        raise NotOrthonormal("need at least one vector")
    if not np.all(np.isfinite(E)):
        raise InvalidSignal("basis contains NaN or Inf")
    count, dim = E.shape
    if count > dim:
        raise NotOrthonormal(f"{count} vectors cannot be orthonormal in dimension {dim}")
    gram = E @ E.T
    err = np.max(np.abs(gram - np.eye(count)))
    if err > tol:
        raise NotOrthonormal(f"max |<e_i,e_j> - delta_ij| = {err:.3e} exceeds {tol:g}")
    return E


@dataclass(frozen=True)
class ScoreVector:
    scores: np.ndarray
    total: float
    input_norm_sq: float

    def normalized(self) -> np.ndarray:
        """Scores divided by their sum (a degree of membership per output)."""
        if self.total == 0:
            return np.zeros_like(self.scores)
        return self.scores / self.total

    def to_dict(self):
        return {
            "scores": [float(s) for s in self.scores],
            "total": self.total,
            "input_norm_sq": self.input_norm_sq,
        }


@dataclass(frozen=True, eq=False)
class ClusteringMachine:
    """Orthonormal rows of ``basis`` grouped into labelled outputs.

    Construct through :func:`build_machine`, which validates the inputs.
    """

    basis: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    _owner: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def size(self) -> int:
        return self.basis.shape[0]

    @property
    def is_complete(self) -> bool:
        return self.size == self.dim

    def __len__(self):
        return len(self.groups)

    def coefficients(self, f) -> np.ndarray:
        f = as_signal(f)
        if f.size != self.dim:
            raise DimensionMismatch(f"signal has dim {f.size}, machine expects {self.dim}")
        return self.basis @ f

    def project(self, alpha: int, f) -> np.ndarray:
        """``Q_alpha f``."""
        c = self.coefficients(f)
        idx = list(self.groups[alpha])
        return c[idx] @ self.basis[idx]

    def projector(self, alpha: int) -> np.ndarray:
        E = self.basis[list(self.groups[alpha])]
        return E.T @ E

    def residual(self, f) -> np.ndarray:
        """``f - sum_a Q_a f``: the part of ``f`` outside the span of the basis."""
        f = as_signal(f)
        return f - self.coefficients(f) @ self.basis


def build_machine(basis, groups: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
    """Build a clustering machine from orthonormal rows and a partition of their indices.

    Indices are 0-based.  ``labels`` defaults to ``O1 .. OM``.
    """
    E = check_orthonormal(basis)
    n = E.shape[0]
    owner = np.full(n, -1, dtype=np.intp)
    norm_groups = []
    for a, grp in enumerate(groups):
        grp = tuple(int(k) for k in grp)
        if not grp:
            raise InvalidPartition(f"group {a} is empty")
        for k in grp:
            if not 0 <= k < n:
                raise InvalidPartition(f"index {k} out of range for {n} basis vectors")
            if owner[k] != -1:
                raise InvalidPartition(f"index {k} appears in groups {owner[k]} and {a}")
            owner[k] = a
        norm_groups.append(grp)
    if not norm_groups:
        raise InvalidPartition("need at least one group")
    missing = np.flatnonzero(owner < 0)
    if missing.size:
        raise InvalidPartition(f"basis indices {missing.tolist()} are not assigned to a group")
    if labels is None:
        labels = [f"O{a + 1}" for a in range(len(norm_groups))]
    labels = tuple(str(s) for s in labels)
    if len(labels) != len(norm_groups):
        raise InvalidPartition(f"{len(labels)} labels for {len(norm_groups)} groups")
    E = E.copy()
    E.setflags(write=False)
    owner.setflags(write=False)
    return ClusteringMachine(E, tuple(norm_groups), labels, owner)


def canonical_machine(dim: int, groups, labels=None, ambient: int | None = None):
    """Machine on canonical basis vectors ``e_k`` (0-based ``k < dim``) of R^ambient."""
    ambient = dim if ambient is None else ambient
    if ambient < dim:
        raise ValueError("ambient dimension smaller than basis size")
    return build_machine(np.eye(ambient)[:dim], groups, labels)


def project_scores(cm: ClusteringMachine, f) -> ScoreVector:
    f = as_signal(f)
    c = cm.coefficients(f)
    scores = np.bincount(cm._owner, weights=c * c, minlength=len(cm.groups))
    return ScoreVector(scores, float(scores.sum()), float(np.dot(f, f)))


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`classify`.

    ``kind`` is one of ``definite``, ``probable``, ``split``, ``missing_output``
    or ``null``.  ``index``/``label``/``score`` are set for the first two,
    ``ranking`` for ``split`` and ``residual_norm`` for ``missing_output``.
    """

    kind: str
    thresholds: tuple[float, float]
    index: int | None = None
    label: str | None = None
    score: float | None = None
    ranking: tuple[tuple[int, str, float], ...] = ()
    residual_norm: float | None = None

    def to_dict(self):
        out = {"kind": self.kind, "theta_hi": self.thresholds[0], "theta_lo": self.thresholds[1]}
        if self.index is not None:
            out.update(index=self.index, label=self.label, score=self.score)
        if self.ranking:
            out["ranking"] = [{"index": i, "label": l, "score": s} for i, l, s in self.ranking]
        if self.residual_norm is not None:
            out["residual_norm"] = self.residual_norm
        return out


def classify(cm: ClusteringMachine, f, theta_hi: float = DEFAULT_THETA_HI,
             theta_lo: float = DEFAULT_THETA_LO) -> Verdict:
    """Route ``f`` to one of the five verdict kinds.

    Thresholds are fractions of ``||f||^2``.  Precedence is
    definite > probable > split > null > missing_output.
    """
    if not 0 < theta_lo < theta_hi <= 1:
        raise ValueError("thresholds must satisfy 0 < theta_lo < theta_hi <= 1")
    sv = project_scores(cm, f)
    n2 = sv.input_norm_sq
    if n2 == 0:
        raise ZeroSignal("cannot classify the zero signal")
    th = (float(theta_hi), float(theta_lo))
    q = sv.scores
    best = int(np.argmax(q))
    if q[best] >= n2 * (1 - ORTHONORMAL_TOL):
        return Verdict("definite", th, best, cm.labels[best], float(q[best]))
    if q[best] >= theta_hi * n2:
        return Verdict("probable", th, best, cm.labels[best], float(q[best]))
    nonzero = np.flatnonzero(q > 0)
    if nonzero.size >= 2 and sv.total >= theta_hi * n2:
        # descending score, then ascending group index
        order = sorted(nonzero.tolist(), key=lambda a: (-q[a], a))
        ranking = tuple((a, cm.labels[a], float(q[a])) for a in order)
        return Verdict("split", th, ranking=ranking)
    if np.all(q <= theta_lo * n2):
        return Verdict("null", th)
    return Verdict("missing_output", th, residual_norm=float(np.linalg.norm(cm.residual(f))))


def extend_machine(cm: ClusteringMachine, f, label: str | None = None):
    """Add the normalized residual of ``f`` as a new singleton output group.

    Returns ``(new_machine, new_vector)``.
    """
    f = as_signal(f)
    r = cm.residual(f)
    if np.linalg.norm(r) <= RESIDUAL_TOL:
        raise AlreadySpanned("signal already spanned by the machine's basis")
    # second Gram-Schmidt pass removes the rounding left by the first
    r = r - (cm.basis @ r) @ cm.basis
    e_new = r / np.linalg.norm(r)
    basis = np.vstack([cm.basis, e_new])
    groups = list(cm.groups) + [(cm.size,)]
    labels = list(cm.labels) + [label or f"O{len(cm.groups) + 1}"]
    return build_machine(basis, groups, labels), e_new
