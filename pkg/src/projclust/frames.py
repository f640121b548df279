"""Finite frames, canonical duals and the frame dissimilarities Delta / nabla.

Frame vectors are stored as the rows of an ``(N, n)`` matrix, either a dense
numpy array or a ``scipy.sparse`` CSR matrix (the 44100-vector spectral
frame only fits in memory sparse).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import kernels
from .core import as_signal, norm_ball_member, within
from .errors import DimensionMismatch, InvalidSignal, NotAFrame

SPAN_TOL = 1e-12
# dimension above which extreme eigenvalues come from power iteration
DENSE_EIG_MAX_DIM = 512
POWER_TOL = 1e-10
POWER_MAXITER = 10_000

MEASURES = ("norm", "delta", "nabla")


def _as_rows(vectors):
    if sp.issparse(vectors):
        V = sp.csr_matrix(vectors, dtype=np.float64)
        V.sort_indices()
    else:
        V = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
        if V.ndim != 2:
            raise InvalidSignal("frame vectors must form a 2-d array")
    if V.shape[0] == 0 or V.shape[1] == 0:
        raise NotAFrame("empty family")
    data = V.data if sp.issparse(V) else V
    if not np.all(np.isfinite(data)):
        raise InvalidSignal("frame vectors contain NaN or Inf")
    return V


def frame_operator(vectors):
    """``S = sum_j |Psi_j><Psi_j|`` as an (n, n) matrix (sparse in, sparse out)."""
    V = _as_rows(vectors)
    return (V.T @ V).tocsr() if sp.issparse(V) else V.T @ V


def power_iteration(matvec, n, tol=POWER_TOL, maxiter=POWER_MAXITER, seed=0):
    """Largest eigenvalue of a symmetric positive semidefinite operator."""
    x = np.random.default_rng(seed).standard_normal(n)
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(maxiter):
        y = matvec(x)
        lam = float(x @ y)
        # stop on the eigen-residual; the Rayleigh quotient stalls on clustered spectra
        if np.linalg.norm(y - lam * x) <= tol * max(abs(lam), 1.0):
            return lam
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
    return lam


def frame_bounds(vectors) -> tuple[float, float]:
    """Optimal frame bounds: the extreme eigenvalues of the frame operator."""
    S = frame_operator(vectors)
    n = S.shape[0]
    if n <= DENSE_EIG_MAX_DIM:
        Sd = S.toarray() if sp.issparse(S) else S
        ev = np.linalg.eigvalsh(Sd)
        A, B = float(ev[0]), float(ev[-1])
    else:
        B = power_iteration(lambda x: S @ x, n)
        # the top of B*I - S sits at B - A
        gap = power_iteration(lambda x: B * x - S @ x, n, seed=1)
        A = B - gap
    if A <= SPAN_TOL:
        raise NotAFrame(f"not a frame: A = {max(A, 0.0):.3e}")
    return A, B


def is_tight(bounds) -> bool:
    A, B = bounds
    return abs(A - B) <= 1e-10 * max(A, 1.0)


def canonical_dual(vectors, bounds=None):
    """``S^{-1} Psi_j`` for every frame vector, returned as rows.

    Tight frames take the shortcut ``Psi_j / A``.
    """
    V = _as_rows(vectors)
    if bounds is None:
        bounds = frame_bounds(V)
    if bounds[0] <= SPAN_TOL:
        raise NotAFrame("not a frame: singular frame operator")
    if is_tight(bounds):
        return V * (1.0 / bounds[0])
    S = frame_operator(V)
    if sp.issparse(S):
        if S.count_nonzero() == np.count_nonzero(S.diagonal()):
            return (V @ sp.diags(1.0 / S.diagonal())).tocsr()
        S = S.toarray()
        V = V.toarray()
    try:
        cf = scipy.linalg.cho_factor(S)
    except np.linalg.LinAlgError as exc:
        raise NotAFrame("not a frame: singular frame operator") from exc
    return scipy.linalg.cho_solve(cf, V.T).T


@dataclass(frozen=True, eq=False)
class Frame:
    vectors: np.ndarray | sp.csr_matrix
    bounds: tuple[float, float]
    dual_vectors: np.ndarray | sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def tight(self) -> bool:
        return is_tight(self.bounds)

    def dual(self) -> "Frame":
        """The canonical dual as a frame in its own right (bounds ``1/B, 1/A``)."""
        A, B = self.bounds
        return make_frame(self.dual_vectors, bounds=(1.0 / B, 1.0 / A))

    @cached_property
    def _scan(self):
        return _scan_plan(self.vectors), _scan_plan(self.dual_vectors)

    def norm_sums(self) -> tuple[float, float]:
        """``(sum_j ||Psi_j||, sum_j ||dual Psi_j||)``."""
        return _row_norm_sum(self.vectors), _row_norm_sum(self.dual_vectors)

    def to_json(self) -> str:
        V = self.vectors.toarray() if sp.issparse(self.vectors) else self.vectors
        return json.dumps({"dim": self.dim, "vectors": V.tolist()})


def _row_norm_sum(V) -> float:
    if sp.issparse(V):
        return float(np.sqrt(np.asarray(V.multiply(V).sum(axis=1)).ravel()).sum())
    return float(np.linalg.norm(V, axis=1).sum())


def _scan_plan(V):
    if sp.issparse(V):
        return ("csr", V.data.astype(np.float64), V.indices.astype(np.intp),
                V.indptr.astype(np.intp))
    return ("dense", np.ascontiguousarray(V, dtype=np.float64))


def _sup(plan, d) -> float:
    if plan[0] == "csr":
        return kernels.sup_abs_csr(plan[1], plan[2], plan[3], d)
    return kernels.sup_abs_dense(plan[1], d)


def make_frame(vectors, bounds=None) -> Frame:
    V = _as_rows(vectors)
    if bounds is None:
        bounds = frame_bounds(V)
    bounds = (float(bounds[0]), float(bounds[1]))
    return Frame(V, bounds, canonical_dual(V, bounds))


def frame_from_json(text: str) -> Frame:
    """Load ``{"dim": n, "vectors": [[...], ...]}``; the dual is always recomputed."""
    obj = json.loads(text)
    V = np.asarray(obj["vectors"], dtype=np.float64)
    if V.ndim != 2 or V.shape[1] != int(obj["dim"]):
        raise DimensionMismatch(f"vectors do not have dimension {obj['dim']}")
    return make_frame(V)


def scaled_pair_frame(n: int, scale: float = 0.5) -> Frame:
    """Tight frame ``e_1, s e_1, e_2, s e_2, ...`` of 2n vectors, ``A = B = 1 + s^2``."""
    if n < 1 or not scale > 0:
        raise ValueError("need n >= 1 and scale > 0")
    data = np.tile([1.0, float(scale)], n)
    indices = np.repeat(np.arange(n), 2)
    indptr = np.arange(2 * n + 1)
    V = sp.csr_matrix((data, indices, indptr), shape=(2 * n, n))
    A = 1.0 + scale * scale
    return Frame(V, (A, A), V * (1.0 / A))


def analysis(frame: Frame, f) -> np.ndarray:
    """Coefficients ``<Psi_j, f>``."""
    f = _check_dim(frame, f)
    return np.asarray(frame.vectors @ f).ravel()


def synthesis(frame: Frame, c, dual: bool = False) -> np.ndarray:
    """``sum_j c_j Psi_j`` (or the dual vectors when ``dual``)."""
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.size != frame.size:
        raise DimensionMismatch(f"need {frame.size} coefficients, got {c.size}")
    V = frame.dual_vectors if dual else frame.vectors
    return np.asarray(V.T @ c).ravel()


def _check_dim(frame, f):
    f = as_signal(f)
    if f.size != frame.dim:
        raise DimensionMismatch(f"signal has dim {f.size}, frame expects {frame.dim}")
    return f


@dataclass(frozen=True)
class DissimilarityReport:
    delta: float
    nabla: float
    sup_analysis: float
    sup_dual: float


def dissimilarity_report(frame: Frame, f, g) -> DissimilarityReport:
    f = _check_dim(frame, f)
    g = _check_dim(frame, g)
    d = f - g
    plan, dual_plan = frame._scan
    a = _sup(plan, d)
    b = _sup(dual_plan, d)
    return DissimilarityReport(max(a, b), min(a, b), a, b)


def delta(frame: Frame, f, g) -> float:
    return dissimilarity_report(frame, f, g).delta


def nabla(frame: Frame, f, g) -> float:
    return dissimilarity_report(frame, f, g).nabla


def cluster_member(frame: Frame | None, center, f, eps: float, measure: str = "delta") -> bool:
    """Membership of ``f`` in the eps-neighbourhood of ``center`` under ``measure``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if measure == "norm":
        return norm_ball_member(center, f, eps)
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    rep = dissimilarity_report(frame, f, center)
    return within(rep.delta if measure == "delta" else rep.nabla, eps)
