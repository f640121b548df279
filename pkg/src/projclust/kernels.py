"""Hot-loop dispatch: the compiled extension when importable, numpy otherwise.

The backend is chosen once at import.  :func:`use_backend` switches it
explicitly (benchmarks and the equivalence tests use this).
"""

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

METRIC_CODES = {"sqnorm": 0, "F": 1}
# past this many entries a BLAS gemv beats the compiled dense loop
DENSE_BLAS_MIN = 16384

_impl = _compiled if _compiled is not None else _fallback


def backend() -> str:
    return "compiled" if _impl is _compiled else "python"


def compiled_available() -> bool:
    return _compiled is not None


def use_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous backend name."""
    global _impl
    prev = backend()
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _impl = _compiled
    elif name == "python":
        _impl = _fallback
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prev


def sup_abs_dense(M, d) -> float:
    impl = _fallback if np.size(M) >= DENSE_BLAS_MIN else _impl
    return float(impl.sup_abs_dense(np.ascontiguousarray(M, dtype=np.float64),
                                      np.ascontiguousarray(d, dtype=np.float64)))


def sup_abs_csr(data, indices, indptr, d) -> float:
    return float(_impl.sup_abs_csr(np.ascontiguousarray(data, dtype=np.float64),
                                    np.ascontiguousarray(indices, dtype=np.intp),
                                    np.ascontiguousarray(indptr, dtype=np.intp),
                                    np.ascontiguousarray(d, dtype=np.float64)))


def nearest(X, active, q, metric: str):
    j, v = _impl.nearest(np.ascontiguousarray(X, dtype=np.float64),
                         np.ascontiguousarray(active, dtype=np.uint8),
                         np.ascontiguousarray(q, dtype=np.float64),
                         METRIC_CODES[metric])
    return int(j), float(v)
