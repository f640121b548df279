"""XOR and OR gates as clustering machines on the canonical basis of R^4.

Input ``I_j`` is the canonical vector ``e_j``.  XOR sends ``I_1, I_4`` to
output 0 and ``I_2, I_3`` to output 1; OR sends only ``I_1`` to output 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ClusteringMachine, as_signal, canonical_machine, project_scores
from .errors import DimensionMismatch, UnknownProjector

XOR_GROUPS = ((0, 3), (1, 2))
OR_GROUPS = ((0,), (1, 2, 3))

# inputs e_1..e_4 as bit pairs (a, b); paired with XOR_GROUPS/OR_GROUPS above
TRUTH_INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class GateMachine:
    kind: str
    machine: ClusteringMachine


def gate_machine(kind: str) -> GateMachine:
    kind = kind.upper()
    if kind == "XOR":
        groups = XOR_GROUPS
    elif kind == "OR":
        groups = OR_GROUPS
    else:
        raise ValueError(f"unknown gate {kind!r}")
    return GateMachine(kind, canonical_machine(4, groups, labels=("O1", "O2")))


def gate_scores(kind: str, f) -> tuple[float, float]:
    f = as_signal(f)
    if f.size != 4:
        raise DimensionMismatch(f"gate inputs live in R^4, got dim {f.size}")
    sv = project_scores(gate_machine(kind).machine, f)
    return float(sv.scores[0]), float(sv.scores[1])


def truth_table(kind: str):
    """Rows ``(j, bits, output_index, scores)`` for the canonical inputs."""
    rows = []
    for j, bits in enumerate(TRUTH_INPUTS):
        q = gate_scores(kind, np.eye(4)[j])
        rows.append((j + 1, bits, int(np.argmax(q)), q))
    return rows


# Phi: projector id -> canonical vector index
PROJECTOR_IDS = ("Q1", "Q2", "QT1", "QT2")
_PHI = {name: i for i, name in enumerate(PROJECTOR_IDS)}


def phi(projector_id: str) -> np.ndarray:
    try:
        return np.eye(4)[_PHI[projector_id]]
    except KeyError:
        raise UnknownProjector(f"unknown projector {projector_id!r}; use one of {PROJECTOR_IDS}") from None


def phi_inverse(v) -> str:
    v = np.asarray(v, dtype=np.float64)
    for name, i in _PHI.items():
        if np.allclose(v, np.eye(4)[i], atol=1e-12):
            return name
    raise UnknownProjector("vector is not the image of any projector")


def transport_matrix() -> np.ndarray:
    """``U = |phi_1><phi_3| + |phi_2><phi_4|``."""
    e = np.eye(4)
    return np.outer(e[0], e[2]) + np.outer(e[1], e[3])


def matrices() -> dict[str, np.ndarray]:
    """The four diagonal projectors keyed by id (``QT`` = OR gate)."""
    xor = gate_machine("XOR").machine
    orm = gate_machine("OR").machine
    return {"Q1": xor.projector(0), "Q2": xor.projector(1),
            "QT1": orm.projector(0), "QT2": orm.projector(1)}


def transport(direction: str, projector_id: str) -> str:
    """Map an OR projector to its XOR partner (``U``) or back (``U^T``)."""
    U = transport_matrix()
    if direction in ("or->xor", "OR->XOR"):
        op = U
    elif direction in ("xor->or", "XOR->OR"):
        op = U.T
    else:
        raise ValueError(f"unknown direction {direction!r}")
    image = op @ phi(projector_id)
    if not np.any(image):
        raise UnknownProjector(f"{projector_id} is annihilated in direction {direction}")
    return phi_inverse(image)


def similarity_obstruction() -> tuple[int, int]:
    """``(trace Q1, trace QT1)``; unequal traces rule out any similarity transform."""
    m = matrices()
    return int(round(np.trace(m["Q1"]))), int(round(np.trace(m["QT1"])))


def traces() -> dict[str, int]:
    return {k: int(round(np.trace(v))) for k, v in matrices().items()}
