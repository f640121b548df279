"""Worked numeric examples checked by ``projclust demo``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core, frames, gates, tones


@dataclass(frozen=True)
class Check:
    name: str
    value: object
    expected: object
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        if isinstance(self.expected, (int, float)) and not isinstance(self.expected, bool):
            return abs(float(self.value) - float(self.expected)) <= self.tol
        return self.value == self.expected

    def to_dict(self):
        return {"check": self.name, "value": self.value, "expected": self.expected,
                "tol": self.tol, "pass": self.passed}


RED = (1.0, 0.0, 0.0)
GREEN = (0.0, 1.0, 0.0)
F_R = (0.95, 0.1, 0.1)
P1 = (0.6, 0.0, 0.6)
P2 = (0.0, 0.8, 0.2)
F1 = (0.8, 0.1, 1.0)
F2 = (0.3, 0.6, 0.1)
F3 = (0.7, 0.8, 1.0)

FRAME_P = (1.0, 2.0, 3.0)
FRAME_F = (1.1, 2.0, 3.0)
FRAME_F_NOISED = (1.1, 2.1, 3.0)


def rgb_machine():
    return core.canonical_machine(3, [[0], [1], [2]], labels=("R", "G", "B"))


def r3_pair_frame():
    return frames.scaled_pair_frame(3, 0.5)


def gaussian_tone_fixture(width: float = 0.1) -> np.ndarray:
    """Peaks at 110, 220 (double height) and 440 Hz, unit norm up to tails."""
    k = np.arange(1, tones.N_BINS + 1, dtype=np.float64)

    def peak(c):
        return np.exp(-(((k - c) / width) ** 2))

    return (peak(110) + 2 * peak(220) + peak(440)) / np.sqrt(6)


def rgb_checks():
    cm = rgb_machine()
    return [
        Check("rgb q1(f_R)", float(core.project_scores(cm, F_R).scores[0]), 0.9025, 1e-15),
        Check("rgb ||f_R - R||^2", core.sq_distance(F_R, RED), 0.0225, 1e-12),
        Check("rgb ||f_R - G||^2", core.sq_distance(F_R, GREEN), 1.7225, 1e-12),
        Check("rgb ||P1 - f1||^2", core.sq_distance(P1, F1), 0.21, 1e-12),
        Check("rgb F[P1, f1]", core.dissimilarity_F(P1, F1), 0.0100, 5e-4),
        Check("rgb F[P2, f2]", core.dissimilarity_F(P2, F2), 0.059, 2e-3),
        Check("rgb F[P2, f1]", core.dissimilarity_F(P2, F1), 0.78, 1e-2),
    ]


def frame_checks():
    fr = r3_pair_frame()
    A, B = frames.frame_bounds(fr.vectors)
    r = frames.dissimilarity_report(fr, FRAME_F, FRAME_P)
    rn = frames.dissimilarity_report(fr, FRAME_F_NOISED, FRAME_P)
    return [
        Check("frame bound A", A, 1.25, 1e-10),
        Check("frame bound B", B, 1.25, 1e-10),
        Check("frame Delta(f, P)", r.delta, 0.1, 1e-12),
        Check("frame nabla(f, P)", r.nabla, 0.08, 1e-12),
        Check("frame Delta(f_noised, P)", rn.delta, 0.1, 1e-12),
        Check("frame nabla(f_noised, P)", rn.nabla, 0.08, 1e-12),
        Check("frame f in norm ball", core.norm_ball_member(FRAME_P, FRAME_F, 0.1), True),
        Check("frame f_noised in norm ball", core.norm_ball_member(FRAME_P, FRAME_F_NOISED, 0.1), False),
        Check("frame f_noised in Delta ball",
              frames.cluster_member(fr, FRAME_P, FRAME_F_NOISED, 0.1, "delta"), True),
    ]


def tone_checks():
    f = gaussian_tone_fixture()
    top0, value0 = tones.recognize(f, tones.reference_set(0), "F")[0]
    top2, _ = tones.recognize(f, tones.reference_set(2), "sqnorm")[0]
    return [
        Check("tone n_h=0 recognized", top0.name, "A3"),
        Check("tone n_h=0 F at A3", value0, 1 - 2 / np.sqrt(6), 1e-9),
        Check("tone n_h=2 recognized", top2.name, "A2"),
    ]


def gate_checks():
    return [
        Check("gate OR->XOR QT1", gates.transport("or->xor", "QT1"), "Q1"),
        Check("gate OR->XOR QT2", gates.transport("or->xor", "QT2"), "Q2"),
        Check("gate trace obstruction", list(gates.similarity_obstruction()), [2, 1]),
        Check("gate XOR scores e1", list(gates.gate_scores("XOR", [1, 0, 0, 0])), [1.0, 0.0]),
    ]


def all_checks():
    return rgb_checks() + frame_checks() + tone_checks() + gate_checks()
