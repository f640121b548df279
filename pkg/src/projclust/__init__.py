"""Projector-based clustering of signals with orthonormal sets and finite frames."""

from . import kernels
from .core import (
    ClusteringMachine,
    ScoreVector,
    Verdict,
    as_signal,
    build_machine,
    canonical_machine,
    classify,
    dissimilarity_F,
    extend_machine,
    inner,
    norm_ball_member,
    project_scores,
    sq_distance,
)
from .frames import (
    DissimilarityReport,
    Frame,
    analysis,
    canonical_dual,
    cluster_member,
    delta,
    dissimilarity_report,
    frame_bounds,
    make_frame,
    nabla,
    scaled_pair_frame,
    synthesis,
)

__version__ = "0.1.0"
