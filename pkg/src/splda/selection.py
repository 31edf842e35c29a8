"""Progressive classwise pseudo-label selection.

At iteration t of T, each class keeps the ceil((t/T) * N_c) most confident
of its N_c candidates, so every non-empty class contributes from the start
and the final iteration selects everything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParams, EmptyPredictions


@dataclass(frozen=True)
class SelectionSchedule:
    """Linear ramp state: iteration t (1-based) out of T."""

    t: int
    T: int

    def __post_init__(self):
        if not 1 <= self.t <= self.T:
            raise BadParams(f"need 1 <= t <= T, got t={self.t}, T={self.T}")

    @property
    def fraction(self) -> float:
        return self.t / self.T


@dataclass
class PseudoLabelSet:
    """Selected target samples: parallel arrays sorted by sample index."""

    indices: np.ndarray
    labels: np.ndarray
    confidences: np.ndarray

    def __len__(self) -> int:
        return self.indices.size


def _quota(n_candidates: int, sched: SelectionSchedule) -> int:
    # integer ceil of (t/T) * N_c, exact for all t, T
    return min(n_candidates, -(-sched.t * n_candidates // sched.T))


def ramp_counts(preds, sched: SelectionSchedule, num_classes: int) -> np.ndarray:
    """Per-class selection quota n_c for the given schedule."""
    if not preds:
        raise EmptyPredictions("no predictions to select from")
    labels = np.array([p.label for p in preds])
    if (labels >= num_classes).any():
        raise BadParams("prediction label out of range")
    return np.array(
        [_quota(int((labels == c).sum()), sched) for c in range(num_classes)],
        dtype=np.int64,
    )


def select(preds, sched: SelectionSchedule, num_classes: int) -> PseudoLabelSet:
    """Pick the top-confidence candidates of each class up to its quota.

    Confidence ties break toward the lower sample index; the returned
    indices are sorted ascending.
    """
    counts = ramp_counts(preds, sched, num_classes)
    chosen = []
    for c in range(num_classes):
        candidates = [(i, p.confidence) for i, p in enumerate(preds) if p.label == c]
        candidates.sort(key=lambda ic: (-ic[1], ic[0]))
        chosen.extend((i, c, conf) for i, conf in candidates[: counts[c]])
    chosen.sort(key=lambda x: x[0])
    return PseudoLabelSet(
        indices=np.array([i for i, _, _ in chosen], dtype=np.int64),
        labels=np.array([c for _, c, _ in chosen], dtype=np.int64),
        confidences=np.array([conf for _, _, conf in chosen], dtype=np.float64),
    )
