"""Clustering evaluation: accuracy under optimal label matching, and NMI.

Both metrics compare two partitions of the same instances and are invariant to
relabeling either side.  Accuracy matches predicted to true clusters with the
Hungarian algorithm on the contingency table; NMI normalizes mutual
information by the geometric mean of the two partition entropies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["Partition", "optimal_label_matching", "accuracy", "nmi"]


@dataclass(frozen=True)
class Partition:
    """A hard assignment of N instances to at most ``k`` clusters."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size < 1:
            raise ValueError(f"labels must be a non-empty vector, got shape {labels.shape}")
        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(labels == np.floor(labels)):
                raise ValueError("labels must be integers")
        labels = labels.astype(np.int64)
        if self.k < 1:
            raise ValueError("k must be positive")
        if labels.min() < 0 or labels.max() >= self.k:
            raise ValueError(f"labels must lie in [0, {self.k})")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels, k: int | None = None) -> "Partition":
        labels = np.asarray(labels)
        if k is None:
            k = int(labels.max()) + 1 if labels.size else 0
        return cls(labels, k)

    @property
    def n(self) -> int:
        return self.labels.size


def _contingency(true_p: Partition, pred_p: Partition) -> np.ndarray:
    if true_p.n != pred_p.n:
        raise ValueError(
            f"partition length mismatch: {true_p.n} vs {pred_p.n} instances"
        )
    table = np.zeros((true_p.k, pred_p.k), dtype=np.int64)
    np.add.at(table, (true_p.labels, pred_p.labels), 1)
    return table


def optimal_label_matching(true_p: Partition, pred_p: Partition) -> dict[int, int]:
    """Injective map from predicted to true labels maximizing matched instances.

    Computed by the Hungarian algorithm on the contingency table, zero-padded
    to square when the cluster counts differ; predicted labels matched only to
    padding are omitted from the map.
    """
    table = _contingency(true_p, pred_p)
    size = max(true_p.k, pred_p.k)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: true_p.k, : pred_p.k] = table
    rows, cols = linear_sum_assignment(-padded)
    return {
        int(c): int(r)
        for r, c in zip(rows, cols)
        if r < true_p.k and c < pred_p.k
    }


def accuracy(true_p: Partition, pred_p: Partition) -> float:
    """Fraction of instances matched under the optimal label mapping."""
    table = _contingency(true_p, pred_p)
    mapping = optimal_label_matching(true_p, pred_p)
    matched = sum(int(table[t, p]) for p, t in mapping.items())
    return matched / true_p.n


def nmi(true_p: Partition, pred_p: Partition) -> float:
    """Normalized mutual information with geometric-mean normalization.

    Entropies use natural logs over empirical counts.  Degenerate cases: 1.0
    when both partitions are single-cluster (both entropies zero), 0.0 when
    exactly one entropy is zero.
    """
    table = _contingency(true_p, pred_p).astype(np.float64)
    n = true_p.n
    true_counts = table.sum(axis=1)
    pred_counts = table.sum(axis=0)

    def entropy(counts):
        probs = counts[counts > 0] / n
        return float(-np.sum(probs * np.log(probs)))

    h_true = entropy(true_counts)
    h_pred = entropy(pred_counts)
    if h_true == 0.0 and h_pred == 0.0:
        return 1.0
    if h_true == 0.0 or h_pred == 0.0:
        return 0.0

    info = 0.0
    for t in range(table.shape[0]):
        for p in range(table.shape[1]):
            joint = table[t, p]
            if joint > 0:
                info += (joint / n) * math.log(n * joint / (true_counts[t] * pred_counts[p]))
    value = info / math.sqrt(h_true * h_pred)
    return min(max(value, 0.0), 1.0)
