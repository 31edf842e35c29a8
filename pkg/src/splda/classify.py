"""Nearest-class-mean and structured (cluster-matching) classifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    BadParams,
    ClassMissing,
    DimMismatch,
    LengthMismatch,
    NonFinite,
    NonSquare,
)
from .subspace import normalize_rows


@dataclass
class Prediction:
    label: int
    confidence: float
    origin: str  # "ncm" | "sp"


@dataclass
class ClassMeans:
    """C x k matrix of L2-normalized class centroids."""

    M: np.ndarray


@dataclass
class KMeansResult:
    assignments: np.ndarray
    centroids: np.ndarray
    objective_history: list = field(default_factory=list)


def class_means(Z: np.ndarray, labels: np.ndarray, num_classes: int) -> ClassMeans:
    """Mean embedding per class, L2-normalized. Every class must be present."""
    Z = np.asarray(Z, dtype=np.float64)
    labels = np.asarray(labels)
    M = np.empty((num_classes, Z.shape[1]))
    for c in range(num_classes):
        mask = labels == c
        if not mask.any():
            raise ClassMissing(f"class {c} has no contributing samples")
        M[c] = Z[mask].mean(axis=0)
    return ClassMeans(M=normalize_rows(M))


def _sq_dists(Z: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, n x C."""
    diff = Z[:, None, :] - M[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def ncm_predict(Z: np.ndarray, means: ClassMeans, temperature: float = 1.0):
    """Assign each sample to its nearest class mean.

    Confidence is the softmax (over classes) of negative squared distance,
    evaluated at the chosen class. Ties go to the lowest class id.
    """
    Z = np.asarray(Z, dtype=np.float64)
    if Z.shape[1] != means.M.shape[1]:
        raise DimMismatch(
            f"embeddings have k={Z.shape[1]} but means have k={means.M.shape[1]}"
        )
    d2 = _sq_dists(Z, means.M)
    probs = _softmax_rows(-d2 / temperature)
    labels = np.argmin(d2, axis=1)
    return [
        Prediction(label=int(c), confidence=float(probs[i, c]), origin="ncm")
        for i, c in enumerate(labels)
    ]


def kmeans(Z: np.ndarray, init: np.ndarray, max_iter: int, tol: float) -> KMeansResult:
    """Lloyd iterations from a fixed initialization (no RNG).

    Assignment ties go to the lowest cluster id; an empty cluster keeps its
    previous centroid. Stops when the largest centroid movement is <= tol.
    """
    Z = np.asarray(Z, dtype=np.float64)
    centroids = np.array(init, dtype=np.float64, copy=True)
    if Z.shape[0] < centroids.shape[0]:
        raise BadParams(f"need n >= C, got n={Z.shape[0]}, C={centroids.shape[0]}")
    if not np.isfinite(centroids).all():
        raise NonFinite("initial centroids contain NaN/Inf")
    if max_iter < 1 or tol < 0:
        raise BadParams(f"bad max_iter={max_iter} or tol={tol}")

    assignments = np.zeros(Z.shape[0], dtype=np.int64)
    history = []
    for _ in range(max_iter):
        d2 = _sq_dists(Z, centroids)
        assignments = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(Z.shape[0]), assignments].sum()))
        new_centroids = centroids.copy()
        for j in range(centroids.shape[0]):
            mask = assignments == j
            if mask.any():
                new_centroids[j] = Z[mask].mean(axis=0)
        movement = float(np.linalg.norm(new_centroids - centroids, axis=1).max())
        centroids = new_centroids
        if movement <= tol:
            break
    return KMeansResult(
        assignments=assignments, centroids=centroids, objective_history=history
    )


def hungarian(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost one-to-one assignment (rows to columns).

    Among equal-cost optima, returns the lexicographically smallest
    permutation. Backed by scipy's assignment solver; the lexicographic
    refinement re-solves the subproblem with each prefix pinned.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise NonSquare(f"cost matrix must be square, got shape {cost.shape}")
    if not np.isfinite(cost).all():
        raise NonFinite("cost matrix contains NaN/Inf")
    n = cost.shape[0]

    def best_cost(sub: np.ndarray) -> float:
        if sub.size == 0:
            return 0.0
        r, c = linear_sum_assignment(sub)
        return float(sub[r, c].sum())

    total = best_cost(cost)
    eps = 1e-9 * max(1.0, abs(total))
    perm = np.empty(n, dtype=np.int64)
    free_cols = list(range(n))
    prefix = 0.0
    for i in range(n):
        for pos, j in enumerate(free_cols):
            remaining = [c for c in free_cols if c != j]
            sub = cost[np.ix_(range(i + 1, n), remaining)]
            if prefix + cost[i, j] + best_cost(sub) <= total + eps:
                perm[i] = j
                prefix += cost[i, j]
                free_cols.pop(pos)
                break
    return perm


def sp_predict(Z: np.ndarray, means: ClassMeans, temperature: float = 1.0):
    """Cluster the samples, then match whole clusters to classes.

    k-means starts at the class means; the cluster->class map minimizes the
    total squared centroid-to-mean distance. Confidence is the softmax over
    clusters of negative squared distance at the sample's assigned cluster.
    """
    Z = np.asarray(Z, dtype=np.float64)
    num_classes = means.M.shape[0]
    if Z.shape[0] < num_classes:
        raise BadParams(f"need n >= C, got n={Z.shape[0]}, C={num_classes}")
    result = kmeans(Z, init=means.M, max_iter=100, tol=1e-6)
    cost = _sq_dists(result.centroids, means.M)
    perm = hungarian(cost)
    d2 = _sq_dists(Z, result.centroids)
    probs = _softmax_rows(-d2 / temperature)
    return [
        Prediction(
            label=int(perm[j]), confidence=float(probs[i, j]), origin="sp"
        )
        for i, j in enumerate(result.assignments)
    ]


def combine(ncm_preds, sp_preds):
    """Keep the higher-confidence prediction per sample; ties go to NCM."""
    if len(ncm_preds) != len(sp_preds):
        raise LengthMismatch(
            f"prediction lists differ in length: {len(ncm_preds)} vs {len(sp_preds)}"
        )
    return [
        s if s.confidence > n.confidence else n
        for n, s in zip(ncm_preds, sp_preds)
    ]
