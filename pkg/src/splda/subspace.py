"""Supervised locality preserving projection.

The affinity graph connects samples with equal labels. The projection
directions are the k smallest generalized eigenvectors of

    (X L X^T + r I) a = lambda (X D X^T + r I) a

where X holds the row-normalized samples as columns, L = D - W is the graph
Laplacian, and r is a regularizer scaled by the mean diagonal of X D X^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BadParams,
    DimMismatch,
    EigenDegenerate,
    EigenFailure,
    RankDeficient,
    SingleSample,
)
from .feature_store import FeatureSet, LabelVector


@dataclass
class AffinityGraph:
    """Binary same-class affinity W with degree matrix D and Laplacian L."""

    W: np.ndarray
    D: np.ndarray
    L: np.ndarray


@dataclass
class Projection:
    """A d x k linear map; columns are generalized eigenvectors.

    Rows are L2-normalized before projection and again after it, so
    Euclidean distances in the subspace behave like cosine distances.
    """

    A: np.ndarray
    eigenvalues: np.ndarray

    @property
    def input_dim(self) -> int:
        return self.A.shape[0]

    @property
    def output_dim(self) -> int:
        return self.A.shape[1]


def normalize_rows(X: np.ndarray) -> np.ndarray:
    """L2-normalize each row; zero rows stay zero."""
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return X / norms


def build_affinity(labels) -> AffinityGraph:
    """Connect same-class sample pairs with weight 1 (diagonal stays 0)."""
    values = labels.values if isinstance(labels, LabelVector) else np.asarray(labels)
    n = values.size
    if n < 2:
        raise SingleSample("affinity graph needs at least 2 samples")
    W = (values[:, None] == values[None, :]).astype(np.float64)
    np.fill_diagonal(W, 0.0)
    D = np.diag(W.sum(axis=1))
    return AffinityGraph(W=W, D=D, L=D - W)


def fit_lpp(fs: FeatureSet, k: int, rho: float = 1e-3) -> Projection:
    """Fit the supervised projection on labeled features.

    Returns the k eigenvectors with smallest eigenvalues. Deterministic:
    the largest-magnitude entry of every column is made positive.
    """
    if fs.labels is None:
        raise BadParams("fit_lpp needs labeled features")
    d = fs.d
    if not 1 <= k <= d:
        raise BadParams(f"need 1 <= k <= d, got k={k}, d={d}")
    if rho < 0:
        raise BadParams(f"rho must be >= 0, got {rho}")
    if np.unique(fs.labels).size < 2:
        raise BadParams("need at least 2 distinct labels")

    graph = build_affinity(fs.labels)
    if not graph.W.any():
        raise EigenDegenerate("affinity graph has no edges; no preferred direction")

    X = normalize_rows(fs.data.astype(np.float64)).T  # d x n
    XD = X @ graph.D @ X.T
    XL = X @ graph.L @ X.T
    rho_eff = rho * float(np.mean(np.diag(XD)))
    A_mat = XL + rho_eff * np.eye(d)
    B_mat = XD + rho_eff * np.eye(d)

    try:
        eigvals, eigvecs = scipy.linalg.eigh(A_mat, B_mat, subset_by_index=[0, k - 1])
    except np.linalg.LinAlgError as exc:
        raise RankDeficient(f"constraint matrix not positive definite: {exc}") from exc
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - backend dependent
        raise EigenFailure(f"eigensolver failed: {exc}") from exc

    # deterministic sign: largest-magnitude entry of each column positive
    for j in range(eigvecs.shape[1]):
        idx = int(np.argmax(np.abs(eigvecs[:, j])))
        if eigvecs[idx, j] < 0:
            eigvecs[:, j] = -eigvecs[:, j]

    return Projection(A=eigvecs, eigenvalues=eigvals)


def transform(proj: Projection, fs: FeatureSet) -> FeatureSet:
    """Project features into the subspace; output rows are unit-norm."""
    if fs.d != proj.input_dim:
        raise DimMismatch(
            f"features have d={fs.d} but projection expects d={proj.input_dim}"
        )
    Z = normalize_rows(normalize_rows(fs.data.astype(np.float64)) @ proj.A)
    return FeatureSet(Z.astype(np.float32), domain=fs.domain, labels=fs.labels)
