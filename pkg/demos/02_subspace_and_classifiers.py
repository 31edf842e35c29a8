"""Subspace learning and the two classifiers, on blobs you can reason about.

The supervised projection connects same-class samples in a graph and keeps
the directions along which connected samples stay close. On two separated
blobs the single most informative direction is recovered. The cluster-
matching classifier (k-means + one-to-one assignment) then recovers a blob
that sits on the wrong side of the nearest-mean boundary.
"""

import numpy as np

from splda import (
    ClassMeans,
    FeatureSet,
    class_means,
    fit_lpp,
    ncm_predict,
    sp_predict,
    transform,
)

rng = np.random.default_rng(0)

# two blobs at +-5 on coordinate 0, noise only on coordinate 1
n = 200
X = np.zeros((2 * n, 2))
X[:n, 0], X[n:, 0] = -5.0, 5.0
X[:, 1] = rng.standard_normal(2 * n) * 0.05
labels = np.repeat([0, 1], n)
fs = FeatureSet(X.astype(np.float32), labels=labels)

proj = fit_lpp(fs, k=1)
direction = proj.A[:, 0] / np.linalg.norm(proj.A[:, 0])
print("projection direction:", direction, "(expected ~ [1, 0])")

Z = transform(proj, fs).data[:, 0]
print("projected class ranges:",
      (Z[labels == 0].min(), Z[labels == 0].max()),
      (Z[labels == 1].min(), Z[labels == 1].max()))

# a blob on the wrong side of the nearest-mean boundary
m = ClassMeans(M=np.array([[1.0, 0.0], [0.0, 1.0]]))
blob0 = np.array([0.55, 0.65]) + rng.standard_normal((30, 2)) * 0.1  # class 0
blob1 = np.array([-0.3, 1.1]) + rng.standard_normal((30, 2)) * 0.1   # class 1
Zt = np.vstack([blob0, blob1])
truth = np.repeat([0, 1], 30)

ncm = np.array([p.label for p in ncm_predict(Zt, m)])
sp = np.array([p.label for p in sp_predict(Zt, m)])
print("nearest-mean accuracy:   ", (ncm == truth).mean())
print("cluster-match accuracy:  ", (sp == truth).mean())
