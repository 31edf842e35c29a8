"""FVEC round trips and the label file format.

The FVEC layout is 16 bytes of header (magic SPLF, version, n, d) followed
by float32 values row-major, everything little-endian. This script writes
the documented 1x2 example, shows the raw bytes, and round-trips a random
matrix bit-exactly.
"""

import tempfile
from pathlib import Path

import numpy as np

from splda import FeatureSet, read_fvec, read_labels, write_fvec, write_labels

workdir = Path(tempfile.mkdtemp())

# the canonical tiny example: [[1.0, 2.0]]
tiny = workdir / "tiny.fvec"
write_fvec(FeatureSet(np.array([[1.0, 2.0]], dtype=np.float32)), tiny)
print("tiny.fvec bytes:", tiny.read_bytes().hex(" "))

# round trip is bit-exact
rng = np.random.default_rng(0)
M = rng.standard_normal((7, 3)).astype(np.float32)
path = workdir / "random.fvec"
write_fvec(FeatureSet(M), path)
back = read_fvec(path)
print("round trip bit-exact:", np.array_equal(back.data, M))

# labels travel separately as plain text
lpath = workdir / "random.labels"
write_labels(np.array([0, 2, 1, 1, 0, 2, 0]), lpath)
labels = read_labels(lpath)
print("labels:", labels.values, "num_classes:", labels.num_classes)
