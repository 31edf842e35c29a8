"""Feature matrices, label files and the FVEC on-disk format.

FVEC layout (little-endian): 4 magic bytes ``SPLF``, u32 version (1),
u32 n_rows, u32 n_cols, then n_rows*n_cols float32 values row-major.
Labels travel separately as plain text, one non-negative integer per line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagic,
    BadParams,
    DimMismatch,
    IoError,
    NegativeLabel,
    NonFinite,
    ParseError,
)

FVEC_MAGIC = b"SPLF"
FVEC_VERSION = 1
_HEADER = struct.Struct("<4sIII")


@dataclass
class FeatureSet:
    """An n x d float32 matrix with a domain tag and optional labels."""

    data: np.ndarray
    domain: str = "source"
    labels: np.ndarray | None = None

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 2:
            raise BadParams("feature data must be a 2-D matrix")
        n, d = self.data.shape
        if n < 1 or d < 1:
            raise BadParams(f"need n >= 1 and d >= 1, got shape {n}x{d}")
        if self.domain not in ("source", "target"):
            raise BadParams(f"domain must be 'source' or 'target', got {self.domain!r}")
        if not np.isfinite(self.data).all():
            raise NonFinite("feature matrix contains NaN/Inf")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (n,):
                raise DimMismatch(
                    f"labels length {self.labels.shape} does not match n={n}"
                )
            if (self.labels < 0).any():
                raise NegativeLabel("labels must be non-negative")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass
class LabelVector:
    """Integer class ids in 0..num_classes-1."""

    values: np.ndarray
    num_classes: int = field(default=0)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim != 1:
            raise BadParams("label values must be a 1-D vector")
        if self.values.size and (self.values < 0).any():
            raise NegativeLabel("labels must be non-negative")
        if self.num_classes == 0:
            self.num_classes = int(self.values.max()) + 1 if self.values.size else 0
        elif self.values.size and int(self.values.max()) >= self.num_classes:
            raise BadParams(
                f"label {int(self.values.max())} >= num_classes={self.num_classes}"
            )

    def __len__(self) -> int:
        return self.values.size


def write_fvec(fs: FeatureSet, path) -> None:
    """Write a FeatureSet to an FVEC file."""
    n, d = fs.data.shape
    header = _HEADER.pack(FVEC_MAGIC, FVEC_VERSION, n, d)
    payload = np.ascontiguousarray(fs.data, dtype="<f4").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _read_fvec_raw(path) -> np.ndarray:
    """Read an FVEC file without the finiteness check (used by inspect)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size or raw[:4] != FVEC_MAGIC:
        raise BadMagic(f"{path}: not an FVEC file")
    magic, version, n, d = _HEADER.unpack_from(raw)
    if version != FVEC_VERSION:
        raise BadMagic(f"{path}: unsupported FVEC version {version}")
    expected = n * d * 4
    if len(raw) - _HEADER.size != expected:
        raise DimMismatch(
            f"{path}: header declares {n}x{d} ({expected} bytes) "
            f"but payload has {len(raw) - _HEADER.size} bytes"
        )
    if n < 1 or d < 1:
        raise DimMismatch(f"{path}: degenerate shape {n}x{d}")
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(n, d)
    return data.copy()


def read_fvec(path, domain: str = "source") -> FeatureSet:
    """Read an FVEC file; the payload must be finite."""
    data = _read_fvec_raw(path)
    if not np.isfinite(data).all():
        raise NonFinite(f"{path}: payload contains NaN/Inf")
    return FeatureSet(data=data, domain=domain)


def read_labels(path, num_classes: int = 0) -> LabelVector:
    """Parse a label file (one integer per line).

    num_classes defaults to 1 + max(value); pass a positive value to override.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(lines, start=1):
        tok = line.strip()
        if not tok:
            continue
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(
                f"{path}: line {lineno}: not an integer: {tok!r}", line=lineno
            ) from None
        if v < 0:
            raise NegativeLabel(f"{path}: line {lineno}: negative label {v}", line=lineno)
        values.append(v)
    return LabelVector(np.array(values, dtype=np.int64), num_classes=num_classes)


def write_labels(labels, path) -> None:
    """Write labels as one integer per line (accepts LabelVector or array)."""
    values = labels.values if isinstance(labels, LabelVector) else np.asarray(labels)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for v in values:
                fh.write(f"{int(v)}\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def gen_synth(
    seed: int,
    n_per_class: int,
    num_classes: int,
    dim: int,
    shift: float = 0.0,
    rotation: float = 0.0,
) -> tuple[FeatureSet, FeatureSet]:
    """Generate a synthetic source/target pair of Gaussian class clusters.

    Source samples are isotropic unit-variance clusters around centers kept
    at pairwise distance >= 6 (rejection sampling). Centers sit on a ring in
    the first two coordinates (plus small jitter elsewhere) so that the two
    difficulty knobs actually bite: `rotation` rotates the target draws in
    that plane and `shift` translates them along coordinate 0. The target
    FeatureSet carries its true labels for evaluation only.
    """
    if num_classes < 2 or dim < 2 or n_per_class < 2:
        raise BadParams(
            f"need C >= 2, d >= 2, n_per_class >= 2; "
            f"got C={num_classes}, d={dim}, n={n_per_class}"
        )
    rng = np.random.default_rng(seed)

    centers = []
    attempts = 0
    while len(centers) < num_classes:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        radius = rng.uniform(8.0, 12.0)
        cand = np.zeros(dim)
        cand[0] = radius * np.cos(theta)
        cand[1] = radius * np.sin(theta)
        cand[2:] = rng.uniform(-1.0, 1.0, dim - 2)
        if all(np.linalg.norm(cand - c) >= 6.0 for c in centers):
            centers.append(cand)
        attempts += 1
        if attempts > 10000 * num_classes:
            raise BadParams("could not place well-separated centers; C too large?")
    centers = np.stack(centers)

    def draw():
        feats = np.empty((num_classes * n_per_class, dim))
        labels = np.empty(num_classes * n_per_class, dtype=np.int64)
        for c in range(num_classes):
            sl = slice(c * n_per_class, (c + 1) * n_per_class)
            feats[sl] = centers[c] + rng.standard_normal((n_per_class, dim))
            labels[sl] = c
        return feats, labels

    src_x, src_y = draw()
    tgt_x, tgt_y = draw()

    cos_r, sin_r = np.cos(rotation), np.sin(rotation)
    x0, x1 = tgt_x[:, 0].copy(), tgt_x[:, 1].copy()
    tgt_x[:, 0] = cos_r * x0 - sin_r * x1
    tgt_x[:, 1] = sin_r * x0 + cos_r * x1
    tgt_x[:, 0] += shift

    source = FeatureSet(src_x.astype(np.float32), domain="source", labels=src_y)
    target = FeatureSet(tgt_x.astype(np.float32), domain="target", labels=tgt_y)
    return source, target
