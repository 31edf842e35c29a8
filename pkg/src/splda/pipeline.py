"""The iterative adaptation loop: project, predict, select, refit."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import classify, selection, subspace
from .errors import BadParams, ClassMissing, EigenDegenerate, LengthMismatch
from .feature_store import FeatureSet, LabelVector


@dataclass
class AdaptConfig:
    iters: int = 10
    dim: int | None = None  # defaults to the class count
    rho: float = 1e-3
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.iters < 1:
            raise BadParams(f"iters must be >= 1, got {self.iters}")
        if self.dim is not None and self.dim < 1:
            raise BadParams(f"dim must be >= 1, got {self.dim}")
        if self.rho < 0:
            raise BadParams(f"rho must be >= 0, got {self.rho}")


@dataclass
class IterationRecord:
    t: int
    selected_per_class: list
    accuracy: float | None


@dataclass
class RunReport:
    config: dict
    iterations: list = field(default_factory=list)
    final_accuracy: float | None = None

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "iterations": [
                {
                    "t": rec.t,
                    "selected_per_class": list(map(int, rec.selected_per_class)),
                    "accuracy": rec.accuracy,
                }
                for rec in self.iterations
            ],
            "final_accuracy": self.final_accuracy,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def accuracy(pred, truth) -> float:
    """Fraction of exact label matches."""
    p = pred.values if isinstance(pred, LabelVector) else np.asarray(pred)
    t = truth.values if isinstance(truth, LabelVector) else np.asarray(truth)
    if p.size != t.size:
        raise LengthMismatch(f"length mismatch: {p.size} vs {t.size}")
    return float((p == t).mean())


def _infer_num_classes(source: FeatureSet) -> int:
    if source.labels is None:
        raise BadParams("source features must be labeled")
    num_classes = int(source.labels.max()) + 1
    for c in range(num_classes):
        if not (source.labels == c).any():
            raise ClassMissing(f"source class {c} is empty")
    if num_classes < 2:
        raise BadParams("adaptation needs at least 2 classes")
    return num_classes


def eval_ncm_baseline(source: FeatureSet, target: FeatureSet) -> float:
    """Nearest-class-mean accuracy in the original feature space."""
    if target.labels is None:
        raise BadParams("baseline evaluation needs target labels")
    if source.d != target.d:
        raise BadParams(f"dimension mismatch: {source.d} vs {target.d}")
    num_classes = _infer_num_classes(source)
    Zs = subspace.normalize_rows(source.data.astype(np.float64))
    Zt = subspace.normalize_rows(target.data.astype(np.float64))
    means = classify.class_means(Zs, source.labels, num_classes)
    preds = classify.ncm_predict(Zt, means)
    return accuracy(np.array([p.label for p in preds]), target.labels)


def adapt(
    source: FeatureSet, target: FeatureSet, cfg: AdaptConfig | None = None
) -> tuple[LabelVector, RunReport]:
    """Run the full adaptation loop and pseudo-label every target sample.

    Each iteration refits the subspace on the source plus the currently
    selected pseudo-labeled targets, classifies all targets with the
    combined nearest-mean / cluster-matching rule, and admits a linearly
    growing, classwise-balanced slice of the most confident predictions.
    Target labels, when present, are used only for per-iteration reporting.
    """
    cfg = cfg or AdaptConfig()
    if source.d != target.d:
        raise BadParams(f"dimension mismatch: {source.d} vs {target.d}")
    num_classes = _infer_num_classes(source)
    k = cfg.dim if cfg.dim is not None else num_classes
    if k > source.d:
        raise BadParams(f"subspace dim {k} exceeds feature dim {source.d}")

    report = RunReport(
        config={
            "iters": cfg.iters,
            "dim": k,
            "rho": cfg.rho,
            "temperature": cfg.temperature,
            "seed": cfg.seed,
        }
    )

    selected: selection.PseudoLabelSet | None = None
    combined = None
    for t in range(1, cfg.iters + 1):
        if selected is not None and len(selected):
            fit_data = np.vstack([source.data, target.data[selected.indices]])
            fit_labels = np.concatenate([source.labels, selected.labels])
        else:
            fit_data, fit_labels = source.data, source.labels
        fit_fs = FeatureSet(fit_data, domain="source", labels=fit_labels)

        try:
            proj = subspace.fit_lpp(fit_fs, k=k, rho=cfg.rho)
        except EigenDegenerate:
            # every class is a singleton: no graph edges, no preferred
            # direction; classify in the normalized input space instead
            proj = subspace.Projection(
                A=np.eye(source.d), eigenvalues=np.ones(source.d)
            )
        Zs = subspace.transform(proj, source).data.astype(np.float64)
        Zt = subspace.transform(proj, target).data.astype(np.float64)

        if selected is not None and len(selected):
            mean_Z = np.vstack([Zs, Zt[selected.indices]])
            mean_labels = np.concatenate([source.labels, selected.labels])
        else:
            mean_Z, mean_labels = Zs, source.labels
        means = classify.class_means(mean_Z, mean_labels, num_classes)

        ncm = classify.ncm_predict(Zt, means, temperature=cfg.temperature)
        sp = classify.sp_predict(Zt, means, temperature=cfg.temperature)
        combined = classify.combine(ncm, sp)

        selected = selection.select(
            combined, selection.SelectionSchedule(t, cfg.iters), num_classes
        )

        iter_acc = None
        if target.labels is not None:
            iter_acc = accuracy(
                np.array([p.label for p in combined]), target.labels
            )
        per_class = np.bincount(selected.labels, minlength=num_classes)
        report.iterations.append(
            IterationRecord(t=t, selected_per_class=per_class.tolist(), accuracy=iter_acc)
        )

    predictions = LabelVector(
        np.array([p.label for p in combined], dtype=np.int64), num_classes=num_classes
    )
    report.final_accuracy = report.iterations[-1].accuracy
    return predictions, report
