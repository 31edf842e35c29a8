"""Subspace-based unsupervised domain adaptation with selective pseudo-labeling."""

from .classify import (
    ClassMeans,
    KMeansResult,
    Prediction,
    class_means,
    combine,
    hungarian,
    kmeans,
    ncm_predict,
    sp_predict,
)
from .feature_store import (
    FeatureSet,
    LabelVector,
    gen_synth,
    read_fvec,
    read_labels,
    write_fvec,
    write_labels,
)
from .pipeline import AdaptConfig, RunReport, accuracy, adapt, eval_ncm_baseline
from .selection import PseudoLabelSet, SelectionSchedule, ramp_counts, select
from .subspace import AffinityGraph, Projection, build_affinity, fit_lpp, transform

__version__ = "0.1.0"
