"""Command-line interface: adapt, baseline, gen-synth, inspect.

Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import feature_store, pipeline
from .errors import SpldaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splda",
        description="Subspace-based unsupervised domain adaptation "
        "with selective pseudo-labeling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_adapt = sub.add_parser("adapt", help="run the adaptation loop on FVEC files")
    p_adapt.add_argument("--source", required=True, help="source features (.fvec)")
    p_adapt.add_argument("--source-labels", required=True, help="source label file")
    p_adapt.add_argument("--target", required=True, help="target features (.fvec)")
    p_adapt.add_argument("--target-labels", help="target labels (evaluation only)")
    p_adapt.add_argument("--dim", type=int, help="subspace dimension (default: #classes)")
    p_adapt.add_argument("--iters", type=int, default=10, help="iterations (default 10)")
    p_adapt.add_argument("--rho", type=float, default=1e-3, help="regularizer")
    p_adapt.add_argument("--out", required=True, help="predicted label file to write")
    p_adapt.add_argument("--report", required=True, help="JSON report file to write")

    p_base = sub.add_parser("baseline", help="nearest-class-mean accuracy, no adaptation")
    p_base.add_argument("--source", required=True)
    p_base.add_argument("--source-labels", required=True)
    p_base.add_argument("--target", required=True)
    p_base.add_argument("--target-labels", required=True)

    p_gen = sub.add_parser("gen-synth", help="generate a synthetic source/target pair")
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--classes", type=int, default=5)
    p_gen.add_argument("--per-class", type=int, default=50)
    p_gen.add_argument("--dim", type=int, default=64)
    p_gen.add_argument("--shift", type=float, default=2.0)
    p_gen.add_argument("--rotation", type=float, default=0.5)
    p_gen.add_argument("--out-prefix", required=True)

    p_ins = sub.add_parser("inspect", help="print summary stats of an FVEC file")
    p_ins.add_argument("path", help="path to a .fvec file")

    return parser


def _cmd_adapt(args, parser) -> int:
    if args.dim is not None and args.dim < 1:
        parser.error("--dim must be >= 1")
    if args.iters < 1:
        parser.error("--iters must be >= 1")
    if args.rho < 0:
        parser.error("--rho must be >= 0")
    source = feature_store.read_fvec(args.source, domain="source")
    source.labels = feature_store.read_labels(args.source_labels).values
    source = feature_store.FeatureSet(source.data, "source", source.labels)
    target = feature_store.read_fvec(args.target, domain="target")
    if args.target_labels:
        target = feature_store.FeatureSet(
            target.data, "target", feature_store.read_labels(args.target_labels).values
        )
    cfg = pipeline.AdaptConfig(iters=args.iters, dim=args.dim, rho=args.rho)
    predictions, report = pipeline.adapt(source, target, cfg)
    feature_store.write_labels(predictions, args.out)
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
    if report.final_accuracy is not None:
        print(f"accuracy={report.final_accuracy:.4f}")
    return 0


def _cmd_baseline(args) -> int:
    source = feature_store.read_fvec(args.source, domain="source")
    source = feature_store.FeatureSet(
        source.data, "source", feature_store.read_labels(args.source_labels).values
    )
    target = feature_store.read_fvec(args.target, domain="target")
    target = feature_store.FeatureSet(
        target.data, "target", feature_store.read_labels(args.target_labels).values
    )
    acc = pipeline.eval_ncm_baseline(source, target)
    print(f"accuracy={acc:.4f}")
    return 0


def _cmd_gen_synth(args, parser) -> int:
    if args.classes < 2:
        parser.error("--classes must be >= 2")
    if args.per_class < 2:
        parser.error("--per-class must be >= 2")
    if args.dim < 2:
        parser.error("--dim must be >= 2")
    source, target = feature_store.gen_synth(
        seed=args.seed,
        n_per_class=args.per_class,
        num_classes=args.classes,
        dim=args.dim,
        shift=args.shift,
        rotation=args.rotation,
    )
    prefix = args.out_prefix
    feature_store.write_fvec(source, f"{prefix}_source.fvec")
    feature_store.write_labels(source.labels, f"{prefix}_source.labels")
    feature_store.write_fvec(target, f"{prefix}_target.fvec")
    feature_store.write_labels(target.labels, f"{prefix}_target.labels")
    return 0


def _cmd_inspect(args) -> int:
    data = feature_store._read_fvec_raw(args.path)
    n, d = data.shape
    print(f"n={n} d={d}")
    print(
        f"min={np.nanmin(data):.6g} max={np.nanmax(data):.6g} "
        f"mean={np.nanmean(data):.6g} nan_count={int(np.isnan(data).sum())}"
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "adapt":
            return _cmd_adapt(args, parser)
        if args.command == "baseline":
            return _cmd_baseline(args)
        if args.command == "gen-synth":
            return _cmd_gen_synth(args, parser)
        if args.command == "inspect":
            return _cmd_inspect(args)
    except SpldaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
