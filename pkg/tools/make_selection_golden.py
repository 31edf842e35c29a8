"""Regenerate the golden selection fixture consumed by the finetune harness.

Writes a JSON document with a fixed prediction vector (labels +
confidences) and, for every epoch of a 10-epoch ramp, the per-class
selection counts and selected indices produced by the library's selection
rule. The harness test replays its own selection on the same predictions
and must match exactly.

Usage: python3 tools/make_selection_golden.py [out.json]
"""

import json
import sys

import numpy as np

from splda import SelectionSchedule, ramp_counts, select
from splda.classify import Prediction

NUM_CLASSES = 4
EPOCHS = 10


def main(out_path):
    rng = np.random.default_rng(1234)
    n = 57  # deliberately unbalanced pools, with one duplicate confidence
    labels = rng.integers(0, NUM_CLASSES, size=n)
    confidences = np.round(rng.random(n), 6)
    confidences[10] = confidences[3]  # exercise the index tie-break

    preds = [
        Prediction(int(l), float(c), "ncm") for l, c in zip(labels, confidences)
    ]
    epochs = []
    for e in range(1, EPOCHS + 1):
        sched = SelectionSchedule(e, EPOCHS)
        counts = ramp_counts(preds, sched, NUM_CLASSES)
        sel = select(preds, sched, NUM_CLASSES)
        epochs.append(
            {
                "epoch": e,
                "counts_per_class": counts.tolist(),
                "selected_indices": sel.indices.tolist(),
            }
        )

    doc = {
        "num_classes": NUM_CLASSES,
        "epochs_total": EPOCHS,
        "labels": labels.tolist(),
        "confidences": confidences.tolist(),
        "epochs": epochs,
    }
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "finetune/test/fixtures/selection_golden.json")
