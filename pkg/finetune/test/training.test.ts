import { describe, expect, test } from "vitest";

import { genSyntheticImages, TargetData } from "../src/data";
import {
  bnAffineSnapshot,
  bnStatsSnapshot,
  buildToyModel,
  DEFAULT_CONFIG,
  extractFeatures,
  FinetuneConfig,
  ftPhase,
  lpPhase,
  nonHeadWeightSnapshot,
  predictWithConfidence,
} from "../src/model";

const SMALL: FinetuneConfig = {
  ...DEFAULT_CONFIG,
  lp_epochs: 2,
  ft_epochs: 2,
  batch_size: 16,
};

describe("linear-probe phase", () => {
  test("non-head weights are bit-identical across the LP phase", () => {
    const source = genSyntheticImages(3, 8, 4, "source");
    const harness = buildToyModel(4, 3);
    const before = nonHeadWeightSnapshot(harness);
    lpPhase(harness, source, SMALL);
    const after = nonHeadWeightSnapshot(harness);
    expect(after).toEqual(before);
  });

  test("the head does move during LP", () => {
    const source = genSyntheticImages(3, 8, 4, "source");
    const harness = buildToyModel(4, 3);
    const head = harness.model.getLayer(harness.headName);
    const before = new Float32Array(head.getWeights()[0].dataSync());
    lpPhase(harness, source, SMALL);
    const after = new Float32Array(head.getWeights()[0].dataSync());
    expect(after).not.toEqual(before);
  });
});

describe("learning-rate schedule", () => {
  test("epochs 1-10 record 1e-2 and epochs 11-20 record 1e-4, exactly", () => {
    const source = genSyntheticImages(0, 4, 4, "source");
    const target = genSyntheticImages(0, 4, 4, "target");
    const harness = buildToyModel(4, 0);
    const records = [
      ...lpPhase(harness, source, DEFAULT_CONFIG),
      ...ftPhase(harness, source, new TargetData(target), DEFAULT_CONFIG),
    ];
    expect(records.map((r) => r.epoch)).toEqual(
      Array.from({ length: 20 }, (_, i) => i + 1),
    );
    for (const r of records) {
      if (r.epoch <= 10) {
        expect(r.phase).toBe("lp");
        expect(r.learningRate).toBe(1e-2);
      } else {
        expect(r.phase).toBe("ft");
        expect(r.learningRate).toBe(1e-4);
      }
    }
  });
});

describe("fine-tune phase", () => {
  test("source-only mode never touches target data", () => {
    const source = genSyntheticImages(1, 8, 4, "source");
    const target = new TargetData(genSyntheticImages(1, 8, 4, "target"));
    const harness = buildToyModel(4, 1);
    lpPhase(harness, source, SMALL);
    ftPhase(harness, source, target, { ...SMALL, mode: "source-only" });
    expect(target.reads).toBe(0);
  });

  test("selection counts ramp up and are recorded per epoch", () => {
    const source = genSyntheticImages(2, 8, 4, "source");
    const target = new TargetData(genSyntheticImages(2, 8, 4, "target"));
    const harness = buildToyModel(4, 2);
    const cfg = { ...SMALL, ft_epochs: 4 };
    lpPhase(harness, source, cfg);
    const records = ftPhase(harness, source, target, cfg);
    let prev = 0;
    for (const r of records) {
      expect(r.selectedPerClass).toBeDefined();
      const total = r.selectedPerClass!.reduce((a, b) => a + b, 0);
      expect(total).toBeGreaterThanOrEqual(prev);
      prev = total;
    }
    // the last epoch pseudo-labels the whole target set
    expect(prev).toBe(target.size);
  });

  test("bn statistics are bit-identical after full-network training steps", () => {
    const source = genSyntheticImages(4, 8, 4, "source");
    const harness = buildToyModel(4, 4);
    const statsBefore = bnStatsSnapshot(harness);
    const affineBefore = bnAffineSnapshot(harness);
    ftPhase(harness, source, null, { ...SMALL, mode: "source-only", lr_ft: 1e-2 });
    expect(bnStatsSnapshot(harness)).toEqual(statsBefore);
    expect(bnAffineSnapshot(harness)).not.toEqual(affineBefore);
  });
});

describe("determinism", () => {
  test("identical seeds give bit-identical features and predictions", () => {
    const runOnce = () => {
      const source = genSyntheticImages(5, 8, 4, "source");
      const target = genSyntheticImages(5, 8, 4, "target");
      const harness = buildToyModel(4, 5);
      lpPhase(harness, source, SMALL);
      ftPhase(harness, source, new TargetData(target), SMALL);
      return {
        feats: extractFeatures(harness, target.images, target.labels.length),
        preds: predictWithConfidence(harness, target.images, target.labels.length),
      };
    };
    const a = runOnce();
    const b = runOnce();
    expect(a.feats.data).toEqual(b.feats.data);
    expect(a.preds.labels).toEqual(b.preds.labels);
    expect(a.preds.confidences).toEqual(b.preds.confidences);
  });
});
