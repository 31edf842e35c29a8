/**
 * Acceptance suite. Each test covers one acceptance criterion at its stated
 * tolerance and prints a single pass line.
 */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";
import { afterAll, describe, expect, test } from "vitest";

import { BNLayerState, bnForward } from "../src/bn";
import { genSyntheticImages, TargetData } from "../src/data";
import { readFvec, readLabels } from "../src/fvec";
import { run } from "../src/main";
import {
  bnAffineSnapshot,
  bnStatsSnapshot,
  buildToyModel,
  DEFAULT_CONFIG,
  ftPhase,
  lpPhase,
  nonHeadWeightSnapshot,
} from "../src/model";
import { rampCounts, selectPseudoLabels } from "../src/selection";

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "acceptance-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

function report(name: string): void {
  console.log(`ACCEPTANCE ${name}: PASS`);
}

describe("acceptance", () => {
  test("bn-contract: stats frozen through 5 training steps, forward matches hand rule", () => {
    // 160 samples at batch size 32 is exactly 5 optimizer steps
    const source = genSyntheticImages(0, 40, 4, "source");
    const harness = buildToyModel(4, 0);
    const statsBefore = bnStatsSnapshot(harness);
    const affineBefore = bnAffineSnapshot(harness);
    ftPhase(harness, source, null, { ...DEFAULT_CONFIG, mode: "source-only", ft_epochs: 1 });
    expect(bnStatsSnapshot(harness)).toEqual(statsBefore);
    expect(bnAffineSnapshot(harness)).not.toEqual(affineBefore);

    const state: BNLayerState = {
      gamma: new Float32Array([2]),
      beta: new Float32Array([1]),
      mu: new Float32Array([3]),
      sigma: new Float32Array([1]),
      epsilon: 0,
    };
    const y = bnForward(tf.tensor2d([[5]]), state).dataSync()[0];
    expect(Math.abs(y - 5)).toBeLessThan(1e-6);
    report("bn-contract");
  });

  test("lp-freeze: non-head parameters unchanged across the LP phase", () => {
    const source = genSyntheticImages(0, 20, 4, "source");
    const harness = buildToyModel(4, 0);
    const before = nonHeadWeightSnapshot(harness);
    lpPhase(harness, source, DEFAULT_CONFIG);
    expect(nonHeadWeightSnapshot(harness)).toEqual(before);
    report("lp-freeze");
  });

  test("selection-equality: counts and indices match the adaptation library exactly", () => {
    const golden = JSON.parse(
      fs.readFileSync(path.join(__dirname, "fixtures", "selection_golden.json"), "utf-8"),
    );
    for (const epoch of golden.epochs) {
      const counts = rampCounts(
        golden.labels, epoch.epoch, golden.epochs_total, golden.num_classes,
      );
      expect(counts).toEqual(epoch.counts_per_class);
      const sel = selectPseudoLabels(
        golden.labels, golden.confidences, epoch.epoch, golden.epochs_total, golden.num_classes,
      );
      expect(sel.indices).toEqual(epoch.selected_indices);
    }
    report("selection-equality");
  });

  test(
    "end-to-end-toy: LP-FT, export, adapt; target accuracy > 1/C + 0.1",
    { timeout: 300_000 },
    async () => {
      const started = Date.now();
      const prefix = path.join(tmp, "toy");
      const code = await run(["--synth", "--out-prefix", prefix]);
      expect(code).toBe(0);

      // the exported files honor the shared FVEC contract
      const feats = readFvec(`${prefix}_target.fvec`);
      expect(feats.rows).toBe(160);
      expect(feats.cols).toBe(32);
      const inspect = spawnSync(
        "python3", ["-m", "splda", "inspect", `${prefix}_target.fvec`],
        { encoding: "utf-8" },
      );
      expect(inspect.status).toBe(0);
      expect(inspect.stdout).toContain("n=160");
      expect(inspect.stdout).toContain("d=32");

      const adapt = spawnSync(
        "python3",
        [
          "-m", "splda", "adapt",
          "--source", `${prefix}_source.fvec`,
          "--source-labels", `${prefix}_source.labels`,
          "--target", `${prefix}_target.fvec`,
          "--target-labels", `${prefix}_target.labels`,
          "--out", path.join(tmp, "pred.labels"),
          "--report", path.join(tmp, "report.json"),
        ],
        { encoding: "utf-8" },
      );
      expect(adapt.status).toBe(0);
      const match = adapt.stdout.trim().split("\n").pop()!.match(/^accuracy=(\d\.\d{4})$/);
      expect(match).not.toBeNull();
      const accuracy = Number(match![1]);
      const numClasses = 4;
      expect(accuracy).toBeGreaterThan(1 / numClasses + 0.1);

      // the predictions file lines up with the exported target set
      expect(readLabels(path.join(tmp, "pred.labels"))).toHaveLength(160);

      const elapsed = (Date.now() - started) / 1000;
      expect(elapsed).toBeLessThan(300);
      report("end-to-end-toy");
    },
  );
});
