/**
 * Toy backbone and the two-phase fine-tuning loop.
 *
 * Phase 1 (linear probing) trains only the freshly attached classification
 * head at a high learning rate. Phase 2 fine-tunes every layer at a low
 * learning rate while progressively mixing in pseudo-labeled target
 * samples, selected classwise by confidence on a linear ramp. Batch-norm
 * running statistics stay frozen throughout; only the affine scale and
 * bias train.
 */

import * as tf from "@tensorflow/tfjs";

import { FrozenStatsBatchNorm } from "./bn";
import { Dataset, IMG_SIZE, TargetData } from "./data";
import { Rng } from "./rng";
import { selectPseudoLabels } from "./selection";

export interface FinetuneConfig {
  mode: "source-only" | "source-target";
  lp_epochs: number;
  ft_epochs: number;
  lr_lp: number;
  lr_ft: number;
  batch_size: number;
  seed: number;
  backbone: string;
}

export const DEFAULT_CONFIG: FinetuneConfig = {
  mode: "source-target",
  lp_epochs: 10,
  ft_epochs: 10,
  lr_lp: 1e-2,
  lr_ft: 1e-4,
  batch_size: 32,
  seed: 0,
  backbone: "toy",
};

export interface EpochRecord {
  epoch: number; // global epoch number (LP then FT, consecutive)
  phase: "lp" | "ft";
  learningRate: number;
  loss: number;
  selectedPerClass?: number[];
}

export interface Harness {
  model: tf.LayersModel;
  featureModel: tf.LayersModel; // up to the second-last layer
  headName: string;
  numClasses: number;
}

const HEAD_NAME = "head";
const FEATURES_NAME = "features";

export function buildToyModel(numClasses: number, seed: number): Harness {
  const input = tf.input({ shape: [IMG_SIZE, IMG_SIZE, 1] });
  let x = tf.layers
    .conv2d({
      filters: 8,
      kernelSize: 3,
      strides: 2,
      padding: "same",
      kernelInitializer: tf.initializers.glorotUniform({ seed }),
      name: "conv1",
    })
    .apply(input) as tf.SymbolicTensor;
  x = new FrozenStatsBatchNorm({ name: "bn1" }).apply(x) as tf.SymbolicTensor;
  x = tf.layers.activation({ activation: "relu" }).apply(x) as tf.SymbolicTensor;
  x = tf.layers
    .conv2d({
      filters: 16,
      kernelSize: 3,
      strides: 2,
      padding: "same",
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1 }),
      name: "conv2",
    })
    .apply(x) as tf.SymbolicTensor;
  x = tf.layers.activation({ activation: "relu" }).apply(x) as tf.SymbolicTensor;
  // flatten instead of pooling: the classes differ by where the activation
  // sits, and averaging over space would erase exactly that
  x = tf.layers.flatten().apply(x) as tf.SymbolicTensor;
  const features = tf.layers
    .dense({
      units: 32,
      activation: "relu",
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 2 }),
      name: FEATURES_NAME,
    })
    .apply(x) as tf.SymbolicTensor;
  const logits = tf.layers
    .dense({
      units: numClasses,
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 3 }),
      name: HEAD_NAME,
    })
    .apply(features) as tf.SymbolicTensor;

  const model = tf.model({ inputs: input, outputs: logits });
  const featureModel = tf.model({ inputs: input, outputs: features });
  return { model, featureModel, headName: HEAD_NAME, numClasses };
}

export function toImageTensor(images: Float32Array, n: number): tf.Tensor4D {
  // per-image standardization: raw pixels are mostly background, which
  // starves the fixed learning rates of gradient signal
  return tf.tidy(() => {
    const x = tf.tensor4d(images, [n, IMG_SIZE, IMG_SIZE, 1]);
    const mean = x.mean([1, 2, 3], true);
    const centered = x.sub(mean);
    const std = centered.square().mean([1, 2, 3], true).sqrt();
    return centered.div(std.add(1e-6));
  }) as tf.Tensor4D;
}

function layerVars(layers: tf.layers.Layer[]): tf.Variable[] {
  const vars: tf.Variable[] = [];
  for (const layer of layers) {
    for (const w of layer.trainableWeights) {
      vars.push((w as unknown as { val: tf.Variable }).val);
    }
  }
  return vars;
}

function trainOneEpoch(
  harness: Harness,
  vars: tf.Variable[],
  optimizer: tf.Optimizer,
  images: Float32Array,
  labels: number[],
  batchSize: number,
  rng: Rng,
): number {
  const n = labels.length;
  const order = rng.permutation(n);
  let lossSum = 0;
  let batches = 0;
  for (let start = 0; start < n; start += batchSize) {
    const idx = order.slice(start, Math.min(n, start + batchSize));
    const batchImages = new Float32Array(idx.length * IMG_SIZE * IMG_SIZE);
    const batchLabels: number[] = [];
    idx.forEach((i, j) => {
      batchImages.set(
        images.subarray(i * IMG_SIZE * IMG_SIZE, (i + 1) * IMG_SIZE * IMG_SIZE),
        j * IMG_SIZE * IMG_SIZE,
      );
      batchLabels.push(labels[i]);
    });
    const xs = toImageTensor(batchImages, idx.length);
    const ys = tf.oneHot(tf.tensor1d(batchLabels, "int32"), harness.numClasses);
    const lossVal = optimizer.minimize(
      () => {
        const logits = harness.model.apply(xs, { training: true }) as tf.Tensor;
        return tf.losses.softmaxCrossEntropy(ys, logits) as tf.Scalar;
      },
      true,
      vars,
    );
    lossSum += (lossVal as tf.Scalar).dataSync()[0];
    (lossVal as tf.Scalar).dispose();
    xs.dispose();
    ys.dispose();
    batches++;
  }
  return lossSum / Math.max(1, batches);
}

export function predictWithConfidence(
  harness: Harness,
  images: Float32Array,
  n: number,
): { labels: number[]; confidences: number[] } {
  return tf.tidy(() => {
    const xs = toImageTensor(images, n);
    const logits = harness.model.predict(xs) as tf.Tensor2D;
    const probs = tf.softmax(logits);
    const labels = Array.from(probs.argMax(1).dataSync()).map(Number);
    const confidences = Array.from(probs.max(1).dataSync()).map(Number);
    return { labels, confidences };
  });
}

export function lpPhase(
  harness: Harness,
  source: Dataset,
  cfg: FinetuneConfig,
): EpochRecord[] {
  if (source.labels.length === 0) {
    throw new Error("no training data");
  }
  const head = harness.model.getLayer(harness.headName);
  const vars = layerVars([head]);
  const optimizer = tf.train.momentum(cfg.lr_lp, 0.9);
  const rng = new Rng(cfg.seed + 1);
  const records: EpochRecord[] = [];
  for (let e = 1; e <= cfg.lp_epochs; e++) {
    const loss = trainOneEpoch(
      harness, vars, optimizer, source.images, source.labels, cfg.batch_size, rng,
    );
    records.push({ epoch: e, phase: "lp", learningRate: cfg.lr_lp, loss });
  }
  optimizer.dispose();
  return records;
}

export function ftPhase(
  harness: Harness,
  source: Dataset,
  target: TargetData | null,
  cfg: FinetuneConfig,
): EpochRecord[] {
  const vars = layerVars(harness.model.layers);
  const optimizer = tf.train.momentum(cfg.lr_ft, 0.9);
  const rng = new Rng(cfg.seed + 2);
  const records: EpochRecord[] = [];
  for (let e = 1; e <= cfg.ft_epochs; e++) {
    let images = source.images;
    let labels = source.labels;
    let selectedPerClass: number[] | undefined;
    if (cfg.mode === "source-target") {
      if (target === null) {
        throw new Error("source-target mode needs target data");
      }
      const tgt = target.get();
      const preds = predictWithConfidence(harness, tgt.images, tgt.labels.length);
      const sel = selectPseudoLabels(
        preds.labels, preds.confidences, e, cfg.ft_epochs, harness.numClasses,
      );
      selectedPerClass = new Array(harness.numClasses).fill(0);
      sel.labels.forEach((c) => selectedPerClass![c]++);

      const px = IMG_SIZE * IMG_SIZE;
      images = new Float32Array((source.labels.length + sel.indices.length) * px);
      images.set(source.images, 0);
      labels = source.labels.slice();
      sel.indices.forEach((i, j) => {
        images.set(
          tgt.images.subarray(i * px, (i + 1) * px),
          (source.labels.length + j) * px,
        );
        labels.push(sel.labels[j]);
      });
    }
    const loss = trainOneEpoch(
      harness, vars, optimizer, images, labels, cfg.batch_size, rng,
    );
    records.push({
      epoch: cfg.lp_epochs + e,
      phase: "ft",
      learningRate: cfg.lr_ft,
      loss,
      selectedPerClass,
    });
  }
  optimizer.dispose();
  return records;
}

export function extractFeatures(
  harness: Harness,
  images: Float32Array,
  n: number,
): { data: Float32Array; rows: number; cols: number } {
  return tf.tidy(() => {
    const xs = toImageTensor(images, n);
    const feats = harness.featureModel.predict(xs) as tf.Tensor2D;
    return {
      data: new Float32Array(feats.dataSync()),
      rows: feats.shape[0],
      cols: feats.shape[1],
    };
  });
}

/** concatenated copy of every weight outside the head, for freeze checks */
export function nonHeadWeightSnapshot(harness: Harness): Float32Array {
  const parts: Float32Array[] = [];
  for (const layer of harness.model.layers) {
    if (layer.name === harness.headName) {
      continue;
    }
    for (const w of layer.weights) {
      parts.push(new Float32Array(w.read().dataSync()));
    }
  }
  const total = parts.reduce((s, p) => s + p.length, 0);
  const out = new Float32Array(total);
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}

/** (mu, sigma) of every frozen-stats BN layer, concatenated */
export function bnStatsSnapshot(harness: Harness): Float32Array {
  const parts: Float32Array[] = [];
  for (const layer of harness.model.layers) {
    if (layer instanceof FrozenStatsBatchNorm) {
      parts.push(new Float32Array(layer.movingMean.read().dataSync()));
      parts.push(new Float32Array(layer.movingStd.read().dataSync()));
    }
  }
  const total = parts.reduce((s, p) => s + p.length, 0);
  const out = new Float32Array(total);
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}

/** (gamma, beta) of every frozen-stats BN layer, concatenated */
export function bnAffineSnapshot(harness: Harness): Float32Array {
  const parts: Float32Array[] = [];
  for (const layer of harness.model.layers) {
    if (layer instanceof FrozenStatsBatchNorm) {
      parts.push(new Float32Array(layer.gamma.read().dataSync()));
      parts.push(new Float32Array(layer.beta.read().dataSync()));
    }
  }
  const total = parts.reduce((s, p) => s + p.length, 0);
  const out = new Float32Array(total);
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}
