/**
 * Batch normalization with frozen statistics.
 *
 * The layer always applies y = gamma * (x - mu) / (sigma + eps) + beta
 * with the stored running mean and standard deviation, in training and
 * inference alike. gamma and beta are trainable; mu and sigma are plain
 * non-trainable weights that no optimizer ever touches.
 */

import * as tf from "@tensorflow/tfjs";

export interface BNLayerState {
  gamma: Float32Array;
  beta: Float32Array;
  mu: Float32Array;
  sigma: Float32Array;
  epsilon: number;
}

export function validateState(state: BNLayerState): void {
  const n = state.gamma.length;
  for (const key of ["beta", "mu", "sigma"] as const) {
    if (state[key].length !== n) {
      throw new Error(`channel mismatch: ${key} has ${state[key].length}, gamma has ${n}`);
    }
  }
  for (let c = 0; c < n; c++) {
    if (!(state.sigma[c] + state.epsilon > 0)) {
      throw new Error(`sigma + eps must be positive in channel ${c}`);
    }
  }
}

/** Elementwise forward rule on a [batch, channels] array (pure reference). */
export function bnForward(x: tf.Tensor, state: BNLayerState): tf.Tensor {
  validateState(state);
  const channels = state.gamma.length;
  if (x.shape[x.shape.length - 1] !== channels) {
    throw new Error(
      `input has ${x.shape[x.shape.length - 1]} channels, state has ${channels}`,
    );
  }
  return tf.tidy(() => {
    const gamma = tf.tensor1d(state.gamma);
    const beta = tf.tensor1d(state.beta);
    const mu = tf.tensor1d(state.mu);
    const sigma = tf.tensor1d(state.sigma);
    return x.sub(mu).div(sigma.add(state.epsilon)).mul(gamma).add(beta);
  });
}

export class FrozenStatsBatchNorm extends tf.layers.Layer {
  static className = "FrozenStatsBatchNorm";
  readonly epsilon: number;
  gamma!: tf.LayerVariable;
  beta!: tf.LayerVariable;
  movingMean!: tf.LayerVariable;
  movingStd!: tf.LayerVariable;

  constructor(config?: { epsilon?: number; name?: string }) {
    super({ name: config?.name });
    this.epsilon = config?.epsilon ?? 1e-3;
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    const shape = inputShape as tf.Shape;
    const channels = shape[shape.length - 1] as number;
    this.gamma = this.addWeight("gamma", [channels], "float32", tf.initializers.ones());
    this.beta = this.addWeight("beta", [channels], "float32", tf.initializers.zeros());
    this.movingMean = this.addWeight(
      "moving_mean", [channels], "float32", tf.initializers.zeros(), undefined, false,
    );
    this.movingStd = this.addWeight(
      "moving_std", [channels], "float32", tf.initializers.ones(), undefined, false,
    );
    this.built = true;
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = Array.isArray(inputs) ? inputs[0] : inputs;
      return x
        .sub(this.movingMean.read())
        .div(this.movingStd.read().add(this.epsilon))
        .mul(this.gamma.read())
        .add(this.beta.read());
    });
  }

  override computeOutputShape(inputShape: tf.Shape | tf.Shape[]): tf.Shape {
    return inputShape as tf.Shape;
  }

  override getConfig(): tf.serialization.ConfigDict {
    return { ...super.getConfig(), epsilon: this.epsilon };
  }
}

tf.serialization.registerClass(FrozenStatsBatchNorm);
