/**
 * Datasets for the harness: a seeded synthetic image generator for tests
 * and an image-folder loader (one subdirectory per class) for real data.
 */

import * as fs from "fs";
import * as path from "path";
import { PNG } from "pngjs";

import { Rng } from "./rng";

export const IMG_SIZE = 32;

export interface Dataset {
  images: Float32Array; // n * 32 * 32, grayscale in [0, 1]
  labels: number[];
  numClasses: number;
}

export class TargetData {
  /** counts every access so tests can assert source-only mode never reads it */
  reads = 0;
  constructor(private readonly dataset: Dataset) {}

  get(): Dataset {
    this.reads++;
    return this.dataset;
  }

  get size(): number {
    return this.dataset.labels.length;
  }
}

/** class c draws a gaussian bump at a class-specific grid position */
function renderBump(
  out: Float32Array,
  offset: number,
  cx: number,
  cy: number,
  amplitude: number,
  rng: Rng,
): void {
  for (let y = 0; y < IMG_SIZE; y++) {
    for (let x = 0; x < IMG_SIZE; x++) {
      const d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const v = amplitude * Math.exp(-d2 / 18) + 0.08 * rng.gaussian();
      out[offset + y * IMG_SIZE + x] = Math.min(1, Math.max(0, v));
    }
  }
}

export function genSyntheticImages(
  seed: number,
  nPerClass: number,
  numClasses: number,
  domain: "source" | "target",
): Dataset {
  const rng = new Rng(seed + (domain === "target" ? 7919 : 0));
  const n = nPerClass * numClasses;
  const images = new Float32Array(n * IMG_SIZE * IMG_SIZE);
  const labels: number[] = [];
  // the target domain shifts the bump and dims it: same classes, new style
  const dx = domain === "target" ? 2.5 : 0;
  const dy = domain === "target" ? 1.5 : 0;
  const amplitude = domain === "target" ? 0.75 : 1.0;
  let i = 0;
  for (let c = 0; c < numClasses; c++) {
    const cx = 8 + (c % 3) * 8 + dx;
    const cy = 8 + Math.floor(c / 3) * 8 + dy;
    for (let s = 0; s < nPerClass; s++) {
      renderBump(
        images,
        i * IMG_SIZE * IMG_SIZE,
        cx + rng.gaussian() * 0.8,
        cy + rng.gaussian() * 0.8,
        amplitude,
        rng,
      );
      labels.push(c);
      i++;
    }
  }
  return { images, labels, numClasses };
}

/** nearest-neighbor resample of a decoded PNG to 32x32 grayscale */
function toGray32(png: PNG): Float32Array {
  const out = new Float32Array(IMG_SIZE * IMG_SIZE);
  for (let y = 0; y < IMG_SIZE; y++) {
    for (let x = 0; x < IMG_SIZE; x++) {
      const sx = Math.min(png.width - 1, Math.floor((x * png.width) / IMG_SIZE));
      const sy = Math.min(png.height - 1, Math.floor((y * png.height) / IMG_SIZE));
      const p = (sy * png.width + sx) * 4;
      const gray = (png.data[p] + png.data[p + 1] + png.data[p + 2]) / (3 * 255);
      out[y * IMG_SIZE + x] = gray;
    }
  }
  return out;
}

export function loadImageFolder(root: string): Dataset {
  const classDirs = fs
    .readdirSync(root, { withFileTypes: true })
    .filter((e) => e.isDirectory())
    .map((e) => e.name)
    .sort();
  if (classDirs.length < 2) {
    throw new Error(`${root}: need at least 2 class subdirectories`);
  }
  const perImage: Float32Array[] = [];
  const labels: number[] = [];
  classDirs.forEach((dir, c) => {
    const files = fs.readdirSync(path.join(root, dir)).filter((f) => f.endsWith(".png")).sort();
    for (const f of files) {
      const png = PNG.sync.read(fs.readFileSync(path.join(root, dir, f)));
      perImage.push(toGray32(png));
      labels.push(c);
    }
  });
  if (labels.length === 0) {
    throw new Error(`${root}: no .png files found`);
  }
  const images = new Float32Array(labels.length * IMG_SIZE * IMG_SIZE);
  perImage.forEach((img, i) => images.set(img, i * IMG_SIZE * IMG_SIZE));
  return { images, labels, numClasses: classDirs.length };
}
