/**
 * FVEC interchange format, shared with the adaptation library.
 *
 * Little-endian: magic "SPLF", u32 version = 1, u32 n_rows, u32 n_cols,
 * then n_rows * n_cols float32 values row-major. Labels are a separate
 * text file, one non-negative integer per line.
 */

import * as fs from "fs";

const MAGIC = Buffer.from("SPLF", "ascii");
const VERSION = 1;

export function writeFvec(data: Float32Array, rows: number, cols: number, path: string): void {
  if (data.length !== rows * cols) {
    throw new Error(`payload length ${data.length} != ${rows}x${cols}`);
  }
  const header = Buffer.alloc(16);
  MAGIC.copy(header, 0);
  header.writeUInt32LE(VERSION, 4);
  header.writeUInt32LE(rows, 8);
  header.writeUInt32LE(cols, 12);
  const payload = Buffer.alloc(rows * cols * 4);
  for (let i = 0; i < data.length; i++) {
    payload.writeFloatLE(data[i], i * 4);
  }
  fs.writeFileSync(path, Buffer.concat([header, payload]));
}

export function readFvec(path: string): { rows: number; cols: number; data: Float32Array } {
  const raw = fs.readFileSync(path);
  if (raw.length < 16 || !raw.subarray(0, 4).equals(MAGIC)) {
    throw new Error(`${path}: not an FVEC file`);
  }
  const version = raw.readUInt32LE(4);
  if (version !== VERSION) {
    throw new Error(`${path}: unsupported FVEC version ${version}`);
  }
  const rows = raw.readUInt32LE(8);
  const cols = raw.readUInt32LE(12);
  if (raw.length - 16 !== rows * cols * 4) {
    throw new Error(`${path}: declared ${rows}x${cols} but payload is ${raw.length - 16} bytes`);
  }
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = raw.readFloatLE(16 + i * 4);
  }
  return { rows, cols, data };
}

export function writeLabels(labels: ArrayLike<number>, path: string): void {
  let out = "";
  for (let i = 0; i < labels.length; i++) {
    out += `${labels[i]}\n`;
  }
  fs.writeFileSync(path, out, "utf-8");
}

export function readLabels(path: string): number[] {
  return fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line, i) => {
      const v = Number(line.trim());
      if (!Number.isInteger(v) || v < 0) {
        throw new Error(`${path}: line ${i + 1}: bad label ${line}`);
      }
      return v;
    });
}
