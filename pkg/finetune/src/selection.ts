/**
 * Progressive classwise pseudo-label selection, identical to the rule used
 * by the adaptation library: at epoch t of T, class c keeps its
 * ceil((t/T) * N_c) most confident candidates (confidence ties resolve to
 * the lower sample index). Quotas use exact integer arithmetic.
 */

export interface Selected {
  indices: number[]; // ascending
  labels: number[];
  confidences: number[];
}

function quota(nCandidates: number, t: number, T: number): number {
  if (t < 1 || t > T) {
    throw new Error(`need 1 <= t <= T, got t=${t}, T=${T}`);
  }
  return Math.min(nCandidates, Math.ceil((t * nCandidates) / T));
}

export function rampCounts(
  labels: ArrayLike<number>,
  t: number,
  T: number,
  numClasses: number,
): number[] {
  if (labels.length === 0) {
    throw new Error("no predictions to select from");
  }
  const pools = new Array<number>(numClasses).fill(0);
  for (let i = 0; i < labels.length; i++) {
    if (labels[i] >= numClasses) {
      throw new Error(`label ${labels[i]} out of range`);
    }
    pools[labels[i]]++;
  }
  return pools.map((n) => quota(n, t, T));
}

export function selectPseudoLabels(
  labels: ArrayLike<number>,
  confidences: ArrayLike<number>,
  t: number,
  T: number,
  numClasses: number,
): Selected {
  const counts = rampCounts(labels, t, T, numClasses);
  const chosen: Array<[number, number, number]> = [];
  for (let c = 0; c < numClasses; c++) {
    const candidates: Array<[number, number]> = [];
    for (let i = 0; i < labels.length; i++) {
      if (labels[i] === c) {
        candidates.push([i, confidences[i]]);
      }
    }
    candidates.sort((a, b) => (b[1] - a[1]) || (a[0] - b[0]));
    for (const [i, conf] of candidates.slice(0, counts[c])) {
      chosen.push([i, c, conf]);
    }
  }
  chosen.sort((a, b) => a[0] - b[0]);
  return {
    indices: chosen.map((x) => x[0]),
    labels: chosen.map((x) => x[1]),
    confidences: chosen.map((x) => x[2]),
  };
}
