/**
 * Token-level sentence similarities for the redundancy matrices.
 *
 * Both metrics run on the deterministic hashed token vectors:
 *  - "bertscore": greedy best-match per token in both directions, combined as
 *    F1 (precision from the first sentence's tokens, recall from the second's).
 *  - "moverscore": one minus the relaxed transport cost, taking each token to
 *    its cheapest counterpart and keeping the more expensive direction.
 *
 * Identical sentences score 1.0 under either metric; all values land in [0, 1].
 */

import { encodeToken } from "./encoder.js";
import { tokenize } from "./tokenize.js";

export const TOKEN_DIM = 256;

export const METRICS = ["bertscore", "moverscore"] as const;
export type MetricName = (typeof METRICS)[number];

function clampedCosine(u: number[], v: number[]): number {
  let dot = 0;
  let nu = 0;
  let nv = 0;
  for (let i = 0; i < u.length; i += 1) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu === 0 || nv === 0) return 0;
  const value = dot / (Math.sqrt(nu) * Math.sqrt(nv));
  return Math.min(1, Math.max(0, value));
}

function tokenVectors(tokens: string[], cache: Map<string, number[]>): number[][] {
  return tokens.map((token) => {
    let vector = cache.get(token);
    if (!vector) {
      vector = encodeToken(token, TOKEN_DIM);
      cache.set(token, vector);
    }
    return vector;
  });
}

function bestMatchMean(from: number[][], to: number[][]): number {
  let total = 0;
  for (const u of from) {
    let best = 0;
    for (const v of to) {
      const value = clampedCosine(u, v);
      if (value > best) best = value;
    }
    total += best;
  }
  return total / from.length;
}

function greedyMatchF1(a: number[][], b: number[][]): number {
  const precision = bestMatchMean(a, b);
  const recall = bestMatchMean(b, a);
  if (precision + recall === 0) return 0;
  return (2 * precision * recall) / (precision + recall);
}

function relaxedTransport(a: number[][], b: number[][]): number {
  const costOut = 1 - bestMatchMean(a, b); // mean over a of min distance
  const costIn = 1 - bestMatchMean(b, a);
  return 1 - Math.max(costOut, costIn);
}

export function sentenceSimilarity(
  metric: MetricName,
  first: string,
  second: string,
  cache: Map<string, number[]> = new Map(),
): number {
  const tokensA = tokenize(first);
  const tokensB = tokenize(second);
  if (tokensA.length === 0 || tokensB.length === 0) return 0;
  const a = tokenVectors(tokensA, cache);
  const b = tokenVectors(tokensB, cache);
  const value = metric === "bertscore" ? greedyMatchF1(a, b) : relaxedTransport(a, b);
  return Math.min(1, Math.max(0, value));
}
