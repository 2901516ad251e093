/**
 * Deterministic sentence encoder.
 *
 * Each token scatters a few signed +/-1 contributions into the vector, with
 * positions and signs drawn from sha256 of the token (feature hashing). The
 * result is reproducible bit-for-bit across runs and platforms, identical
 * sentences always encode identically, and token overlap shows up as cosine
 * similarity. Vectors are emitted raw; the engine normalizes inside its
 * cosine.
 *
 * This is the offline backend behind every registry entry. Swapping in a
 * weights-based encoder means implementing `SentenceEncoder` and wiring it to
 * a registry name; the file format and everything downstream stay unchanged.
 */

import { createHash } from "node:crypto";

import { tokenize } from "./tokenize.js";

export const ENCODER_BACKEND = "hashed-projection-v1";

const STREAMS = 4;

export interface SentenceEncoder {
  readonly dim: number;
  readonly backend: string;
  encode(sentence: string): number[];
}

/** Positions and signs for one token, from independent digest streams. */
function tokenSlots(token: string, dim: number): Array<[number, number]> {
  const slots: Array<[number, number]> = [];
  for (let stream = 0; stream < STREAMS; stream += 1) {
    const digest = createHash("sha256").update(`${stream}:${token}`).digest();
    const position = digest.readUInt32BE(0) % dim;
    const sign = (digest[4] & 1) === 1 ? 1 : -1;
    slots.push([position, sign]);
  }
  return slots;
}

export function encodeToken(token: string, dim: number): number[] {
  const vector = new Array<number>(dim).fill(0);
  for (const [position, sign] of tokenSlots(token, dim)) {
    vector[position] += sign;
  }
  return vector;
}

export function encodeSentence(sentence: string, dim: number): number[] {
  const vector = new Array<number>(dim).fill(0);
  for (const token of tokenize(sentence)) {
    for (const [position, sign] of tokenSlots(token, dim)) {
      vector[position] += sign;
    }
  }
  return vector;
}

export function hashedEncoder(dim: number): SentenceEncoder {
  return {
    dim,
    backend: ENCODER_BACKEND,
    encode: (sentence: string) => encodeSentence(sentence, dim),
  };
}
