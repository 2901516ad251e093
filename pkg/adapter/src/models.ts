/**
 * Registry of named sentence-embedding models.
 *
 * Each entry pins the output dimensionality the named model is known for, so
 * downstream files always declare the right width. In this offline build all
 * entries run on the deterministic hashed encoder; the `backend` field in the
 * emitted files records that provenance explicitly.
 */

import { ENCODER_BACKEND, hashedEncoder, type SentenceEncoder } from "./encoder.js";

export interface ModelSpec {
  name: string;
  dim: number;
}

export const MODEL_REGISTRY: readonly ModelSpec[] = [
  { name: "STSb-bert", dim: 1024 },
  { name: "STSb-roberta", dim: 1024 },
  { name: "STSb-distilbert", dim: 768 },
  { name: "USE", dim: 512 },
  { name: "Infersent", dim: 4096 },
  { name: "Elmo", dim: 1024 },
];

export function supportedModelNames(): string[] {
  return MODEL_REGISTRY.map((spec) => spec.name);
}

/** Case-insensitive lookup; unknown names raise with the supported list. */
export function resolveModel(name: string): { spec: ModelSpec; encoder: SentenceEncoder } {
  const spec = MODEL_REGISTRY.find(
    (candidate) => candidate.name.toLowerCase() === name.toLowerCase(),
  );
  if (!spec) {
    throw new Error(
      `unsupported model "${name}"; supported: ${supportedModelNames().join(", ")}`,
    );
  }
  return { spec, encoder: hashedEncoder(spec.dim) };
}

export { ENCODER_BACKEND };
