/**
 * File formats shared with the scoring engine.
 *
 * The engine is the consumer and the authority on these shapes: corpus files
 * are JSON Lines of sentence sets, embedding and similarity-matrix files are
 * one JSON object per sentence set, named by a sanitized id.
 */

import { mkdirSync, readFileSync, renameSync, writeFileSync } from "node:fs";
import { join } from "node:path";

export type Role = "document" | "reference" | "model_summary";

export interface CorpusRecord {
  id: string;
  role: Role;
  sentences: string[];
  doc_id?: string;
  system_id?: string;
  extractive?: boolean;
}

export interface EmbeddingFile {
  sentence_set_id: string;
  dim: number;
  vectors: number[][];
  /** provenance, ignored by the engine loader */
  model?: string;
  backend?: string;
}

export interface MatrixFile {
  kind: string;
  row_ids: number[];
  col_ids: number[];
  values: number[][];
  sentence_set_id: string;
  backend?: string;
}

/** Mirror of the engine's filename rule: anything outside [A-Za-z0-9._-] becomes "_". */
export function sanitizeId(id: string): string {
  const safe = id.replace(/[^A-Za-z0-9._-]/g, "_");
  return safe.length > 0 ? safe : "_";
}

export function readCorpus(path: string): CorpusRecord[] {
  const records: CorpusRecord[] = [];
  const text = readFileSync(path, "utf-8");
  let lineNumber = 0;
  for (const line of text.split("\n")) {
    lineNumber += 1;
    if (!line.trim()) continue;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (error) {
      throw new Error(`${path}:${lineNumber}: invalid JSON (${error})`);
    }
    const record = parsed as CorpusRecord;
    if (
      typeof record.id !== "string" ||
      typeof record.role !== "string" ||
      !Array.isArray(record.sentences)
    ) {
      throw new Error(`${path}:${lineNumber}: record needs id, role, and sentences`);
    }
    records.push(record);
  }
  return records;
}

/** Write JSON to its final name only once fully written. */
export function writeJsonAtomic(directory: string, fileName: string, payload: unknown): string {
  mkdirSync(directory, { recursive: true });
  const finalPath = join(directory, fileName);
  const tmpPath = `${finalPath}.tmp`;
  writeFileSync(tmpPath, `${JSON.stringify(payload)}\n`, "utf-8");
  renameSync(tmpPath, finalPath);
  return finalPath;
}
