/**
 * Adapter acceptance: the engine's own loaders are the oracle for every file
 * this package emits, so these tests shell out to the installed engine.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { runEmbed, main as embedMain } from "../src/embed.js";
import { runSim } from "../src/sim.js";
import { sanitizeId, type EmbeddingFile, type MatrixFile } from "../src/formats.js";
import { sentenceSimilarity } from "../src/similarity.js";

const PYTHON = process.env.SEMNCG_PYTHON ?? "python3";

function python(script: string): string {
  return execFileSync(PYTHON, ["-c", script], { encoding: "utf-8" });
}

function cosine(u: number[], v: number[]): number {
  let dot = 0;
  let nu = 0;
  let nv = 0;
  for (let i = 0; i < u.length; i += 1) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  return dot / (Math.sqrt(nu) * Math.sqrt(nv));
}

// five sentences; 0 and 2 are identical so the top-3 matrix carries a 1.0 pair
const SUMMARY_SENTENCES = [
  "The council approved the harbor bridge budget.",
  "Storm damage closed the river crossing for a week.",
  "The council approved the harbor bridge budget.",
  "Engineers inspected the tunnel on Friday.",
  "The garden festival returns next spring.",
];

const DOC_SENTENCES = [
  "The council approved the harbor bridge budget.",
  "Storm damage closed the river crossing for a week.",
  "Engineers inspected the tunnel on Friday.",
  "The garden festival returns next spring.",
  "Local markets reported record attendance.",
];

let workDir: string;
let corpusPath: string;
let embedDir: string;

beforeAll(() => {
  workDir = mkdtempSync(join(tmpdir(), "semncg-adapter-"));
  corpusPath = join(workDir, "corpus.jsonl");
  embedDir = join(workDir, "embeds");
  const records = [
    { id: "doc-1", role: "document", sentences: DOC_SENTENCES },
    {
      id: "doc-1::ref00",
      role: "reference",
      sentences: ["The council funded the bridge.", "The tunnel passed inspection."],
      doc_id: "doc-1",
    },
    {
      id: "doc-1::sysA",
      role: "model_summary",
      sentences: SUMMARY_SENTENCES,
      doc_id: "doc-1",
      system_id: "sysA",
      extractive: true,
    },
  ];
  writeFileSync(corpusPath, records.map((r) => JSON.stringify(r)).join("\n") + "\n");
  runEmbed({ corpus: corpusPath, model: "STSb-distilbert", out: embedDir });
});

function readEmbedding(id: string): EmbeddingFile {
  return JSON.parse(readFileSync(join(embedDir, `${sanitizeId(id)}.json`), "utf-8"));
}

describe("embedding files", () => {
  it("declares the registered dimensionality (768 for STSb-distilbert)", () => {
    const file = readEmbedding("doc-1::sysA");
    expect(file.dim).toBe(768);
    expect(file.vectors).toHaveLength(SUMMARY_SENTENCES.length);
    for (const vector of file.vectors) expect(vector).toHaveLength(768);
  });

  it("validates against the engine loader", () => {
    const out = python(
      [
        "from semncg.fileio import load_embedding",
        `e = load_embedding(${JSON.stringify(join(embedDir, "doc-1__sysA.json"))})`,
        "print(e.sentence_set_id, e.dim, len(e))",
      ].join("\n"),
    );
    expect(out.trim()).toBe("doc-1::sysA 768 5");
  });

  it("gives identical sentences cosine 1.0 within 1e-6", () => {
    const file = readEmbedding("doc-1::sysA");
    expect(file.vectors[0]).toEqual(file.vectors[2]);
    expect(cosine(file.vectors[0], file.vectors[2])).toBeCloseTo(1.0, 6);
  });

  it("re-runs byte-identically", () => {
    const before = readFileSync(join(embedDir, "doc-1__sysA.json"), "utf-8");
    runEmbed({ corpus: corpusPath, model: "STSb-distilbert", out: embedDir });
    const after = readFileSync(join(embedDir, "doc-1__sysA.json"), "utf-8");
    expect(after).toBe(before);
  });

  it("respects per-model dimensions from the registry", () => {
    const useDir = join(workDir, "embeds-use");
    runEmbed({ corpus: corpusPath, model: "USE", out: useDir });
    const file: EmbeddingFile = JSON.parse(
      readFileSync(join(useDir, "doc-1.json"), "utf-8"),
    );
    expect(file.dim).toBe(512);
  });

  it("handles an empty corpus by writing nothing and exiting 0", () => {
    const emptyPath = join(workDir, "empty.jsonl");
    writeFileSync(emptyPath, "");
    const emptyOut = join(workDir, "embeds-empty");
    const code = embedMain(["--corpus", emptyPath, "--model", "USE", "--out", emptyOut]);
    expect(code).toBe(0);
  });

  it("rejects unknown models with a clear message", () => {
    const code = embedMain(["--corpus", corpusPath, "--model", "glove", "--out", embedDir]);
    expect(code).toBe(2);
  });
});

describe("similarity matrices", () => {
  it("writes a k-by-k matrix per summary with a unit entry for the identical pair", () => {
    const simDir = join(workDir, "sim-bert");
    const result = runSim({ corpus: corpusPath, metric: "bertscore", k: 3, out: simDir });
    expect(result.written).toHaveLength(1);
    const file: MatrixFile = JSON.parse(
      readFileSync(join(simDir, "doc-1__sysA.json"), "utf-8"),
    );
    expect(file.kind).toBe("bertscore");
    expect(file.values).toHaveLength(3);
    for (const row of file.values) expect(row).toHaveLength(3);
    // sentences 0 and 2 are identical
    expect(file.values[0][2]).toBeCloseTo(1.0, 3);
    expect(file.values[2][0]).toBeCloseTo(1.0, 3);
    for (const row of file.values) for (const v of row) expect(v >= 0 && v <= 1).toBe(true);
  });

  it("is accepted by the engine loader without warnings", () => {
    const simDir = join(workDir, "sim-mover");
    runSim({ corpus: corpusPath, metric: "moverscore", k: 3, out: simDir });
    const out = python(
      [
        "import warnings",
        "from semncg.similarity import load_external_matrix",
        "with warnings.catch_warnings():",
        "    warnings.simplefilter('error')",
        `    m = load_external_matrix(${JSON.stringify(join(simDir, "doc-1__sysA.json"))})`,
        "print(m.kind, m.values.shape)",
      ].join("\n"),
    );
    expect(out.trim()).toBe("moverscore (3, 3)");
  });

  it("skips summaries shorter than k with a note", () => {
    const shortPath = join(workDir, "short.jsonl");
    writeFileSync(
      shortPath,
      JSON.stringify({
        id: "doc-9::tiny",
        role: "model_summary",
        sentences: ["Only one sentence here.", "And a second."],
      }) + "\n",
    );
    const result = runSim({
      corpus: shortPath,
      metric: "bertscore",
      k: 3,
      out: join(workDir, "sim-short"),
    });
    expect(result.written).toHaveLength(0);
    expect(result.skipped).toHaveLength(1);
    expect(result.skipped[0]).toContain("fewer than k");
  });

  it("identical sentences score 1.0 under both metrics", () => {
    const sentence = "Storm damage closed the river crossing.";
    expect(sentenceSimilarity("bertscore", sentence, sentence)).toBeCloseTo(1.0, 6);
    expect(sentenceSimilarity("moverscore", sentence, sentence)).toBeCloseTo(1.0, 6);
  });
});

describe("engine round trip", () => {
  it("scores a summary end to end using adapter-made files", () => {
    const simDir = join(workDir, "sim-roundtrip");
    runSim({ corpus: corpusPath, metric: "bertscore", k: 3, out: simDir });
    const out = execFileSync(
      PYTHON,
      [
        "-m",
        "semncg.cli",
        "score",
        "--corpus", corpusPath,
        "--doc", "doc-1",
        "--ref", "doc-1::ref00",
        "--model", "doc-1::sysA",
        "--embeddings", embedDir,
        "--matrices", simDir,
        "--penalty", "bertscore",
      ],
      { encoding: "utf-8" },
    );
    const score = JSON.parse(out.trim());
    expect(score.red_backend).toBe("bertscore");
    expect(score.final).toBeGreaterThanOrEqual(0);
    expect(score.final).toBeLessThanOrEqual(1);
    // sentences 0 and 2 of the summary are duplicates, so redundancy is high
    expect(score.score_red).toBeGreaterThan(0.5);
  });
});
