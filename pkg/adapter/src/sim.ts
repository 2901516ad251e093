#!/usr/bin/env node
/**
 * semncg-sim: emit one k-by-k similarity matrix file per model summary,
 * covering its first k sentences, oriented row-j/column-i as the engine's
 * redundancy scoring expects.
 *
 *   semncg-sim --corpus outputs.jsonl --metric bertscore --k 3 --out matrices/
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { readCorpus, sanitizeId, writeJsonAtomic, type MatrixFile } from "./formats.js";
import { METRICS, sentenceSimilarity, type MetricName } from "./similarity.js";

export interface SimOptions {
  corpus: string;
  metric: MetricName;
  k: number;
  out: string;
}

export interface SimResult {
  written: string[];
  skipped: string[];
}

export function runSim(options: SimOptions): SimResult {
  if (!METRICS.includes(options.metric)) {
    throw new Error(`unsupported metric "${options.metric}"; supported: ${METRICS.join(", ")}`);
  }
  if (!Number.isInteger(options.k) || options.k < 2) {
    throw new Error(`k must be an integer >= 2, got ${options.k}`);
  }
  const written: string[] = [];
  const skipped: string[] = [];
  for (const record of readCorpus(options.corpus)) {
    if (record.role !== "model_summary") continue;
    if (record.sentences.length < options.k) {
      skipped.push(`${record.id}: ${record.sentences.length} sentences, fewer than k=${options.k}`);
      continue;
    }
    const head = record.sentences.slice(0, options.k);
    const cache = new Map<string, number[]>();
    const values = head.map((rowSentence) =>
      head.map((colSentence) => sentenceSimilarity(options.metric, rowSentence, colSentence, cache)),
    );
    const ids = [...head.keys()];
    const payload: MatrixFile = {
      kind: options.metric,
      row_ids: ids,
      col_ids: ids,
      values,
      sentence_set_id: record.id,
    };
    written.push(writeJsonAtomic(options.out, `${sanitizeId(record.id)}.json`, payload));
  }
  return { written, skipped };
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        corpus: { type: "string" },
        metric: { type: "string" },
        k: { type: "string", default: "3" },
        out: { type: "string" },
      },
    }));
  } catch (error) {
    console.error(String(error));
    return 2;
  }
  if (!values.corpus || !values.metric || !values.out) {
    console.error(
      "usage: semncg-sim --corpus FILE --metric bertscore|moverscore [--k 3] --out DIR",
    );
    return 2;
  }
  try {
    const result = runSim({
      corpus: values.corpus,
      metric: values.metric as MetricName,
      k: Number(values.k),
      out: values.out,
    });
    for (const note of result.skipped) console.error(`skipped ${note}`);
    console.log(`wrote ${result.written.length} matrix file(s) to ${values.out}`);
    return 0;
  } catch (error) {
    console.error(error instanceof Error ? error.message : String(error));
    return 2;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
