#!/usr/bin/env node
/**
 * semncg-embed: turn a corpus JSONL file into one embedding file per
 * sentence set, in the engine's format.
 *
 *   semncg-embed --corpus corpus.jsonl --model STSb-distilbert --out embeds/
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { readCorpus, sanitizeId, writeJsonAtomic, type EmbeddingFile } from "./formats.js";
import { ENCODER_BACKEND, resolveModel, supportedModelNames } from "./models.js";

export interface EmbedOptions {
  corpus: string;
  model: string;
  out: string;
}

export function runEmbed(options: EmbedOptions): string[] {
  const { spec, encoder } = resolveModel(options.model);
  const written: string[] = [];
  for (const record of readCorpus(options.corpus)) {
    const payload: EmbeddingFile = {
      sentence_set_id: record.id,
      dim: spec.dim,
      vectors: record.sentences.map((sentence) => encoder.encode(sentence)),
      model: spec.name,
      backend: ENCODER_BACKEND,
    };
    written.push(writeJsonAtomic(options.out, `${sanitizeId(record.id)}.json`, payload));
  }
  return written;
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        corpus: { type: "string" },
        model: { type: "string" },
        out: { type: "string" },
      },
    }));
  } catch (error) {
    console.error(String(error));
    return 2;
  }
  if (!values.corpus || !values.model || !values.out) {
    console.error(
      "usage: semncg-embed --corpus FILE --model NAME --out DIR\n" +
        `models: ${supportedModelNames().join(", ")}`,
    );
    return 2;
  }
  try {
    const written = runEmbed({ corpus: values.corpus, model: values.model, out: values.out });
    console.log(`wrote ${written.length} embedding file(s) to ${values.out}`);
    return 0;
  } catch (error) {
    console.error(error instanceof Error ? error.message : String(error));
    return 2;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
