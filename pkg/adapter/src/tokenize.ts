/**
 * Tokenizer matching the engine's contract: lowercase, split on whitespace,
 * strip punctuation from both token ends, keep internal apostrophes and
 * hyphens, drop tokens that were all punctuation. Keeping this in lockstep
 * with the engine keeps token-level similarities comparable.
 */

const STRIP = new Set(
  "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~–—‘’“”…«»",
);

function stripEnds(word: string): string {
  let start = 0;
  let end = word.length;
  while (start < end && STRIP.has(word[start])) start += 1;
  while (end > start && STRIP.has(word[end - 1])) end -= 1;
  return word.slice(start, end);
}

export function tokenize(sentence: string): string[] {
  const tokens: string[] = [];
  for (const word of sentence.toLowerCase().split(/\s+/)) {
    const token = stripEnds(word);
    if (token) tokens.push(token);
  }
  return tokens;
}
