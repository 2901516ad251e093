"""Regenerate the synthetic fixture corpus under tests/fixtures/.

Everything is derived from sha256 digests of fixed strings, so the files are
bit-identical on every run and platform; there is no random seed to manage.

Usage: python scripts/make_fixtures.py
"""

from __future__ import annotations

import hashlib
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from semncg.fileio import dump_json, write_embedding, write_matrix  # noqa: E402
from semncg.types import EmbeddingSet, SentenceSet, SimilarityMatrix  # noqa: E402

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
N_DOCS = 20
N_REFS = 11
EMBED_DIM = 16

WORDS = [
    "market", "river", "council", "storm", "garden", "engine", "signal", "harbor",
    "window", "forest", "bridge", "record", "silver", "insect", "tunnel", "planet",
    "copper", "meadow", "rocket", "anchor", "valley", "circuit", "lantern", "pepper",
    "canyon", "violin", "magnet", "shadow", "timber", "saddle", "beacon", "marble",
]


def _digest_ints(key: str, count: int) -> list[int]:
    out: list[int] = []
    block = 0
    while len(out) < count:
        digest = hashlib.sha256(f"{key}#{block}".encode()).digest()
        out.extend(digest)
        block += 1
    return out[:count]


def _pick_words(key: str, count: int, pool: list[str]) -> list[str]:
    return [pool[v % len(pool)] for v in _digest_ints(key, count)]


def _sentence(key: str, length: int = 8, pool: list[str] | None = None) -> str:
    words = _pick_words(key, length, pool or WORDS)
    return " ".join(words).capitalize() + "."


def _vector(text: str) -> list[float]:
    raw = _digest_ints(f"vec:{text}", EMBED_DIM)
    return [round(v / 255.0, 6) for v in raw]


def _embedding(set_id: str, sentences: tuple[str, ...]) -> EmbeddingSet:
    return EmbeddingSet(
        sentence_set_id=set_id,
        dim=EMBED_DIM,
        vectors=np.array([_vector(s) for s in sentences], dtype=np.float64),
    )


def _reference_sentences(doc_id: str, doc_words: list[str], j: int) -> list[str]:
    """Two sentences whose vocabulary overlaps the document more as j grows."""
    sentences = []
    for s in range(2):
        length = 8
        from_doc = round(length * j / (N_REFS - 1))
        key = f"{doc_id}:ref{j}:s{s}"
        borrowed = [doc_words[v % len(doc_words)] for v in _digest_ints(key + ":doc", from_doc)]
        fresh = [f"x{v:02x}" for v in _digest_ints(key + ":new", length - from_doc)]
        sentences.append(" ".join(borrowed + fresh).capitalize() + ".")
    return sentences


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    embed_dir = FIXTURE_DIR / "embeddings"
    matrix_dir = FIXTURE_DIR / "matrices"

    corpus_lines: list[str] = []
    output_lines: list[str] = []
    annotation_lines: list[str] = []
    embeddings: list[EmbeddingSet] = []
    matrices: list[tuple[SimilarityMatrix, str]] = []

    for d in range(N_DOCS):
        doc_id = f"doc-{d:03d}"
        n_sentences = 6 + d % 5
        doc_sentences = tuple(
            _sentence(f"{doc_id}:s{s}") for s in range(n_sentences)
        )
        doc = SentenceSet(id=doc_id, role="document", sentences=doc_sentences)
        corpus_lines.append(dump_json(doc.to_dict()))
        embeddings.append(_embedding(doc_id, doc_sentences))

        doc_words = [w for sent in doc_sentences for w in sent.lower().rstrip(".").split()]
        for j in range(N_REFS):
            ref_id = f"{doc_id}::ref{j:02d}"
            ref_sentences = tuple(_reference_sentences(doc_id, doc_words, j))
            ref = SentenceSet(
                id=ref_id, role="reference", sentences=ref_sentences, doc_id=doc_id
            )
            corpus_lines.append(dump_json(ref.to_dict()))
            embeddings.append(_embedding(ref_id, ref_sentences))

        systems = {
            "sysA": (True, (0, 1, 2)),
            "sysB": (True, (1, 3, 1)),  # duplicated pick: redundant on purpose
            "sysC": (False, (0, 2, 4)),  # flagged non-extractive, filtered out
        }
        for system_id, (extractive, picks) in systems.items():
            summary_id = f"{doc_id}::{system_id}"
            sentences = tuple(doc_sentences[p] for p in picks)
            if not extractive:
                sentences = tuple(s.lower().replace("the ", "a ") for s in sentences)
            summary = SentenceSet(
                id=summary_id,
                role="model_summary",
                sentences=sentences,
                doc_id=doc_id,
                system_id=system_id,
                extractive=extractive,
            )
            output_lines.append(dump_json(summary.to_dict()))
            embeddings.append(_embedding(summary_id, sentences))

            if extractive:
                base = _digest_ints(f"{summary_id}:matrix", 9)
                values = np.zeros((3, 3))
                pos = 0
                for r in range(3):
                    for c in range(r + 1, 3):
                        values[r, c] = values[c, r] = round(base[pos] / 255.0, 4)
                        pos += 1
                np.fill_diagonal(values, 1.0)
                matrices.append(
                    (
                        SimilarityMatrix(
                            kind="bertscore",
                            row_ids=(0, 1, 2),
                            col_ids=(0, 1, 2),
                            values=values,
                        ),
                        summary_id,
                    )
                )

            ratings = _digest_ints(f"{summary_id}:human", 4)
            annotation_lines.append(
                dump_json(
                    {
                        "doc_id": doc_id,
                        "system_id": system_id,
                        "consistency": round(ratings[0] / 255.0, 2),
                        "relevance": round(ratings[1] / 255.0, 2),
                        "coherence": round(ratings[2] / 255.0, 2),
                        "fluency": round(ratings[3] / 255.0, 2),
                    }
                )
            )

    # one deliberately short summary: exercises the skip log
    short_id = "doc-000::sysD"
    short = SentenceSet(
        id=short_id,
        role="model_summary",
        sentences=(_sentence("doc-000:s0"), _sentence("doc-000:s1")),
        doc_id="doc-000",
        system_id="sysD",
        extractive=True,
    )
    output_lines.append(dump_json(short.to_dict()))
    embeddings.append(_embedding(short_id, short.sentences))

    (FIXTURE_DIR / "corpus.jsonl").write_text(
        "".join(line + "\n" for line in corpus_lines), "utf-8"
    )
    (FIXTURE_DIR / "outputs.jsonl").write_text(
        "".join(line + "\n" for line in output_lines), "utf-8"
    )
    (FIXTURE_DIR / "annotations.jsonl").write_text(
        "".join(line + "\n" for line in annotation_lines), "utf-8"
    )
    for item in embeddings:
        write_embedding(embed_dir, item)
    for matrix, set_id in matrices:
        write_matrix(matrix_dir, matrix, set_id)

    print(
        f"wrote {N_DOCS} documents, {len(output_lines)} summaries, "
        f"{len(embeddings)} embedding files, {len(matrices)} matrix files "
        f"to {FIXTURE_DIR}"
    )


if __name__ == "__main__":
    main()
