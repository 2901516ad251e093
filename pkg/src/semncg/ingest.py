"""Corpus and annotation ingestion.

Converts benchmark-style evaluation dumps (one JSON object per line carrying a
news article, its reference summaries, a system output, and expert ratings)
into the engine's native JSONL formats. Native files pass through unchanged.

Sentence segmentation happens here and only here: text already supplied as a
sentence list is never re-split, so the numeric core stays free of NLP
heuristics.
"""

from __future__ import annotations

import re
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .fileio import dump_json, dump_json_pretty, iter_jsonl
from .similarity import tokenize
from .types import AnnotationRecord, DIMENSIONS, SentenceSet

SEGMENTER_NAME = "terminal-punctuation-v1"

_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")

# Raw expert ratings arrive on a 1..5 scale; (x - 1) / 4 maps them onto [0, 1]
# and the per-dimension values of the (usually 3) raters are averaged.
RAW_SCALE_MIN = 1.0
RAW_SCALE_MAX = 5.0


def split_sentences(text: str) -> list[str]:
    """Rule-based split on terminal punctuation followed by whitespace; pieces
    without any token are dropped."""
    pieces = [piece.strip() for piece in _SPLIT_RE.split(text)]
    return [piece for piece in pieces if piece and tokenize(piece)]


def as_sentences(value: Any) -> list[str]:
    """Sentence list from either a pre-segmented list or a flat string."""
    if isinstance(value, str):
        return split_sentences(value)
    if isinstance(value, (list, tuple)):
        out = []
        for item in value:
            if isinstance(item, str) and item.strip() and tokenize(item):
                out.append(item.strip())
        return out
    return []


def normalize_rating(raw: float) -> float:
    """Map a 1..5 rating to [0, 1], clamping stray out-of-scale values."""
    value = (float(raw) - RAW_SCALE_MIN) / (RAW_SCALE_MAX - RAW_SCALE_MIN)
    return min(1.0, max(0.0, value))


def aggregate_annotations(
    doc_id: str, system_id: str, expert_ratings: Sequence[Mapping[str, Any]]
) -> AnnotationRecord | None:
    """Mean of the normalized per-expert ratings along each dimension."""
    values: dict[str, list[float]] = {dim: [] for dim in DIMENSIONS}
    for rating in expert_ratings:
        for dim in DIMENSIONS:
            if dim in rating:
                values[dim].append(normalize_rating(rating[dim]))
    if any(not values[dim] for dim in DIMENSIONS):
        return None
    means = {dim: sum(values[dim]) / len(values[dim]) for dim in DIMENSIONS}
    return AnnotationRecord(doc_id=doc_id, system_id=system_id, **means)


@dataclass
class IngestResult:
    corpus_path: Path
    outputs_path: Path
    annotations_path: Path
    manifest_path: Path
    counts: dict[str, int] = field(default_factory=dict)


def detect_format(path: str | Path) -> str:
    """"native" when the first record carries a role field, else "summeval"."""
    for _, record in iter_jsonl(path):
        return "native" if "role" in record else "summeval"
    raise ValueError(f"{path} holds no records")


def _passthrough(src: str | Path, dst: Path) -> int:
    """Validate a native corpus/outputs file and copy it byte-for-byte."""
    count = 0
    for lineno, record in iter_jsonl(src):
        try:
            SentenceSet.from_dict(record)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{Path(src)}:{lineno}: {exc}") from exc
        count += 1
    dst.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(src, dst)
    return count


def ingest_corpus(
    input_path: str | Path,
    out_dir: str | Path,
    fmt: str = "auto",
    extractive_ids: Sequence[str] | None = None,
) -> IngestResult:
    """Normalize an input dump into corpus.jsonl (documents + references),
    outputs.jsonl (model summaries), and annotations.jsonl.

    Malformed records are skipped and counted, never fatal. ``extractive_ids``
    marks which system ids are extractive; without it every system is marked
    extractive (and downstream filtering keeps everything).
    """
    input_path = Path(input_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus_path = out_dir / "corpus.jsonl"
    outputs_path = out_dir / "outputs.jsonl"
    annotations_path = out_dir / "annotations.jsonl"
    manifest_path = out_dir / "ingest_manifest.json"

    if fmt == "auto":
        fmt = detect_format(input_path)
    if fmt not in ("native", "summeval"):
        raise ValueError(f"unknown ingest format {fmt!r}")

    counts: dict[str, int] = {
        "documents": 0,
        "references": 0,
        "model_summaries": 0,
        "annotations": 0,
        "skipped_records": 0,
        "skipped_annotations": 0,
        "segmented_texts": 0,
    }

    if fmt == "native":
        # Already in engine format: a validating, byte-identical pass-through.
        records = _passthrough(input_path, corpus_path)
        outputs_path.write_text("", encoding="utf-8")
        annotations_path.write_text("", encoding="utf-8")
        manifest = {
            "format": "native",
            "segmenter": None,
            "counts": {"records": records},
        }
        manifest_path.write_text(dump_json_pretty(manifest), encoding="utf-8")
        return IngestResult(
            corpus_path,
            outputs_path,
            annotations_path,
            manifest_path,
            {"records": records},
        )

    extractive_set = set(extractive_ids) if extractive_ids is not None else None
    seen_docs: set[str] = set()

    def sentences_of(value: Any) -> list[str]:
        if isinstance(value, str):
            counts["segmented_texts"] += 1
        return as_sentences(value)

    with corpus_path.open("w", encoding="utf-8") as corpus_file, outputs_path.open(
        "w", encoding="utf-8"
    ) as outputs_file, annotations_path.open("w", encoding="utf-8") as annotations_file:
        for lineno, record in iter_jsonl(input_path):
            doc_id = record.get("id")
            system_id = record.get("model_id")
            if not isinstance(doc_id, str) or not doc_id or not isinstance(system_id, str):
                counts["skipped_records"] += 1
                continue

            summary_sentences = sentences_of(record.get("decoded"))
            if not summary_sentences:
                counts["skipped_records"] += 1
                continue

            if doc_id not in seen_docs:
                doc_sentences = sentences_of(record.get("text"))
                references = record.get("references") or []
                ref_sentence_lists = [sentences_of(ref) for ref in references]
                if not doc_sentences or not ref_sentence_lists or not all(ref_sentence_lists):
                    counts["skipped_records"] += 1
                    continue
                seen_docs.add(doc_id)
                corpus_file.write(
                    dump_json(
                        SentenceSet(
                            id=doc_id, role="document", sentences=tuple(doc_sentences)
                        ).to_dict()
                    )
                    + "\n"
                )
                counts["documents"] += 1
                for position, ref_sentences in enumerate(ref_sentence_lists):
                    corpus_file.write(
                        dump_json(
                            SentenceSet(
                                id=f"{doc_id}::ref{position:02d}",
                                role="reference",
                                sentences=tuple(ref_sentences),
                                doc_id=doc_id,
                            ).to_dict()
                        )
                        + "\n"
                    )
                    counts["references"] += 1

            extractive = True if extractive_set is None else system_id in extractive_set
            outputs_file.write(
                dump_json(
                    SentenceSet(
                        id=f"{doc_id}::{system_id}",
                        role="model_summary",
                        sentences=tuple(summary_sentences),
                        doc_id=doc_id,
                        system_id=system_id,
                        extractive=extractive,
                    ).to_dict()
                )
                + "\n"
            )
            counts["model_summaries"] += 1

            annotation = aggregate_annotations(
                doc_id, system_id, record.get("expert_annotations") or []
            )
            if annotation is None:
                counts["skipped_annotations"] += 1
            else:
                annotations_file.write(dump_json(annotation.to_dict()) + "\n")
                counts["annotations"] += 1

    manifest = {
        "format": "summeval",
        "segmenter": SEGMENTER_NAME if counts["segmented_texts"] else None,
        "rating_normalization": "(raw - 1) / 4, expert mean",
        "extractive_ids": sorted(extractive_set) if extractive_set is not None else None,
        "counts": counts,
    }
    manifest_path.write_text(dump_json_pretty(manifest), encoding="utf-8")
    return IngestResult(corpus_path, outputs_path, annotations_path, manifest_path, counts)
