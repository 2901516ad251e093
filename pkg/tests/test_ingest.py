import json
from pathlib import Path

import pytest

from semncg.fileio import load_annotations, load_corpus
from semncg.ingest import (
    aggregate_annotations,
    as_sentences,
    detect_format,
    ingest_corpus,
    normalize_rating,
    split_sentences,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _summeval_record(doc_id, model_id, n_refs=11, decoded="First part. Second part. Third part."):
    return {
        "id": doc_id,
        "model_id": model_id,
        "text": "Sentence one is here. Sentence two is here! Sentence three? Sentence four.",
        "decoded": decoded,
        "references": [f"Reference {j} text. More reference {j} text." for j in range(n_refs)],
        "expert_annotations": [
            {"coherence": 2, "consistency": 5, "fluency": 5, "relevance": 3},
            {"coherence": 3, "consistency": 5, "fluency": 5, "relevance": 4},
            {"coherence": 3, "consistency": 5, "fluency": 5, "relevance": 3},
        ],
    }


def _write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


class TestSegmentation:
    def test_terminal_punctuation_split(self):
        text = "One is here. Two is here! Three here? Four."
        assert split_sentences(text) == ["One is here.", "Two is here!", "Three here?", "Four."]

    def test_tokenless_pieces_dropped(self):
        assert split_sentences("Real words here. ... !!") == ["Real words here."]

    def test_presegmented_lists_pass_through(self):
        assert as_sentences(["Already split. Not resplit!", "Second."]) == [
            "Already split. Not resplit!",
            "Second.",
        ]


class TestRatingNormalization:
    def test_scale_endpoints(self):
        assert normalize_rating(1) == 0.0
        assert normalize_rating(5) == 1.0
        assert normalize_rating(3) == 0.5

    def test_expert_mean(self):
        record = aggregate_annotations(
            "d",
            "s",
            [
                {"coherence": 2, "consistency": 5, "fluency": 5, "relevance": 3},
                {"coherence": 3, "consistency": 5, "fluency": 5, "relevance": 4},
                {"coherence": 3, "consistency": 5, "fluency": 5, "relevance": 3},
            ],
        )
        assert record.consistency == 1.0
        assert record.fluency == 1.0
        assert record.coherence == pytest.approx((0.25 + 0.5 + 0.5) / 3)
        assert record.relevance == pytest.approx((0.5 + 0.75 + 0.5) / 3)

    def test_missing_dimension_returns_none(self):
        assert aggregate_annotations("d", "s", [{"coherence": 3}]) is None
        assert aggregate_annotations("d", "s", []) is None


class TestNativePassthrough:
    def test_byte_identical(self, tmp_path):
        source = FIXTURES / "corpus.jsonl"
        result = ingest_corpus(source, tmp_path / "out", fmt="native")
        assert result.corpus_path.read_bytes() == source.read_bytes()

    def test_detect_native(self):
        assert detect_format(FIXTURES / "corpus.jsonl") == "native"

    def test_invalid_native_record_rejected(self, tmp_path):
        bad = _write_jsonl(tmp_path / "bad.jsonl", [{"id": "x", "role": "document"}])
        with pytest.raises(ValueError):
            ingest_corpus(bad, tmp_path / "out", fmt="native")


class TestSummevalConversion:
    def test_eleven_references_emitted(self, tmp_path):
        source = _write_jsonl(tmp_path / "raw.jsonl", [_summeval_record("doc-1", "M0")])
        assert detect_format(source) == "summeval"
        result = ingest_corpus(source, tmp_path / "out", fmt="summeval")
        corpus = load_corpus(result.corpus_path, result.outputs_path)
        assert len(corpus.references["doc-1"]) == 11
        assert result.counts["references"] == 11
        assert corpus.documents["doc-1"].sentences[0] == "Sentence one is here."

    def test_documents_deduplicated_across_systems(self, tmp_path):
        source = _write_jsonl(
            tmp_path / "raw.jsonl",
            [_summeval_record("doc-1", "M0"), _summeval_record("doc-1", "M1")],
        )
        result = ingest_corpus(source, tmp_path / "out")
        assert result.counts["documents"] == 1
        assert result.counts["model_summaries"] == 2

    def test_empty_summary_skipped_and_counted(self, tmp_path):
        source = _write_jsonl(
            tmp_path / "raw.jsonl",
            [_summeval_record("doc-1", "M0", decoded=""), _summeval_record("doc-2", "M0")],
        )
        result = ingest_corpus(source, tmp_path / "out")
        assert result.counts["skipped_records"] == 1
        assert result.counts["model_summaries"] == 1

    def test_extractive_flagging(self, tmp_path):
        source = _write_jsonl(
            tmp_path / "raw.jsonl",
            [_summeval_record("doc-1", "M0"), _summeval_record("doc-1", "M8")],
        )
        result = ingest_corpus(source, tmp_path / "out", extractive_ids=["M0"])
        corpus = load_corpus(result.corpus_path, result.outputs_path)
        assert corpus.summaries[("doc-1", "M0")].extractive is True
        assert corpus.summaries[("doc-1", "M8")].extractive is False

    def test_annotations_normalized(self, tmp_path):
        source = _write_jsonl(tmp_path / "raw.jsonl", [_summeval_record("doc-1", "M0")])
        result = ingest_corpus(source, tmp_path / "out")
        annotations = load_annotations(result.annotations_path)
        assert len(annotations) == 1
        assert annotations[0].consistency == 1.0

    def test_manifest_records_segmentation(self, tmp_path):
        source = _write_jsonl(tmp_path / "raw.jsonl", [_summeval_record("doc-1", "M0")])
        result = ingest_corpus(source, tmp_path / "out")
        manifest = json.loads(result.manifest_path.read_text())
        assert manifest["segmenter"] == "terminal-punctuation-v1"
        assert manifest["format"] == "summeval"
