"""Portable file formats and directory stores.

Corpus and annotation files are JSON Lines; embedding and similarity-matrix
files are single JSON objects, one file per sentence set, looked up by a
sanitized filename with a full-directory scan as fallback.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from .similarity import load_external_matrix
from .types import AnnotationRecord, EmbeddingSet, SentenceSet, SimilarityMatrix

_UNSAFE = re.compile(r"[^A-Za-z0-9._-]")


def sanitize_id(text: str) -> str:
    """Filename-safe form of a sentence-set id (lossy; stores fall back to a
    content scan when two ids collide)."""
    return _UNSAFE.sub("_", text) or "_"


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dump_json_pretty(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, record) for each non-blank line; malformed lines
    raise ValueError tagged with the line number."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise ValueError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


def write_jsonl(path: str | Path, records: Iterable[dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(dump_json(record) + "\n")


@dataclass
class Corpus:
    """Indexed view over corpus records: documents, references grouped by
    document (in file order), and model summaries keyed by (doc, system)."""

    documents: dict[str, SentenceSet] = field(default_factory=dict)
    references: dict[str, list[SentenceSet]] = field(default_factory=dict)
    summaries: dict[tuple[str, str], SentenceSet] = field(default_factory=dict)
    by_id: dict[str, SentenceSet] = field(default_factory=dict)

    def add(self, record: SentenceSet) -> None:
        if record.id in self.by_id:
            raise ValueError(f"duplicate sentence-set id {record.id!r}")
        self.by_id[record.id] = record
        if record.role == "document":
            self.documents[record.id] = record
        elif record.role == "reference":
            if record.doc_id is not None:
                self.references.setdefault(record.doc_id, []).append(record)
        elif record.role == "model_summary":
            if record.doc_id is not None and record.system_id is not None:
                self.summaries[(record.doc_id, record.system_id)] = record

    def get(self, sentence_set_id: str) -> SentenceSet:
        try:
            return self.by_id[sentence_set_id]
        except KeyError:
            raise KeyError(f"no sentence set with id {sentence_set_id!r}") from None


def load_corpus(*paths: str | Path) -> Corpus:
    """Load one or more corpus/outputs JSONL files into a single index."""
    corpus = Corpus()
    for path in paths:
        for lineno, record in iter_jsonl(path):
            try:
                corpus.add(SentenceSet.from_dict(record))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{Path(path)}:{lineno}: {exc}") from exc
    return corpus


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    records = []
    for lineno, record in iter_jsonl(path):
        try:
            records.append(AnnotationRecord.from_dict(record))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{Path(path)}:{lineno}: {exc}") from exc
    return records


def write_annotations(path: str | Path, records: Iterable[AnnotationRecord]) -> None:
    write_jsonl(path, (record.to_dict() for record in records))


def write_embedding(directory: str | Path, embeds: EmbeddingSet) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{sanitize_id(embeds.sentence_set_id)}.json"
    path.write_text(dump_json(embeds.to_dict()) + "\n", encoding="utf-8")
    return path


def load_embedding(path: str | Path) -> EmbeddingSet:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot parse embedding file {path}: {exc}") from exc
    try:
        return EmbeddingSet.from_dict(data)
    except (KeyError, ValueError) as exc:
        raise ValueError(f"invalid embedding file {path}: {exc}") from exc


class EmbeddingStore:
    """Directory of embedding files, loaded lazily and cached by id."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._cache: dict[str, EmbeddingSet] = {}
        self._scanned = False

    def load(self, sentence_set_id: str) -> EmbeddingSet:
        if sentence_set_id in self._cache:
            return self._cache[sentence_set_id]
        direct = self.directory / f"{sanitize_id(sentence_set_id)}.json"
        if direct.is_file():
            embeds = load_embedding(direct)
            if embeds.sentence_set_id == sentence_set_id:
                self._cache[sentence_set_id] = embeds
                return embeds
        if not self._scanned:
            self._scan()
            if sentence_set_id in self._cache:
                return self._cache[sentence_set_id]
        raise KeyError(f"no embedding for {sentence_set_id!r} in {self.directory}")

    def _scan(self) -> None:
        self._scanned = True
        if not self.directory.is_dir():
            return
        for path in sorted(self.directory.glob("*.json")):
            embeds = load_embedding(path)
            self._cache.setdefault(embeds.sentence_set_id, embeds)


def write_matrix(
    directory: str | Path, matrix: SimilarityMatrix, sentence_set_id: str
) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = matrix.to_dict()
    payload["sentence_set_id"] = sentence_set_id
    path = directory / f"{sanitize_id(sentence_set_id)}.json"
    path.write_text(dump_json(payload) + "\n", encoding="utf-8")
    return path


class MemoryStore:
    """Dict-backed stand-in for the directory stores, used when payloads
    arrive inline (e.g. over the service) instead of from disk."""

    def __init__(self, items: dict[str, Any], kind: str = "embedding"):
        self._items = dict(items)
        self._kind = kind

    def load(self, sentence_set_id: str):
        try:
            return self._items[sentence_set_id]
        except KeyError:
            raise KeyError(f"no {self._kind} for {sentence_set_id!r}") from None


class MatrixStore:
    """Directory of externally computed similarity-matrix files, keyed by the
    ``sentence_set_id`` field each file carries."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._paths: dict[str, Path] = {}
        self._scanned = False

    def load(self, sentence_set_id: str) -> SimilarityMatrix:
        direct = self.directory / f"{sanitize_id(sentence_set_id)}.json"
        candidates = [direct] if direct.is_file() else []
        if not candidates:
            self._scan()
            if sentence_set_id in self._paths:
                candidates = [self._paths[sentence_set_id]]
        for path in candidates:
            data = json.loads(path.read_text(encoding="utf-8"))
            if data.get("sentence_set_id") == sentence_set_id:
                return load_external_matrix(path)
        raise KeyError(f"no similarity matrix for {sentence_set_id!r} in {self.directory}")

    def _scan(self) -> None:
        if self._scanned:
            return
        self._scanned = True
        if not self.directory.is_dir():
            return
        for path in sorted(self.directory.glob("*.json")):
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            set_id = data.get("sentence_set_id")
            if isinstance(set_id, str):
                self._paths.setdefault(set_id, path)
