"""Domain types shared by every module of the engine.

All types are immutable after construction: dataclasses are frozen and numpy
payloads are marked read-only, so instances can be shared across workers
without locking. Constructors validate their invariants and raise
``ValueError`` on violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

ROLES = ("document", "reference", "model_summary")
SIMILARITY_KINDS = ("cosine", "rouge1", "bertscore", "moverscore", "external")
GAIN_SCHEMES = ("normalized_relevance", "rank_position")
REFERENCE_SETTINGS = (
    "LOR",
    "MOR",
    "HOR",
    "multi-LORs",
    "multi-MORs",
    "multi-HORs",
    "multi-mixed",
)
DIMENSIONS = ("consistency", "relevance", "coherence", "fluency")


class SampleSkipped(Exception):
    """A (document, summary) pair cannot be scored; ``args[0]`` is the reason."""


def _as_readonly(values: Any, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def _check_unit_range(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class SentenceSet:
    """An ordered list of sentences with an id and a role.

    Index order is canonical and never reordered in place. Optional linking
    fields (``doc_id``, ``system_id``, ``extractive``) carry corpus metadata
    for reference and model-summary records.
    """

    id: str
    role: str
    sentences: tuple[str, ...]
    doc_id: str | None = None
    system_id: str | None = None
    extractive: bool | None = None

    def __post_init__(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise ValueError("SentenceSet.id must be a non-empty string")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}, expected one of {ROLES}")
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if not self.sentences:
            raise ValueError(f"SentenceSet {self.id!r} has no sentences")
        from .similarity import tokenize  # local import to avoid a cycle

        for pos, sent in enumerate(self.sentences):
            if not isinstance(sent, str) or not tokenize(sent):
                raise ValueError(
                    f"SentenceSet {self.id!r}: sentence {pos} has no tokens"
                )

    def __len__(self) -> int:
        return len(self.sentences)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "role": self.role,
            "sentences": list(self.sentences),
        }
        if self.doc_id is not None:
            out["doc_id"] = self.doc_id
        if self.system_id is not None:
            out["system_id"] = self.system_id
        if self.extractive is not None:
            out["extractive"] = self.extractive
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SentenceSet":
        return cls(
            id=data["id"],
            role=data["role"],
            sentences=tuple(data["sentences"]),
            doc_id=data.get("doc_id"),
            system_id=data.get("system_id"),
            extractive=data.get("extractive"),
        )


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Per-sentence real vectors aligned index-for-index with a SentenceSet."""

    sentence_set_id: str
    dim: int
    vectors: np.ndarray

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("EmbeddingSet.dim must be positive")
        vectors = _as_readonly(self.vectors, 2, "vectors")
        if vectors.shape[0] < 1:
            raise ValueError("EmbeddingSet must hold at least one vector")
        if vectors.shape[1] != self.dim:
            raise ValueError(
                f"vector width {vectors.shape[1]} does not match dim {self.dim}"
            )
        object.__setattr__(self, "vectors", vectors)

    def __len__(self) -> int:
        return int(self.vectors.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingSet):
            return NotImplemented
        return (
            self.sentence_set_id == other.sentence_set_id
            and self.dim == other.dim
            and np.array_equal(self.vectors, other.vectors)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "sentence_set_id": self.sentence_set_id,
            "dim": self.dim,
            "vectors": self.vectors.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EmbeddingSet":
        return cls(
            sentence_set_id=data["sentence_set_id"],
            dim=int(data["dim"]),
            vectors=np.array(data["vectors"], dtype=np.float64),
        )


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Sentence-to-sentence similarity values, already clamped to [0, 1].

    ``values[r][c]`` is the similarity of the sentence ``row_ids[r]`` toward the
    sentence ``col_ids[c]``; asymmetric backends must be oriented accordingly.
    """

    kind: str
    row_ids: tuple[int, ...]
    col_ids: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in SIMILARITY_KINDS:
            raise ValueError(
                f"unknown similarity kind {self.kind!r}, expected one of {SIMILARITY_KINDS}"
            )
        object.__setattr__(self, "row_ids", tuple(int(i) for i in self.row_ids))
        object.__setattr__(self, "col_ids", tuple(int(i) for i in self.col_ids))
        values = _as_readonly(self.values, 2, "values")
        if values.shape != (len(self.row_ids), len(self.col_ids)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"({len(self.row_ids)}, {len(self.col_ids)})"
            )
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("similarity values must lie in [0, 1]; clamp on ingestion")
        object.__setattr__(self, "values", values)

    def entry(self, row_id: int, col_id: int) -> float:
        """Value for (row sentence, column sentence), looked up by sentence index."""
        try:
            r = self.row_ids.index(row_id)
            c = self.col_ids.index(col_id)
        except ValueError:
            raise ValueError(
                f"matrix of kind {self.kind!r} does not cover pair ({row_id}, {col_id})"
            ) from None
        return float(self.values[r, c])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.row_ids == other.row_ids
            and self.col_ids == other.col_ids
            and np.array_equal(self.values, other.values)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "row_ids": list(self.row_ids),
            "col_ids": list(self.col_ids),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimilarityMatrix":
        return cls(
            kind=data["kind"],
            row_ids=tuple(data["row_ids"]),
            col_ids=tuple(data["col_ids"]),
            values=np.array(data["values"], dtype=np.float64),
        )


@dataclass(frozen=True, eq=False)
class RelevanceVector:
    """Per-sentence relevance of a document toward a reference, in [0, 1]."""

    doc_id: str
    scores: np.ndarray

    def __post_init__(self) -> None:
        scores = _as_readonly(self.scores, 1, "scores")
        if scores.size < 1:
            raise ValueError("RelevanceVector must not be empty")
        if scores.min() < 0.0 or scores.max() > 1.0:
            raise ValueError("relevance scores must lie in [0, 1]")
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return int(self.scores.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelevanceVector):
            return NotImplemented
        return self.doc_id == other.doc_id and np.array_equal(self.scores, other.scores)

    def to_dict(self) -> dict[str, Any]:
        return {"doc_id": self.doc_id, "scores": self.scores.tolist()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RelevanceVector":
        return cls(doc_id=data["doc_id"], scores=np.array(data["scores"], dtype=np.float64))


@dataclass(frozen=True, eq=False)
class GroundTruthRanking:
    """Document sentence indices ordered by descending relevance, plus gains.

    ``gains`` is aligned to the sentence index (not the rank position), so the
    cumulative gain of a sentence subset is a gather, never a re-sort.
    """

    doc_id: str
    order: tuple[int, ...]
    gains: np.ndarray
    gain_scheme: str

    def __post_init__(self) -> None:
        if self.gain_scheme not in GAIN_SCHEMES:
            raise ValueError(
                f"unknown gain scheme {self.gain_scheme!r}, expected one of {GAIN_SCHEMES}"
            )
        order = tuple(int(i) for i in self.order)
        object.__setattr__(self, "order", order)
        gains = _as_readonly(self.gains, 1, "gains")
        n = gains.shape[0]
        if sorted(order) != list(range(n)):
            raise ValueError("order must be a permutation of 0..n-1 matching gains")
        if n and gains.min() < 0.0:
            raise ValueError("gains must be non-negative")
        if abs(float(gains.sum()) - 1.0) > 1e-9:
            raise ValueError("gains must sum to 1 within 1e-9")
        for pos in range(n - 1):
            if gains[order[pos]] < gains[order[pos + 1]] - 1e-12:
                raise ValueError("order must be non-increasing in gain")
        object.__setattr__(self, "gains", gains)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroundTruthRanking):
            return NotImplemented
        return (
            self.doc_id == other.doc_id
            and self.order == other.order
            and self.gain_scheme == other.gain_scheme
            and np.array_equal(self.gains, other.gains)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "order": list(self.order),
            "gains": self.gains.tolist(),
            "gain_scheme": self.gain_scheme,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GroundTruthRanking":
        return cls(
            doc_id=data["doc_id"],
            order=tuple(data["order"]),
            gains=np.array(data["gains"], dtype=np.float64),
            gain_scheme=data["gain_scheme"],
        )


@dataclass(frozen=True)
class AlignmentMatch:
    """One model sentence mapped to a document sentence index."""

    model_index: int
    doc_index: int
    score: float
    method: str

    def __post_init__(self) -> None:
        if self.method not in ("exact", "fuzzy"):
            raise ValueError(f"unknown match method {self.method!r}")
        _check_unit_range(self.score, "match score")


@dataclass(frozen=True)
class ModelAlignment:
    """Per-sentence mapping of a model summary back to document indices.

    One entry per model sentence, in summary order. Document indices may
    repeat: duplicated extraction is representable.
    """

    model_summary_id: str
    matches: tuple[AlignmentMatch, ...]

    def __post_init__(self) -> None:
        matches = tuple(self.matches)
        object.__setattr__(self, "matches", matches)
        if not matches:
            raise ValueError("ModelAlignment must hold at least one match")
        for pos, match in enumerate(matches):
            if match.model_index != pos:
                raise ValueError("matches must cover model sentences 0..m-1 in order")

    def __len__(self) -> int:
        return len(self.matches)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model_summary_id": self.model_summary_id,
            "matches": [
                {
                    "model_index": m.model_index,
                    "doc_index": m.doc_index,
                    "score": m.score,
                    "method": m.method,
                }
                for m in self.matches
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelAlignment":
        return cls(
            model_summary_id=data["model_summary_id"],
            matches=tuple(
                AlignmentMatch(
                    model_index=int(m["model_index"]),
                    doc_index=int(m["doc_index"]),
                    score=float(m["score"]),
                    method=m["method"],
                )
                for m in data["matches"]
            ),
        )


@dataclass(frozen=True)
class MetricScore:
    """The (gain score, redundancy score, final score) triple plus the
    configuration that produced it. The linear-combination identity is checked
    at construction and violations are rejected."""

    sem_ncg: float
    score_red: float
    final: float
    k: int
    lambda_: float
    red_backend: str
    embedding_name: str
    gain_scheme: str = "normalized_relevance"

    def __post_init__(self) -> None:
        _check_unit_range(self.sem_ncg, "sem_ncg")
        _check_unit_range(self.score_red, "score_red")
        _check_unit_range(self.final, "final")
        _check_unit_range(self.lambda_, "lambda")
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.red_backend != "none" and self.red_backend not in SIMILARITY_KINDS:
            raise ValueError(f"unknown redundancy backend {self.red_backend!r}")
        if self.gain_scheme not in GAIN_SCHEMES:
            raise ValueError(f"unknown gain scheme {self.gain_scheme!r}")
        expected = self.lambda_ * self.sem_ncg + (1.0 - self.lambda_) * (1.0 - self.score_red)
        if abs(self.final - expected) > 1e-12:
            raise ValueError(
                f"final={self.final} violates the combination identity "
                f"(expected {expected})"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "sem_ncg": self.sem_ncg,
            "score_red": self.score_red,
            "final": self.final,
            "k": self.k,
            "lambda": self.lambda_,
            "red_backend": self.red_backend,
            "embedding_name": self.embedding_name,
            "gain_scheme": self.gain_scheme,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MetricScore":
        return cls(
            sem_ncg=float(data["sem_ncg"]),
            score_red=float(data["score_red"]),
            final=float(data["final"]),
            k=int(data["k"]),
            lambda_=float(data["lambda"]),
            red_backend=data["red_backend"],
            embedding_name=data["embedding_name"],
            gain_scheme=data.get("gain_scheme", "normalized_relevance"),
        )


@dataclass(frozen=True)
class AnnotationRecord:
    """Normalized expert judgments for one (document, system) pair."""

    doc_id: str
    system_id: str
    consistency: float
    relevance: float
    coherence: float
    fluency: float

    def __post_init__(self) -> None:
        for dim in DIMENSIONS:
            _check_unit_range(getattr(self, dim), dim)

    def value(self, dimension: str) -> float:
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension {dimension!r}")
        return float(getattr(self, dimension))

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "system_id": self.system_id,
            "consistency": self.consistency,
            "relevance": self.relevance,
            "coherence": self.coherence,
            "fluency": self.fluency,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AnnotationRecord":
        return cls(
            doc_id=data["doc_id"],
            system_id=data["system_id"],
            consistency=float(data["consistency"]),
            relevance=float(data["relevance"]),
            coherence=float(data["coherence"]),
            fluency=float(data["fluency"]),
        )


@dataclass(frozen=True)
class CorrelationRow:
    """One rank-correlation cell: a metric configuration against one human
    dimension under one reference setting. ``tau`` is None when undefined
    (constant input on either side)."""

    embedding: str
    penalty: str
    setting: str
    dimension: str
    tau: float | None
    n: int
    is_column_max: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "embedding": self.embedding,
            "penalty": self.penalty,
            "setting": self.setting,
            "dimension": self.dimension,
            "tau": self.tau,
            "n": self.n,
            "is_column_max": self.is_column_max,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CorrelationRow":
        tau = data["tau"]
        return cls(
            embedding=data["embedding"],
            penalty=data["penalty"],
            setting=data["setting"],
            dimension=data["dimension"],
            tau=None if tau is None else float(tau),
            n=int(data["n"]),
            is_column_max=bool(data.get("is_column_max", False)),
        )


@dataclass(frozen=True)
class CorrelationReport:
    """A set of correlation rows; per-column maxima are flagged on the rows."""

    rows: tuple[CorrelationRow, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))

    def to_dict(self) -> dict[str, Any]:
        return {"rows": [row.to_dict() for row in self.rows]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CorrelationReport":
        return cls(rows=tuple(CorrelationRow.from_dict(r) for r in data["rows"]))
