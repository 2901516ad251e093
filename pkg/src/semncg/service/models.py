"""Request/response models for the scoring service.

These mirror the portable file formats one-to-one so a client can lift records
straight out of corpus/embedding/matrix files into a request body. The CLI
builds the same models and either executes them in-process or posts them to a
running server.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..types import (
    AnnotationRecord,
    EmbeddingSet,
    MetricScore,
    SentenceSet,
    SimilarityMatrix,
)

Role = Literal["document", "reference", "model_summary"]
Penalty = Literal["none", "cosine", "rouge1", "bertscore", "moverscore", "external"]
GainScheme = Literal["normalized_relevance", "rank_position"]
Setting = Literal[
    "LOR", "MOR", "HOR", "multi-LORs", "multi-MORs", "multi-HORs", "multi-mixed"
]


class SentencesPayload(BaseModel):
    id: str
    role: Role
    sentences: list[str]
    doc_id: str | None = None
    system_id: str | None = None
    extractive: bool | None = None

    def to_domain(self) -> SentenceSet:
        return SentenceSet(
            id=self.id,
            role=self.role,
            sentences=tuple(self.sentences),
            doc_id=self.doc_id,
            system_id=self.system_id,
            extractive=self.extractive,
        )


class EmbeddingPayload(BaseModel):
    sentence_set_id: str
    dim: int
    vectors: list[list[float]]

    def to_domain(self) -> EmbeddingSet:
        return EmbeddingSet(
            sentence_set_id=self.sentence_set_id,
            dim=self.dim,
            vectors=np.array(self.vectors, dtype=np.float64),
        )


class MatrixPayload(BaseModel):
    kind: str
    row_ids: list[int]
    col_ids: list[int]
    values: list[list[float]]
    sentence_set_id: str | None = None

    def to_domain(self) -> SimilarityMatrix:
        return SimilarityMatrix(
            kind=self.kind,
            row_ids=tuple(self.row_ids),
            col_ids=tuple(self.col_ids),
            values=np.array(self.values, dtype=np.float64),
        )


class AnnotationPayload(BaseModel):
    doc_id: str
    system_id: str
    consistency: float
    relevance: float
    coherence: float
    fluency: float

    def to_domain(self) -> AnnotationRecord:
        return AnnotationRecord(
            doc_id=self.doc_id,
            system_id=self.system_id,
            consistency=self.consistency,
            relevance=self.relevance,
            coherence=self.coherence,
            fluency=self.fluency,
        )


class ScoreOptions(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    k: int = 3
    lambda_: float = Field(default=0.5, alias="lambda")
    gain_scheme: GainScheme = "normalized_relevance"
    penalty: Penalty = "cosine"
    rouge_variant: Literal["f1", "precision", "recall"] = "f1"
    embedding_name: str = ""


class ScoreRequest(BaseModel):
    document: SentencesPayload
    reference: SentencesPayload
    model_summary: SentencesPayload
    document_embedding: EmbeddingPayload
    reference_embedding: EmbeddingPayload
    summary_embedding: EmbeddingPayload | None = None
    external_matrix: MatrixPayload | None = None
    options: ScoreOptions = ScoreOptions()


class MultiRefScoreRequest(BaseModel):
    document: SentencesPayload
    references: list[SentencesPayload]
    model_summary: SentencesPayload
    document_embedding: EmbeddingPayload
    reference_embeddings: list[EmbeddingPayload]
    summary_embedding: EmbeddingPayload | None = None
    external_matrix: MatrixPayload | None = None
    ensemble: Literal["sim", "rel"] = "sim"
    options: ScoreOptions = ScoreOptions()


class ScoreResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    doc_id: str | None = None
    system_id: str | None = None
    sem_ncg: float
    score_red: float
    final: float
    k: int
    lambda_: float = Field(alias="lambda")
    red_backend: str
    embedding_name: str
    gain_scheme: str

    @classmethod
    def from_domain(
        cls, score: MetricScore, doc_id: str | None = None, system_id: str | None = None
    ) -> "ScoreResponse":
        return cls(doc_id=doc_id, system_id=system_id, **score.to_dict())


class BucketRequest(BaseModel):
    document: SentencesPayload
    references: list[SentencesPayload]
    overlaps: list[float] | None = None


class BucketResponse(BaseModel):
    doc_id: str
    overlaps: list[float]
    LOR: str
    MOR: str
    HOR: str
    LORs: list[str]
    MORs: list[str]
    HORs: list[str]


class MetaEvalOptions(ScoreOptions):
    setting: Setting = "MOR"
    ensemble: Literal["sim", "rel"] = "sim"
    mor_id: str | None = None
    tau_variant: Literal["a", "b"] = "b"


class MetaEvalRequest(BaseModel):
    corpus: list[SentencesPayload]
    outputs: list[SentencesPayload] = []
    annotations: list[AnnotationPayload]
    embeddings: list[EmbeddingPayload]
    matrices: list[MatrixPayload] = []
    options: MetaEvalOptions = MetaEvalOptions()


class CorrelationRowPayload(BaseModel):
    embedding: str
    penalty: str
    setting: str
    dimension: str
    tau: float | None
    n: int
    is_column_max: bool


class ScoreRowPayload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    doc_id: str
    system_id: str
    setting: str
    sem_ncg: float
    score_red: float
    final: float
    k: int
    lambda_: float = Field(alias="lambda")
    red_backend: str
    embedding_name: str
    gain_scheme: str


class MetaEvalResponse(BaseModel):
    config: dict
    rows: list[CorrelationRowPayload]
    scores: list[ScoreRowPayload]
    skips: list[str]


class SweepRequest(MetaEvalRequest):
    grid: list[float]


class SweepRowPayload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lambda_: float = Field(alias="lambda")
    embedding: str
    penalty: str
    setting: str
    dimension: str
    tau: float | None
    n: int


class SweepResponse(BaseModel):
    config: dict
    rows: list[SweepRowPayload]
    skips: list[str]


class ErrorResponse(BaseModel):
    error: str
