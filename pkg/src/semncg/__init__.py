"""Redundancy-aware rank/gain scoring for extractive summaries.

The engine scores an extractive summary by (1) how much of the ideal,
reference-inferred sentence gain its top-k picks capture, (2) how redundant
those picks are among themselves, and (3) a weighted combination of the two.
Multi-reference ground truths, reference bucketing by lexical overlap, and a
Kendall-tau meta-evaluation harness sit on top.
"""

__version__ = "0.1.0"

from .multiref import (
    bucket_references,
    ensemble_rel_ranking,
    ensemble_sim_relevance,
    lexical_overlap,
)
from .metaeval import MetaEvalConfig, kendall_tau
from .ranking import (
    align_model_summary,
    build_ground_truth,
    compute_relevance,
    sem_ncg_at_k,
)
from .redundancy import redundancy_score
from .scoring import COMBINATION_NOTE, ScoringConfig, combine, score_summary
from .similarity import cosine, load_external_matrix, pairwise_matrix, rouge1, rouge1_f, tokenize
from .types import (
    AnnotationRecord,
    EmbeddingSet,
    GroundTruthRanking,
    MetricScore,
    ModelAlignment,
    RelevanceVector,
    SampleSkipped,
    SentenceSet,
    SimilarityMatrix,
)

__all__ = [
    "__version__",
    "AnnotationRecord",
    "COMBINATION_NOTE",
    "EmbeddingSet",
    "GroundTruthRanking",
    "MetaEvalConfig",
    "MetricScore",
    "ModelAlignment",
    "RelevanceVector",
    "SampleSkipped",
    "SentenceSet",
    "SimilarityMatrix",
    "ScoringConfig",
    "align_model_summary",
    "bucket_references",
    "build_ground_truth",
    "combine",
    "compute_relevance",
    "cosine",
    "ensemble_rel_ranking",
    "ensemble_sim_relevance",
    "kendall_tau",
    "lexical_overlap",
    "load_external_matrix",
    "pairwise_matrix",
    "redundancy_score",
    "rouge1",
    "rouge1_f",
    "score_summary",
    "sem_ncg_at_k",
    "tokenize",
]
