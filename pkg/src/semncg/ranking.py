"""Ground-truth ranking construction and the normalized cumulative gain score.

The ideal ranking of document sentences is inferred from their embedding
similarity to a reference summary; a model's extractive summary is aligned
back to document indices and scored by the gain its top-k picks capture
relative to the ideal top-k.
"""

from __future__ import annotations

import numpy as np

from .similarity import rouge1_f, tokenize
from .types import (
    AlignmentMatch,
    EmbeddingSet,
    GAIN_SCHEMES,
    GroundTruthRanking,
    ModelAlignment,
    RelevanceVector,
    SentenceSet,
)

DEFAULT_K = 3
DEFAULT_GAIN_SCHEME = "normalized_relevance"


def compute_relevance(
    doc: SentenceSet,
    ref: SentenceSet,
    doc_embeds: EmbeddingSet,
    ref_embeds: EmbeddingSet,
) -> RelevanceVector:
    """Relevance of each document sentence: its mean clamped cosine similarity
    over the reference sentences."""
    if len(doc_embeds) != len(doc):
        raise ValueError(f"document embeddings misaligned for {doc.id!r}")
    if len(ref_embeds) != len(ref):
        raise ValueError(f"reference embeddings misaligned for {ref.id!r}")
    if doc_embeds.dim != ref_embeds.dim:
        raise ValueError(
            f"embedding dims differ: {doc_embeds.dim} vs {ref_embeds.dim}"
        )
    doc_v = doc_embeds.vectors
    ref_v = ref_embeds.vectors
    doc_norms = np.linalg.norm(doc_v, axis=1, keepdims=True)
    ref_norms = np.linalg.norm(ref_v, axis=1, keepdims=True)
    unit_doc = doc_v / np.where(doc_norms == 0.0, 1.0, doc_norms)
    unit_ref = ref_v / np.where(ref_norms == 0.0, 1.0, ref_norms)
    sims = np.clip(unit_doc @ unit_ref.T, 0.0, 1.0)
    return RelevanceVector(doc_id=doc.id, scores=sims.mean(axis=1))


def build_ground_truth(
    rel: RelevanceVector, scheme: str = DEFAULT_GAIN_SCHEME
) -> GroundTruthRanking:
    """Sort sentences by descending relevance (ties break toward the lower
    index) and assign normalized gains under the chosen scheme.

    normalized_relevance: gain_i = r_i / sum(r); an all-zero relevance vector
    degrades to uniform gains. rank_position: gains fall linearly with rank,
    the top sentence largest, normalized to sum 1.
    """
    if scheme not in GAIN_SCHEMES:
        raise ValueError(f"unknown gain scheme {scheme!r}, expected one of {GAIN_SCHEMES}")
    scores = rel.scores
    n = len(scores)
    order = tuple(sorted(range(n), key=lambda i: (-scores[i], i)))
    if scheme == "normalized_relevance":
        total = float(scores.sum())
        if total > 0.0:
            gains = scores / total
        else:
            gains = np.full(n, 1.0 / n)
    else:
        if n == 1:
            gains = np.array([1.0])
        else:
            denominator = n * (n - 1) / 2.0
            gains = np.empty(n, dtype=np.float64)
            for position, index in enumerate(order):
                gains[index] = (n - (position + 1)) / denominator
    return GroundTruthRanking(doc_id=rel.doc_id, order=order, gains=gains, gain_scheme=scheme)


def align_model_summary(model: SentenceSet, doc: SentenceSet) -> ModelAlignment:
    """Map each model sentence to a document sentence index.

    A model sentence whose normalized tokens equal exactly one document
    sentence is an exact match (score 1.0). Everything else falls back to the
    document sentence with the highest unigram-overlap F1, ties broken toward
    the lower index; a sentence with zero overlap everywhere still maps (to
    index 0, score 0.0) so callers can filter rather than fail.
    """
    doc_tokens = [tokenize(s) for s in doc.sentences]
    exact_index: dict[tuple[str, ...], list[int]] = {}
    for idx, tokens in enumerate(doc_tokens):
        exact_index.setdefault(tuple(tokens), []).append(idx)

    matches = []
    for position, sentence in enumerate(model.sentences):
        tokens = tokenize(sentence)
        hits = exact_index.get(tuple(tokens), ())
        if len(hits) == 1:
            matches.append(
                AlignmentMatch(
                    model_index=position, doc_index=hits[0], score=1.0, method="exact"
                )
            )
            continue
        best_index = 0
        best_score = -1.0
        for idx, candidate in enumerate(doc_tokens):
            score = rouge1_f(tokens, candidate)
            if score > best_score:
                best_index = idx
                best_score = score
        matches.append(
            AlignmentMatch(
                model_index=position,
                doc_index=best_index,
                score=best_score,
                method="fuzzy",
            )
        )
    return ModelAlignment(model_summary_id=model.id, matches=tuple(matches))


def sem_ncg_at_k(gt: GroundTruthRanking, align: ModelAlignment, k: int) -> float:
    """Cumulative gain captured by the first k model sentences over the ideal
    cumulative gain at k.

    A document sentence extracted more than once contributes its gain once, so
    the score never exceeds 1; redundancy is penalized elsewhere, not rewarded
    here. Both sums gather gains in ascending index order, so a model whose
    top-k equals the ideal top-k as a set scores exactly 1.0.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k > len(align):
        raise ValueError(f"k={k} exceeds model sentence count {len(align)}")
    n = len(gt.gains)
    if k > n:
        raise ValueError(f"k={k} exceeds document sentence count {n}")
    picked = {align.matches[i].doc_index for i in range(k)}
    if any(idx < 0 or idx >= n for idx in picked):
        raise ValueError("alignment refers to document indices outside the ranking")
    cg = float(sum(gt.gains[idx] for idx in sorted(picked)))
    icg = float(sum(gt.gains[idx] for idx in sorted(gt.order[:k])))
    if icg == 0.0:
        return 1.0
    return cg / icg
