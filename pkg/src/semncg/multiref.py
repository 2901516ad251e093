"""Multi-reference ground-truth construction and reference bucketing.

Two ensembling routes are kept deliberately separate even though they coincide
under the current cosine-mean relevance: similarity averaging feeds a single
relevance vector to the ranking builder, while relevance merging averages the
per-reference relevance vectors that each would have produced its own ranking.
Configs record which route produced a score.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .ranking import DEFAULT_GAIN_SCHEME, build_ground_truth, compute_relevance
from .similarity import tokenize
from .types import EmbeddingSet, GroundTruthRanking, RelevanceVector, SentenceSet


def _mean_relevance(
    doc: SentenceSet,
    refs: Sequence[SentenceSet],
    doc_embeds: EmbeddingSet,
    ref_embeds: Sequence[EmbeddingSet],
) -> np.ndarray:
    if not refs:
        raise ValueError("at least one reference is required")
    if len(refs) != len(ref_embeds):
        raise ValueError("one embedding set per reference is required")
    rows = [
        compute_relevance(doc, ref, doc_embeds, embeds).scores
        for ref, embeds in zip(refs, ref_embeds)
    ]
    return np.mean(np.stack(rows), axis=0)


def ensemble_sim_relevance(
    doc: SentenceSet,
    refs: Sequence[SentenceSet],
    doc_embeds: EmbeddingSet,
    ref_embeds: Sequence[EmbeddingSet],
) -> RelevanceVector:
    """Per-sentence relevance averaged over the references: compute each
    reference's relevance vector, then take the sentence-wise mean."""
    return RelevanceVector(
        doc_id=doc.id, scores=_mean_relevance(doc, refs, doc_embeds, ref_embeds)
    )


def ensemble_rel_ranking(
    doc: SentenceSet,
    refs: Sequence[SentenceSet],
    doc_embeds: EmbeddingSet,
    ref_embeds: Sequence[EmbeddingSet],
    scheme: str = DEFAULT_GAIN_SCHEME,
) -> GroundTruthRanking:
    """Merge the per-reference ground truths into one ranking by averaging the
    per-reference relevance sentence-wise, then sorting and assigning gains."""
    merged = RelevanceVector(
        doc_id=doc.id, scores=_mean_relevance(doc, refs, doc_embeds, ref_embeds)
    )
    return build_ground_truth(merged, scheme)


def lexical_overlap(ref: SentenceSet, doc: SentenceSet) -> float:
    """Fraction of reference unigrams (multiset, clipped) found in the document."""
    ref_counts: Counter[str] = Counter()
    for sentence in ref.sentences:
        ref_counts.update(tokenize(sentence))
    doc_counts: Counter[str] = Counter()
    for sentence in doc.sentences:
        doc_counts.update(tokenize(sentence))
    total = sum(ref_counts.values())
    if total == 0:
        return 0.0
    covered = sum(min(count, doc_counts[token]) for token, count in ref_counts.items())
    return covered / total


@dataclass(frozen=True)
class ReferenceBuckets:
    """Reference indices grouped by lexical overlap with the document.

    Indices point into the reference list as supplied; ``overlaps`` is aligned
    the same way. ``order`` lists indices by ascending overlap, ties going to
    the lower original index.
    """

    doc_id: str
    overlaps: tuple[float, ...]
    order: tuple[int, ...]
    lor: int
    mor: int
    hor: int
    lors: tuple[int, ...]
    mors: tuple[int, ...]
    hors: tuple[int, ...]

    @property
    def mixed(self) -> tuple[int, ...]:
        return (self.lor, self.mor, self.hor)

    def for_setting(self, setting: str) -> tuple[int, ...]:
        """Reference indices selected by a reference-setting name."""
        table = {
            "LOR": (self.lor,),
            "MOR": (self.mor,),
            "HOR": (self.hor,),
            "multi-LORs": self.lors,
            "multi-MORs": self.mors,
            "multi-HORs": self.hors,
            "multi-mixed": self.mixed,
        }
        if setting not in table:
            raise ValueError(f"unknown reference setting {setting!r}")
        return table[setting]

    def to_report(self, refs: Sequence[SentenceSet]) -> dict[str, Any]:
        ids = [ref.id for ref in refs]
        return {
            "doc_id": self.doc_id,
            "overlaps": list(self.overlaps),
            "LOR": ids[self.lor],
            "MOR": ids[self.mor],
            "HOR": ids[self.hor],
            "LORs": [ids[i] for i in self.lors],
            "MORs": [ids[i] for i in self.mors],
            "HORs": [ids[i] for i in self.hors],
        }


def bucket_references(
    doc: SentenceSet,
    refs: Sequence[SentenceSet],
    overlaps: Sequence[float] | None = None,
) -> ReferenceBuckets:
    """Rank references by lexical overlap with the document and pick the
    low / median / high singletons plus the bottom-3 / middle-3 / top-3 groups.

    ``overlaps`` may be supplied precomputed (any overlap statistic aligned to
    ``refs``); by default the clipped-unigram containment of each reference in
    the document is used. For an even count the lower-index median is taken.
    """
    n = len(refs)
    if n < 3:
        raise ValueError(f"bucketing needs at least 3 references, got {n}")
    if overlaps is None:
        overlaps = [lexical_overlap(ref, doc) for ref in refs]
    else:
        overlaps = [float(v) for v in overlaps]
        if len(overlaps) != n:
            raise ValueError("one overlap value per reference is required")
    order = tuple(sorted(range(n), key=lambda i: (overlaps[i], i)))
    middle_start = (n - 3) // 2
    return ReferenceBuckets(
        doc_id=doc.id,
        overlaps=tuple(overlaps),
        order=order,
        lor=order[0],
        mor=order[(n - 1) // 2],
        hor=order[-1],
        lors=order[:3],
        mors=order[middle_start : middle_start + 3],
        hors=order[-3:],
    )
