"""Self-referenced redundancy score.

Each of the summary's top-k sentences is compared against the other k-1; the
score is the mean of the per-sentence maxima, in [0, 1], lower meaning less
redundant.
"""

from __future__ import annotations

from .similarity import pairwise_matrix
from .types import EmbeddingSet, SentenceSet, SimilarityMatrix

NATIVE_BACKENDS = ("cosine", "rouge1")
EXTERNAL_BACKENDS = ("bertscore", "moverscore", "external")


def redundancy_score(
    summary: SentenceSet,
    k: int,
    backend: str,
    embeds: EmbeddingSet | None = None,
    external: SimilarityMatrix | None = None,
    rouge_variant: str = "f1",
) -> float:
    """Mean over the first k summary sentences of each sentence's maximum
    similarity to any other of those sentences.

    The similarity toward sentence i is read as Sim(x_j, x_i), i.e. row j and
    column i of the matrix; external matrices must be oriented that way (moot
    for symmetric native backends). k must be at least 2: a single sentence
    has no other sentence to be redundant with.
    """
    if k < 2:
        raise ValueError("redundancy needs k >= 2; a 1-sentence summary has no pairs")
    if k > len(summary):
        raise ValueError(
            f"k={k} exceeds the {len(summary)} sentences of summary {summary.id!r}"
        )

    if backend in NATIVE_BACKENDS:
        head_sentences = SentenceSet(
            id=summary.id, role=summary.role, sentences=summary.sentences[:k]
        )
        head_embeds = None
        if backend == "cosine":
            if embeds is None:
                raise ValueError("cosine redundancy requires summary embeddings")
            if len(embeds) != len(summary):
                raise ValueError(f"embeddings misaligned for summary {summary.id!r}")
            head_embeds = EmbeddingSet(
                sentence_set_id=embeds.sentence_set_id,
                dim=embeds.dim,
                vectors=embeds.vectors[:k],
            )
        matrix = pairwise_matrix(
            head_sentences,
            head_sentences,
            backend,
            embeds_a=head_embeds,
            embeds_b=head_embeds,
            rouge_variant=rouge_variant,
        )
    elif backend in EXTERNAL_BACKENDS:
        if external is None:
            raise ValueError(f"{backend} redundancy requires an external similarity matrix")
        if external.kind not in (backend, "external"):
            raise ValueError(
                f"matrix of kind {external.kind!r} cannot back the {backend!r} penalty"
            )
        matrix = external
    else:
        raise ValueError(f"unknown redundancy backend {backend!r}")

    total = 0.0
    for i in range(k):
        best = None
        for j in range(k):
            if j == i:
                continue
            value = matrix.entry(j, i)
            if best is None or value > best:
                best = value
        total += best
    return total / k
