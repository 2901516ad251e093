"""Tokenization and the natively computable similarity backends.

Cosine (over supplied sentence embeddings) and unigram-overlap ROUGE are
computed here; heavyweight learned similarities (BERTScore, MoverScore) enter
the engine only as externally computed matrices via ``load_external_matrix``.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from pathlib import Path
from typing import Sequence

import numpy as np

from .types import EmbeddingSet, SentenceSet, SimilarityMatrix

# ASCII punctuation plus the common typographic variants seen in news text.
_STRIP_CHARS = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~" + "–—‘’“”…«»"

ROUGE_VARIANTS = ("f1", "precision", "recall")


def tokenize(sentence: str) -> list[str]:
    """Lowercase, whitespace-split, and strip punctuation from both ends of
    each token. Internal apostrophes and hyphens survive; tokens that are all
    punctuation are dropped. Deterministic, no external resources."""
    tokens = []
    for word in sentence.lower().split():
        token = word.strip(_STRIP_CHARS)
        if token:
            tokens.append(token)
    return tokens


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity clamped to [0, 1]; 0 if either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("cosine expects 1-dimensional vectors")
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    if u.shape[0] < 1:
        raise ValueError("vectors must have at least one component")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValueError("vectors must be finite")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    value = float(np.dot(u, v)) / (nu * nv)
    return min(1.0, max(0.0, value))


def rouge1_scores(
    candidate: Sequence[str], reference: Sequence[str]
) -> tuple[float, float, float]:
    """Unigram precision, recall, and F1 with clipped multiset counts.

    All three are 0 when either side is empty.
    """
    if not candidate or not reference:
        return 0.0, 0.0, 0.0
    cand_counts = Counter(candidate)
    ref_counts = Counter(reference)
    overlap = sum(min(count, ref_counts[tok]) for tok, count in cand_counts.items())
    precision = overlap / len(candidate)
    recall = overlap / len(reference)
    if precision + recall == 0.0:
        return 0.0, 0.0, 0.0
    f1 = 2.0 * (precision * recall) / (precision + recall)
    return precision, recall, f1


def rouge1_f(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """Unigram-overlap F1 between two token lists."""
    return rouge1_scores(candidate, reference)[2]


def rouge1(candidate: Sequence[str], reference: Sequence[str], variant: str = "f1") -> float:
    """Unigram overlap under the requested variant (f1, precision, or recall)."""
    if variant not in ROUGE_VARIANTS:
        raise ValueError(f"unknown rouge variant {variant!r}, expected one of {ROUGE_VARIANTS}")
    precision, recall, f1 = rouge1_scores(candidate, reference)
    if variant == "precision":
        return precision
    if variant == "recall":
        return recall
    return f1


def _unit_rows(embeds: EmbeddingSet) -> np.ndarray:
    vectors = embeds.vectors
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return vectors / safe


def _check_aligned(sents: SentenceSet, embeds: EmbeddingSet) -> None:
    if len(embeds) != len(sents):
        raise ValueError(
            f"embedding count {len(embeds)} does not match sentence count "
            f"{len(sents)} for {sents.id!r}"
        )


def pairwise_matrix(
    sents_a: SentenceSet,
    sents_b: SentenceSet,
    backend: str,
    embeds_a: EmbeddingSet | None = None,
    embeds_b: EmbeddingSet | None = None,
    rouge_variant: str = "f1",
) -> SimilarityMatrix:
    """Matrix of Sim(a_i, b_j) under a native backend, values in [0, 1].

    ``cosine`` requires embeddings for both sentence sets; ``rouge1`` works
    from the sentences alone.
    """
    if backend == "cosine":
        if embeds_a is None or embeds_b is None:
            raise ValueError("cosine backend requires embeddings for both sentence sets")
        _check_aligned(sents_a, embeds_a)
        _check_aligned(sents_b, embeds_b)
        if embeds_a.dim != embeds_b.dim:
            raise ValueError(f"embedding dims differ: {embeds_a.dim} vs {embeds_b.dim}")
        values = np.clip(_unit_rows(embeds_a) @ _unit_rows(embeds_b).T, 0.0, 1.0)
    elif backend == "rouge1":
        tokens_a = [tokenize(s) for s in sents_a.sentences]
        tokens_b = [tokenize(s) for s in sents_b.sentences]
        values = np.array(
            [[rouge1(ta, tb, rouge_variant) for tb in tokens_b] for ta in tokens_a],
            dtype=np.float64,
        )
    else:
        raise ValueError(f"backend {backend!r} is not natively computable")
    return SimilarityMatrix(
        kind=backend,
        row_ids=tuple(range(len(sents_a))),
        col_ids=tuple(range(len(sents_b))),
        values=values,
    )


def load_external_matrix(path: str | Path) -> SimilarityMatrix:
    """Read an externally computed similarity matrix file.

    Values outside [0, 1] are clamped with a warning; non-finite values are an
    error, as are shape mismatches.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot parse similarity matrix {path}: {exc}") from exc
    for key in ("kind", "row_ids", "col_ids", "values"):
        if key not in data:
            raise ValueError(f"similarity matrix {path} is missing field {key!r}")
    values = np.array(data["values"], dtype=np.float64)
    if values.ndim != 2:
        raise ValueError(f"similarity matrix {path} must hold a 2-d value grid")
    if values.size and not np.all(np.isfinite(values)):
        raise ValueError(f"similarity matrix {path} contains non-finite values")
    if values.shape != (len(data["row_ids"]), len(data["col_ids"])):
        raise ValueError(
            f"similarity matrix {path}: value shape {values.shape} does not match ids"
        )
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        warnings.warn(
            f"similarity matrix {path} has values outside [0, 1]; clamping",
            RuntimeWarning,
            stacklevel=2,
        )
        values = np.clip(values, 0.0, 1.0)
    return SimilarityMatrix(
        kind=data["kind"],
        row_ids=tuple(data["row_ids"]),
        col_ids=tuple(data["col_ids"]),
        values=values,
    )
