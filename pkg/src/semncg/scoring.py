"""Final score combination and the end-to-end scoring pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .multiref import ensemble_rel_ranking, ensemble_sim_relevance
from .ranking import (
    DEFAULT_GAIN_SCHEME,
    DEFAULT_K,
    align_model_summary,
    build_ground_truth,
    compute_relevance,
    sem_ncg_at_k,
)
from .redundancy import EXTERNAL_BACKENDS, NATIVE_BACKENDS, redundancy_score
from .types import (
    EmbeddingSet,
    GAIN_SCHEMES,
    MetricScore,
    SampleSkipped,
    SentenceSet,
    SimilarityMatrix,
)

DEFAULT_LAMBDA = 0.5

PENALTY_BACKENDS = ("none",) + NATIVE_BACKENDS + EXTERNAL_BACKENDS

ENSEMBLE_MODES = ("sim", "rel")

# Worked example, kept next to the formula on purpose:
#   combine(0.67, 0.40, 0.5) = 0.5*0.67 + 0.5*(1 - 0.40) = 0.635
# Combined values of 0.532 / 0.565 / 0.599 for gain scores 0.67 / 0.733 / 0.8
# with a redundancy score of 0.40 at weight 0.5 are sometimes quoted for this
# kind of metric; they are NOT what the formula yields (they would require a
# redundancy score of about 0.60). This engine always computes the literal
# weighted combination: 0.635 / 0.6665 / 0.70 for those inputs.
COMBINATION_NOTE = (
    "combine(sem_ncg, score_red, lam) = lam*sem_ncg + (1-lam)*(1-score_red). "
    "Worked example: combine(0.67, 0.40, 0.5) = 0.635, combine(0.733, 0.40, 0.5)"
    " = 0.6665, combine(0.8, 0.40, 0.5) = 0.70. Quoted combined scores of "
    "0.532/0.565/0.599 for these inputs are inconsistent with the formula: "
    "they would imply a redundancy score of about 0.60, not 0.40. The engine "
    "computes the literal combination and does not reproduce such values."
)


def combine(sem_ncg: float, score_red: float, lam: float) -> float:
    """Weighted trade-off between the gain score and the redundancy penalty:
    lam*sem_ncg + (1-lam)*(1-score_red). All inputs must lie in [0, 1]."""
    for name, value in (("sem_ncg", sem_ncg), ("score_red", score_red), ("lambda", lam)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    return lam * sem_ncg + (1.0 - lam) * (1.0 - score_red)


@dataclass(frozen=True)
class ScoringConfig:
    """Everything needed to reproduce a score from the same inputs."""

    k: int = DEFAULT_K
    lambda_: float = DEFAULT_LAMBDA
    gain_scheme: str = DEFAULT_GAIN_SCHEME
    penalty: str = "cosine"
    rouge_variant: str = "f1"
    embedding_name: str = ""

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lambda_}")
        if self.gain_scheme not in GAIN_SCHEMES:
            raise ValueError(f"unknown gain scheme {self.gain_scheme!r}")
        if self.penalty not in PENALTY_BACKENDS:
            raise ValueError(
                f"unknown penalty backend {self.penalty!r}, expected one of {PENALTY_BACKENDS}"
            )
        if self.rouge_variant not in ("f1", "precision", "recall"):
            raise ValueError(f"unknown rouge variant {self.rouge_variant!r}")


def score_summary(
    doc: SentenceSet,
    refs: SentenceSet | Sequence[SentenceSet],
    model: SentenceSet,
    config: ScoringConfig,
    doc_embeds: EmbeddingSet,
    ref_embeds: EmbeddingSet | Sequence[EmbeddingSet],
    model_embeds: EmbeddingSet | None = None,
    external: SimilarityMatrix | None = None,
    ensemble: str = "sim",
) -> MetricScore:
    """Run the full pipeline: relevance, ground truth, alignment, gain score,
    redundancy score, combination.

    With several references the ground truth is ensembled per ``ensemble``
    ("sim" averages similarities, "rel" merges per-reference relevance); with
    one reference both reduce to the single-reference pipeline. A summary or
    document shorter than k raises SampleSkipped with the reason.
    """
    if ensemble not in ENSEMBLE_MODES:
        raise ValueError(f"unknown ensemble mode {ensemble!r}, expected one of {ENSEMBLE_MODES}")
    ref_list = [refs] if isinstance(refs, SentenceSet) else list(refs)
    embed_list = [ref_embeds] if isinstance(ref_embeds, EmbeddingSet) else list(ref_embeds)
    if not ref_list:
        raise ValueError("at least one reference is required")

    if len(model) < config.k:
        raise SampleSkipped(
            f"summary {model.id!r} has {len(model)} sentences, fewer than k={config.k}"
        )
    if len(doc) < config.k:
        raise SampleSkipped(
            f"document {doc.id!r} has {len(doc)} sentences, fewer than k={config.k}"
        )

    if len(ref_list) == 1:
        relevance = compute_relevance(doc, ref_list[0], doc_embeds, embed_list[0])
        ground_truth = build_ground_truth(relevance, config.gain_scheme)
    elif ensemble == "sim":
        relevance = ensemble_sim_relevance(doc, ref_list, doc_embeds, embed_list)
        ground_truth = build_ground_truth(relevance, config.gain_scheme)
    else:
        ground_truth = ensemble_rel_ranking(
            doc, ref_list, doc_embeds, embed_list, config.gain_scheme
        )

    alignment = align_model_summary(model, doc)
    sem_ncg = sem_ncg_at_k(ground_truth, alignment, config.k)

    if config.penalty == "none":
        score_red = 0.0
        lam = 1.0
        backend = "none"
    else:
        score_red = redundancy_score(
            model,
            config.k,
            config.penalty,
            embeds=model_embeds,
            external=external,
            rouge_variant=config.rouge_variant,
        )
        lam = config.lambda_
        backend = config.penalty

    final = combine(sem_ncg, score_red, lam)
    return MetricScore(
        sem_ncg=sem_ncg,
        score_red=score_red,
        final=final,
        k=config.k,
        lambda_=lam,
        red_backend=backend,
        embedding_name=config.embedding_name,
        gain_scheme=config.gain_scheme,
    )
