"""Meta-evaluation harness: sample filtering, rank correlation against human
judgments, weight sweeps, and report assembly.

Scoring fans out per (document, system) pair; correlation and report assembly
run single-threaded over sorted keys so identical inputs always produce
byte-identical reports.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .fileio import Corpus, EmbeddingStore, MatrixStore, MemoryStore, dump_json
from .multiref import ReferenceBuckets, bucket_references
from .redundancy import EXTERNAL_BACKENDS
from .scoring import ScoringConfig, combine, score_summary
from .types import (
    AnnotationRecord,
    CorrelationReport,
    CorrelationRow,
    DIMENSIONS,
    MetricScore,
    REFERENCE_SETTINGS,
    SampleSkipped,
    SentenceSet,
)

TAU_VARIANTS = ("a", "b")


@dataclass(frozen=True)
class MetaEvalConfig:
    """Scoring configuration plus the meta-evaluation knobs."""

    k: int = 3
    lambda_: float = 0.5
    gain_scheme: str = "normalized_relevance"
    penalty: str = "cosine"
    rouge_variant: str = "f1"
    embedding_name: str = ""
    setting: str = "MOR"
    ensemble: str = "sim"
    mor_id: str | None = None
    tau_variant: str = "b"

    def __post_init__(self) -> None:
        self.scoring()  # validates the shared fields
        if self.setting not in REFERENCE_SETTINGS:
            raise ValueError(
                f"unknown reference setting {self.setting!r}, expected one of {REFERENCE_SETTINGS}"
            )
        if self.ensemble not in ("sim", "rel"):
            raise ValueError(f"unknown ensemble mode {self.ensemble!r}")
        if self.tau_variant not in TAU_VARIANTS:
            raise ValueError(f"unknown tau variant {self.tau_variant!r}")

    def scoring(self) -> ScoringConfig:
        return ScoringConfig(
            k=self.k,
            lambda_=self.lambda_,
            gain_scheme=self.gain_scheme,
            penalty=self.penalty,
            rouge_variant=self.rouge_variant,
            embedding_name=self.embedding_name,
        )

    def penalty_label(self) -> str:
        return "w/o redundancy" if self.penalty == "none" else self.penalty

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lambda": self.lambda_,
            "gain_scheme": self.gain_scheme,
            "penalty": self.penalty,
            "rouge_variant": self.rouge_variant,
            "embedding": self.embedding_name,
            "setting": self.setting,
            "ensemble": self.ensemble,
            "mor_id": self.mor_id,
            "tau_variant": self.tau_variant,
        }


@dataclass(frozen=True)
class ScoreRow:
    """One scored (document, system) pair under one reference setting."""

    doc_id: str
    system_id: str
    setting: str
    score: MetricScore

    def to_dict(self) -> dict:
        out = {"doc_id": self.doc_id, "system_id": self.system_id, "setting": self.setting}
        out.update(self.score.to_dict())
        return out


@dataclass(frozen=True)
class SweepRow:
    lambda_: float
    embedding: str
    penalty: str
    setting: str
    dimension: str
    tau: float | None
    n: int

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_,
            "embedding": self.embedding,
            "penalty": self.penalty,
            "setting": self.setting,
            "dimension": self.dimension,
            "tau": self.tau,
            "n": self.n,
        }


def filter_samples(
    corpus: Corpus, k: int
) -> tuple[list[tuple[str, str]], list[str]]:
    """Keep (doc, system) pairs whose system is extractive (a missing flag
    counts as extractive) and whose summary has at least k sentences. Returns
    the eligible pairs and one skip-log line per exclusion."""
    eligible: list[tuple[str, str]] = []
    skips: list[str] = []
    for (doc_id, system_id) in sorted(corpus.summaries):
        summary = corpus.summaries[(doc_id, system_id)]
        if summary.extractive is False:
            skips.append(f"{doc_id}\t{system_id}\tsystem flagged non-extractive")
            continue
        if len(summary) < k:
            skips.append(
                f"{doc_id}\t{system_id}\tsummary has {len(summary)} sentences, fewer than k={k}"
            )
            continue
        eligible.append((doc_id, system_id))
    return eligible, skips


def kendall_tau(
    x: Sequence[float], y: Sequence[float], variant: str = "b"
) -> float | None:
    """Kendall rank correlation; "b" (tie-corrected, the default) or "a".

    Returns None when undefined: a constant vector on either side leaves the
    denominator empty. Serialize the missing value as null, never 0.
    """
    if variant not in TAU_VARIANTS:
        raise ValueError(f"unknown tau variant {variant!r}, expected one of {TAU_VARIANTS}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    n = x.shape[0]
    if n < 2:
        raise ValueError("kendall_tau needs at least 2 observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        return None
    tie_free = np.unique(x).size == n and np.unique(y).size == n
    if variant == "b" and not tie_free:
        result = float(stats.kendalltau(x, y, variant="b").statistic)
        return None if np.isnan(result) else result
    # Without ties, tau-b reduces to (C - D) / n0; the integer ratio keeps
    # perfectly concordant data at exactly 1.0, which the sqrt form does not.
    concordant_minus_discordant = 0
    for i in range(n - 1):
        concordant_minus_discordant += int(
            np.sum(np.sign(x[i + 1 :] - x[i]) * np.sign(y[i + 1 :] - y[i]))
        )
    value = concordant_minus_discordant / (n * (n - 1) / 2.0)
    return min(1.0, max(-1.0, value))


def correlate(
    rows: Sequence[ScoreRow],
    annotations: Sequence[AnnotationRecord],
    dimension: str,
    variant: str = "b",
) -> tuple[float | None, int]:
    """Tau between final scores and one human dimension over the inner join on
    (doc_id, system_id). Raises if the join is empty."""
    if dimension not in DIMENSIONS:
        raise ValueError(f"unknown dimension {dimension!r}, expected one of {DIMENSIONS}")
    annotation_map = {(a.doc_id, a.system_id): a for a in annotations}
    pairs = []
    for row in sorted(rows, key=lambda r: (r.doc_id, r.system_id)):
        record = annotation_map.get((row.doc_id, row.system_id))
        if record is not None:
            pairs.append((row.score.final, record.value(dimension)))
    if not pairs:
        raise ValueError("empty join between scores and annotations")
    if len(pairs) < 2:
        return None, len(pairs)
    x = [p[0] for p in pairs]
    y = [p[1] for p in pairs]
    return kendall_tau(x, y, variant), len(pairs)


def build_report(rows: Sequence[CorrelationRow]) -> CorrelationReport:
    """Flag the per-column maximum, a column being one (setting, dimension)
    pair; tied maxima are all flagged, missing taus never are."""
    best: dict[tuple[str, str], float] = {}
    for row in rows:
        if row.tau is None:
            continue
        key = (row.setting, row.dimension)
        if key not in best or row.tau > best[key]:
            best[key] = row.tau
    flagged = tuple(
        replace(
            row,
            is_column_max=(
                row.tau is not None and best.get((row.setting, row.dimension)) == row.tau
            ),
        )
        for row in sorted(
            rows, key=lambda r: (r.embedding, r.penalty, r.setting, r.dimension)
        )
    )
    return CorrelationReport(rows=flagged)


def _resolve_mor(
    buckets: ReferenceBuckets, refs: Sequence[SentenceSet], mor_id: str | None
) -> ReferenceBuckets:
    if mor_id is None:
        return buckets
    for index, ref in enumerate(refs):
        if ref.id == mor_id or ref.id.endswith(f"::{mor_id}"):
            return replace(buckets, mor=index)
    raise SampleSkipped(f"no reference matching MOR override {mor_id!r}")


def score_corpus(
    corpus: Corpus,
    embeddings: EmbeddingStore | MemoryStore,
    config: MetaEvalConfig,
    matrices: MatrixStore | MemoryStore | None = None,
) -> tuple[list[ScoreRow], list[str]]:
    """Score every eligible (document, system) pair under the configured
    reference setting. Unscorable pairs are skipped with a recorded reason,
    never silently dropped."""
    eligible, skips = filter_samples(corpus, config.k)
    scoring = config.scoring()
    needs_matrix = config.penalty in EXTERNAL_BACKENDS
    rows: list[ScoreRow] = []
    bucket_cache: dict[str, ReferenceBuckets] = {}

    for doc_id, system_id in eligible:
        summary = corpus.summaries[(doc_id, system_id)]
        try:
            doc = corpus.documents.get(doc_id)
            if doc is None:
                raise SampleSkipped(f"document {doc_id!r} not in corpus")
            refs = corpus.references.get(doc_id, [])
            if len(refs) < 3:
                raise SampleSkipped(
                    f"document {doc_id!r} has {len(refs)} references, bucketing needs 3"
                )
            if doc_id not in bucket_cache:
                bucket_cache[doc_id] = bucket_references(doc, refs)
            buckets = _resolve_mor(bucket_cache[doc_id], refs, config.mor_id)
            selected = [refs[i] for i in buckets.for_setting(config.setting)]

            try:
                doc_embeds = embeddings.load(doc.id)
                ref_embeds = [embeddings.load(ref.id) for ref in selected]
                summary_embeds = (
                    embeddings.load(summary.id) if config.penalty == "cosine" else None
                )
            except KeyError as exc:
                raise SampleSkipped(str(exc)) from exc

            external = None
            if needs_matrix:
                if matrices is None:
                    raise SampleSkipped("no similarity-matrix directory configured")
                try:
                    external = matrices.load(summary.id)
                except KeyError as exc:
                    raise SampleSkipped(str(exc)) from exc

            score = score_summary(
                doc,
                selected,
                summary,
                scoring,
                doc_embeds,
                ref_embeds,
                model_embeds=summary_embeds,
                external=external,
                ensemble=config.ensemble,
            )
        except SampleSkipped as exc:
            skips.append(f"{doc_id}\t{system_id}\t{exc}")
            continue
        rows.append(
            ScoreRow(doc_id=doc_id, system_id=system_id, setting=config.setting, score=score)
        )
    return rows, skips


def correlate_all(
    rows: Sequence[ScoreRow],
    annotations: Sequence[AnnotationRecord],
    config: MetaEvalConfig,
) -> CorrelationReport:
    out = []
    for dimension in DIMENSIONS:
        tau, n = correlate(rows, annotations, dimension, config.tau_variant)
        out.append(
            CorrelationRow(
                embedding=config.embedding_name,
                penalty=config.penalty_label(),
                setting=config.setting,
                dimension=dimension,
                tau=tau,
                n=n,
            )
        )
    return build_report(out)


def lambda_sweep(
    rows: Sequence[ScoreRow],
    annotations: Sequence[AnnotationRecord],
    grid: Sequence[float],
    config: MetaEvalConfig,
) -> list[SweepRow]:
    """Recombine the already-computed gain and redundancy scores at each grid
    weight and correlate against every dimension. The expensive parts of the
    pipeline run once, outside this function."""
    if not grid:
        raise ValueError("lambda grid must not be empty")
    for lam in grid:
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda grid value {lam} outside [0, 1]")
    annotation_map = {(a.doc_id, a.system_id): a for a in annotations}
    joined = [
        (row, annotation_map[(row.doc_id, row.system_id)])
        for row in sorted(rows, key=lambda r: (r.doc_id, r.system_id))
        if (row.doc_id, row.system_id) in annotation_map
    ]
    if not joined:
        raise ValueError("empty join between scores and annotations")
    out: list[SweepRow] = []
    for lam in grid:
        finals = [combine(row.score.sem_ncg, row.score.score_red, lam) for row, _ in joined]
        for dimension in DIMENSIONS:
            human = [record.value(dimension) for _, record in joined]
            tau = kendall_tau(finals, human, config.tau_variant) if len(joined) >= 2 else None
            out.append(
                SweepRow(
                    lambda_=float(lam),
                    embedding=config.embedding_name,
                    penalty=config.penalty_label(),
                    setting=config.setting,
                    dimension=dimension,
                    tau=tau,
                    n=len(joined),
                )
            )
    return out


def _csv_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(config_echo: Mapping, header: Sequence[str], rows: Sequence[Mapping]) -> str:
    buffer = io.StringIO()
    buffer.write(f"# config: {dump_json(dict(config_echo))}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(column)) for column in header])
    return buffer.getvalue()


REPORT_COLUMNS = ("embedding", "penalty", "setting", "dimension", "tau", "n", "is_column_max")
SWEEP_COLUMNS = ("lambda", "embedding", "penalty", "setting", "dimension", "tau", "n")


def render_report_csv(rows: Sequence[Mapping], config_echo: Mapping) -> str:
    """Report CSV from correlation row dicts; the effective config is echoed
    on a leading comment line."""
    return _render_csv(config_echo, REPORT_COLUMNS, rows)


def render_sweep_csv(rows: Sequence[Mapping], config_echo: Mapping) -> str:
    return _render_csv(config_echo, SWEEP_COLUMNS, rows)
