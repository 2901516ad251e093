"""FastAPI application wrapping the scoring engine.

The ``handle_*`` functions hold the request-to-engine plumbing and are called
directly by the CLI when no server is involved; the routes only translate
domain errors into HTTP ones.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..fileio import Corpus, MemoryStore
from ..metaeval import (
    MetaEvalConfig,
    correlate_all,
    lambda_sweep,
    score_corpus,
)
from ..multiref import bucket_references
from ..scoring import ScoringConfig, score_summary
from ..types import SampleSkipped
from .models import (
    BucketRequest,
    BucketResponse,
    MetaEvalRequest,
    MetaEvalResponse,
    MultiRefScoreRequest,
    ScoreOptions,
    ScoreRequest,
    ScoreResponse,
    SweepRequest,
    SweepResponse,
)


def _scoring_config(options: ScoreOptions) -> ScoringConfig:
    return ScoringConfig(
        k=options.k,
        lambda_=options.lambda_,
        gain_scheme=options.gain_scheme,
        penalty=options.penalty,
        rouge_variant=options.rouge_variant,
        embedding_name=options.embedding_name,
    )


def handle_score(request: ScoreRequest) -> ScoreResponse:
    model = request.model_summary.to_domain()
    score = score_summary(
        request.document.to_domain(),
        request.reference.to_domain(),
        model,
        _scoring_config(request.options),
        request.document_embedding.to_domain(),
        request.reference_embedding.to_domain(),
        model_embeds=(
            request.summary_embedding.to_domain() if request.summary_embedding else None
        ),
        external=(
            request.external_matrix.to_domain() if request.external_matrix else None
        ),
    )
    return ScoreResponse.from_domain(score, doc_id=request.document.id, system_id=model.system_id)


def handle_multiref_score(request: MultiRefScoreRequest) -> ScoreResponse:
    model = request.model_summary.to_domain()
    score = score_summary(
        request.document.to_domain(),
        [ref.to_domain() for ref in request.references],
        model,
        _scoring_config(request.options),
        request.document_embedding.to_domain(),
        [embeds.to_domain() for embeds in request.reference_embeddings],
        model_embeds=(
            request.summary_embedding.to_domain() if request.summary_embedding else None
        ),
        external=(
            request.external_matrix.to_domain() if request.external_matrix else None
        ),
        ensemble=request.ensemble,
    )
    return ScoreResponse.from_domain(score, doc_id=request.document.id, system_id=model.system_id)


def handle_bucket_refs(request: BucketRequest) -> BucketResponse:
    refs = [ref.to_domain() for ref in request.references]
    buckets = bucket_references(request.document.to_domain(), refs, overlaps=request.overlaps)
    return BucketResponse(**buckets.to_report(refs))


def _assemble(request: MetaEvalRequest) -> tuple[Corpus, list, MemoryStore, MemoryStore, MetaEvalConfig]:
    corpus = Corpus()
    for payload in list(request.corpus) + list(request.outputs):
        corpus.add(payload.to_domain())
    annotations = [a.to_domain() for a in request.annotations]
    embeddings = MemoryStore(
        {e.sentence_set_id: e.to_domain() for e in request.embeddings}, kind="embedding"
    )
    matrices = MemoryStore(
        {
            m.sentence_set_id: m.to_domain()
            for m in request.matrices
            if m.sentence_set_id is not None
        },
        kind="similarity matrix",
    )
    options = request.options
    config = MetaEvalConfig(
        k=options.k,
        lambda_=options.lambda_,
        gain_scheme=options.gain_scheme,
        penalty=options.penalty,
        rouge_variant=options.rouge_variant,
        embedding_name=options.embedding_name,
        setting=options.setting,
        ensemble=options.ensemble,
        mor_id=options.mor_id,
        tau_variant=options.tau_variant,
    )
    return corpus, annotations, embeddings, matrices, config


def handle_meta_eval(request: MetaEvalRequest) -> MetaEvalResponse:
    corpus, annotations, embeddings, matrices, config = _assemble(request)
    rows, skips = score_corpus(corpus, embeddings, config, matrices=matrices)
    report = correlate_all(rows, annotations, config)
    return MetaEvalResponse(
        config=config.to_dict(),
        rows=[row.to_dict() for row in report.rows],
        scores=[row.to_dict() for row in rows],
        skips=skips,
    )


def handle_sweep(request: SweepRequest) -> SweepResponse:
    corpus, annotations, embeddings, matrices, config = _assemble(request)
    rows, skips = score_corpus(corpus, embeddings, config, matrices=matrices)
    sweep_rows = lambda_sweep(rows, annotations, request.grid, config)
    return SweepResponse(
        config=dict(config.to_dict(), lambda_grid=[float(g) for g in request.grid]),
        rows=[row.to_dict() for row in sweep_rows],
        skips=skips,
    )


app = FastAPI(
    title="semncg",
    version=__version__,
    description="Redundancy-aware rank/gain scoring for extractive summaries",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _run(handler, request):
    try:
        return handler(request)
    except SampleSkipped as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except (KeyError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/score", response_model=ScoreResponse, response_model_by_alias=True)
def score(request: ScoreRequest) -> ScoreResponse:
    return _run(handle_score, request)


@app.post("/multiref-score", response_model=ScoreResponse, response_model_by_alias=True)
def multiref_score(request: MultiRefScoreRequest) -> ScoreResponse:
    return _run(handle_multiref_score, request)


@app.post("/bucket-refs", response_model=BucketResponse)
def bucket_refs(request: BucketRequest) -> BucketResponse:
    return _run(handle_bucket_refs, request)


@app.post("/meta-eval", response_model=MetaEvalResponse, response_model_by_alias=True)
def meta_eval(request: MetaEvalRequest) -> MetaEvalResponse:
    return _run(handle_meta_eval, request)


@app.post("/sweep", response_model=SweepResponse, response_model_by_alias=True)
def sweep(request: SweepRequest) -> SweepResponse:
    return _run(handle_sweep, request)
