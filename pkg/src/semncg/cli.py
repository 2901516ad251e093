"""Command-line client.

Every scoring subcommand builds the same request models the service accepts
and either executes them in-process or posts them to a running server
(``--server URL``); file reading and report writing stay on the client side
either way. Option precedence: command-line flag, then config file, then the
built-in default; ``SEMNCG_EMBED_DIR`` supplies the default embedding
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - version dependent
    import tomli as tomllib

from .fileio import (
    Corpus,
    EmbeddingStore,
    MatrixStore,
    dump_json,
    dump_json_pretty,
    iter_jsonl,
    load_corpus,
)
from .ingest import ingest_corpus
from .metaeval import render_report_csv, render_sweep_csv
from .service.app import (
    handle_bucket_refs,
    handle_meta_eval,
    handle_multiref_score,
    handle_score,
    handle_sweep,
)
from .service.models import (
    AnnotationPayload,
    BucketRequest,
    EmbeddingPayload,
    MatrixPayload,
    MetaEvalOptions,
    MetaEvalRequest,
    MultiRefScoreRequest,
    ScoreOptions,
    ScoreRequest,
    SentencesPayload,
    SweepRequest,
)
from .types import SampleSkipped

EMBED_DIR_ENV = "SEMNCG_EMBED_DIR"


class CliError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc


class Options:
    """Merged view over CLI flags, config file, and defaults."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self._args = args
        self._config = config

    def get(self, key: str, default: Any = None, env: str | None = None) -> Any:
        value = getattr(self._args, key, None)
        if value is not None:
            return value
        for name in (key, key.rstrip("_")):  # config files say "lambda", not "lambda_"
            if name in self._config:
                return self._config[name]
        if env is not None and os.environ.get(env):
            return os.environ[env]
        return default

    def score_options(self) -> ScoreOptions:
        return ScoreOptions(
            k=int(self.get("k", 3)),
            lambda_=float(self.get("lambda_", 0.5)),
            gain_scheme=self.get("gain_scheme", "normalized_relevance"),
            penalty=self.get("penalty", "cosine"),
            rouge_variant=self.get("rouge_variant", "f1"),
            embedding_name=self.get("embedding_name", self._default_embedding_name()),
        )

    def meta_options(self) -> MetaEvalOptions:
        base = self.score_options()
        return MetaEvalOptions(
            **base.model_dump(by_alias=True),
            setting=self.get("setting", "MOR"),
            ensemble=self.get("ensemble", "sim"),
            mor_id=self.get("mor_id"),
            tau_variant=self.get("tau_variant", "b"),
        )

    def embed_dir(self, required: bool = True) -> Path | None:
        value = self.get("embeddings", env=EMBED_DIR_ENV)
        if value is None:
            if required:
                raise CliError(
                    "no embedding directory: pass --embeddings, set it in the "
                    f"config file, or export {EMBED_DIR_ENV}"
                )
            return None
        return Path(value)

    def matrix_dir(self) -> Path | None:
        value = self.get("matrices")
        return None if value is None else Path(value)

    def _default_embedding_name(self) -> str:
        value = self.get("embeddings", env=EMBED_DIR_ENV)
        return Path(value).name if value else ""


def _execute(args: argparse.Namespace, path: str, request, handler: Callable):
    """Run a request in-process or against ``--server``; returns a plain dict."""
    server = getattr(args, "server", None)
    if not server:
        return handler(request).model_dump(by_alias=True)
    import httpx

    url = server.rstrip("/") + path
    try:
        response = httpx.post(url, json=request.model_dump(by_alias=True), timeout=600.0)
    except httpx.HTTPError as exc:
        raise CliError(f"cannot reach server at {url}: {exc}") from exc
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"server rejected the request ({response.status_code}): {detail}")
    return response.json()


def _read_payloads(path: str | Path, model) -> list:
    return [model(**record) for _, record in iter_jsonl(path)]


def _embedding_payloads(directory: Path) -> list[EmbeddingPayload]:
    if not directory.is_dir():
        raise CliError(f"embedding directory {directory} does not exist")
    payloads = []
    for path in sorted(directory.glob("*.json")):
        payloads.append(EmbeddingPayload(**json.loads(path.read_text(encoding="utf-8"))))
    return payloads


def _matrix_payloads(directory: Path | None) -> list[MatrixPayload]:
    if directory is None or not directory.is_dir():
        return []
    payloads = []
    for path in sorted(directory.glob("*.json")):
        try:
            payloads.append(MatrixPayload(**json.loads(path.read_text(encoding="utf-8"))))
        except (ValueError, TypeError):
            continue
    return payloads


def _sentences_payload(corpus: Corpus, set_id: str) -> SentencesPayload:
    try:
        return SentencesPayload(**corpus.get(set_id).to_dict())
    except KeyError as exc:
        raise CliError(str(exc)) from exc


def _embedding_payload(store: EmbeddingStore, set_id: str) -> EmbeddingPayload:
    try:
        return EmbeddingPayload(**store.load(set_id).to_dict())
    except KeyError as exc:
        raise CliError(str(exc)) from exc


def _matrix_payload(args, options: Options, summary_id: str, penalty: str) -> MatrixPayload | None:
    if penalty not in ("bertscore", "moverscore", "external"):
        return None
    directory = options.matrix_dir()
    if directory is None:
        raise CliError(f"penalty {penalty!r} needs --matrices DIR with per-summary matrix files")
    try:
        matrix = MatrixStore(directory).load(summary_id)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    payload = matrix.to_dict()
    payload["sentence_set_id"] = summary_id
    return MatrixPayload(**payload)


def _corpus_paths(args: argparse.Namespace) -> list[str]:
    paths = [args.corpus]
    if getattr(args, "outputs", None):
        paths.append(args.outputs)
    return paths


# ----------------------------------------------------------------- commands


def _cmd_ingest(args: argparse.Namespace, options: Options) -> int:
    extractive = None
    if args.extractive_ids:
        extractive = [piece.strip() for piece in args.extractive_ids.split(",") if piece.strip()]
    result = ingest_corpus(args.input, args.out, fmt=args.format, extractive_ids=extractive)
    print(dump_json({"out": str(Path(args.out)), "counts": result.counts}))
    return 0


def _common_score_parts(args, options: Options):
    corpus = load_corpus(*_corpus_paths(args))
    store = EmbeddingStore(options.embed_dir())
    score_options = options.score_options()
    model = _sentences_payload(corpus, args.model)
    summary_embedding = (
        _embedding_payload(store, args.model) if score_options.penalty == "cosine" else None
    )
    external = _matrix_payload(args, options, args.model, score_options.penalty)
    return corpus, store, score_options, model, summary_embedding, external


def _cmd_score(args: argparse.Namespace, options: Options) -> int:
    corpus, store, score_options, model, summary_embedding, external = _common_score_parts(
        args, options
    )
    request = ScoreRequest(
        document=_sentences_payload(corpus, args.doc),
        reference=_sentences_payload(corpus, args.ref),
        model_summary=model,
        document_embedding=_embedding_payload(store, args.doc),
        reference_embedding=_embedding_payload(store, args.ref),
        summary_embedding=summary_embedding,
        external_matrix=external,
        options=score_options,
    )
    print(dump_json(_execute(args, "/score", request, handle_score)))
    return 0


def _cmd_multiref_score(args: argparse.Namespace, options: Options) -> int:
    corpus, store, score_options, model, summary_embedding, external = _common_score_parts(
        args, options
    )
    ref_ids = [piece.strip() for piece in args.refs.split(",") if piece.strip()]
    if not ref_ids:
        raise CliError("--refs must list at least one reference id")
    request = MultiRefScoreRequest(
        document=_sentences_payload(corpus, args.doc),
        references=[_sentences_payload(corpus, rid) for rid in ref_ids],
        model_summary=model,
        document_embedding=_embedding_payload(store, args.doc),
        reference_embeddings=[_embedding_payload(store, rid) for rid in ref_ids],
        summary_embedding=summary_embedding,
        external_matrix=external,
        ensemble=options.get("ensemble", "sim"),
        options=score_options,
    )
    print(dump_json(_execute(args, "/multiref-score", request, handle_multiref_score)))
    return 0


def _cmd_bucket_refs(args: argparse.Namespace, options: Options) -> int:
    corpus = load_corpus(*_corpus_paths(args))
    doc_ids = [args.doc] if args.doc else sorted(corpus.documents)
    lines = []
    for doc_id in doc_ids:
        if doc_id not in corpus.documents:
            raise CliError(f"no document with id {doc_id!r}")
        refs = corpus.references.get(doc_id, [])
        if len(refs) < 3:
            print(
                f"skipping {doc_id}: {len(refs)} references, bucketing needs 3",
                file=sys.stderr,
            )
            continue
        request = BucketRequest(
            document=SentencesPayload(**corpus.documents[doc_id].to_dict()),
            references=[SentencesPayload(**ref.to_dict()) for ref in refs],
        )
        lines.append(dump_json(_execute(args, "/bucket-refs", request, handle_bucket_refs)))
    text = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _meta_request(args: argparse.Namespace, options: Options) -> MetaEvalRequest:
    meta_options = options.meta_options()
    corpus_payloads = _read_payloads(args.corpus, SentencesPayload)
    outputs_payloads = (
        _read_payloads(args.outputs, SentencesPayload) if args.outputs else []
    )
    annotations = _read_payloads(args.annotations, AnnotationPayload)
    embeddings = _embedding_payloads(options.embed_dir())
    matrices = _matrix_payloads(options.matrix_dir())
    return MetaEvalRequest(
        corpus=corpus_payloads,
        outputs=outputs_payloads,
        annotations=annotations,
        embeddings=embeddings,
        matrices=matrices,
        options=meta_options,
    )


def _write_common_outputs(out_dir: Path, response: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    skips = response.get("skips", [])
    skip_lines = [f"# config: {dump_json(response['config'])}"] + list(skips)
    (out_dir / "skips.log").write_text("".join(line + "\n" for line in skip_lines), "utf-8")


def _cmd_meta_eval(args: argparse.Namespace, options: Options) -> int:
    request = _meta_request(args, options)
    response = _execute(args, "/meta-eval", request, handle_meta_eval)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.csv").write_text(
        render_report_csv(response["rows"], response["config"]), "utf-8"
    )
    (out_dir / "report.json").write_text(
        dump_json_pretty({"config": response["config"], "rows": response["rows"]}), "utf-8"
    )
    (out_dir / "scores.jsonl").write_text(
        "".join(dump_json(row) + "\n" for row in response["scores"]), "utf-8"
    )
    _write_common_outputs(out_dir, response)
    print(dump_json({"out": str(out_dir), "rows": len(response["rows"]), "scored": len(response["scores"]), "skips": len(response["skips"])}))
    return 0


def _parse_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(piece) for piece in spec.split(":"))
    except ValueError as exc:
        raise CliError(f"--lambda-grid must look like a:b:step, got {spec!r}") from exc
    if step <= 0:
        raise CliError("--lambda-grid step must be positive")
    values = []
    index = 0
    while True:
        value = round(start + index * step, 10)
        if value > stop + 1e-9:
            break
        values.append(value)
        index += 1
    if not values:
        raise CliError(f"--lambda-grid {spec!r} produces no values")
    for value in values:
        if not 0.0 <= value <= 1.0:
            raise CliError(f"lambda grid value {value} outside [0, 1]")
    return values


def _cmd_sweep(args: argparse.Namespace, options: Options) -> int:
    base = _meta_request(args, options)
    grid = _parse_grid(args.lambda_grid)
    request = SweepRequest(**base.model_dump(by_alias=True), grid=grid)
    response = _execute(args, "/sweep", request, handle_sweep)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "sweep.csv").write_text(
        render_sweep_csv(response["rows"], response["config"]), "utf-8"
    )
    _write_common_outputs(out_dir, response)
    print(dump_json({"out": str(out_dir), "rows": len(response["rows"]), "skips": len(response["skips"])}))
    return 0


def _cmd_serve(args: argparse.Namespace, options: Options) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# ------------------------------------------------------------------- parser


def _add_scoring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="summary depth (default 3)")
    parser.add_argument(
        "--lambda",
        dest="lambda_",
        metavar="LAMBDA",
        type=float,
        help="combination weight (default 0.5)",
    )
    parser.add_argument(
        "--gain-scheme", choices=("normalized_relevance", "rank_position"), dest="gain_scheme"
    )
    parser.add_argument(
        "--penalty",
        choices=("none", "cosine", "rouge1", "bertscore", "moverscore", "external"),
        help="redundancy backend (default cosine)",
    )
    parser.add_argument("--rouge-variant", choices=("f1", "precision", "recall"), dest="rouge_variant")
    parser.add_argument("--embedding-name", dest="embedding_name", help="provenance label for the embeddings")
    parser.add_argument("--embeddings", help=f"embedding directory (default ${EMBED_DIR_ENV})")
    parser.add_argument("--matrices", help="directory of external similarity-matrix files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semncg",
        description="Redundancy-aware rank/gain scoring for extractive summaries.",
    )
    parser.add_argument("--config", help="TOML config file with default option values")
    parser.add_argument("--server", help="run against a server URL instead of in-process")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="normalize a corpus dump into engine JSONL files")
    ingest.add_argument("--input", required=True)
    ingest.add_argument("--out", required=True)
    ingest.add_argument("--format", choices=("auto", "native", "summeval"), default="auto")
    ingest.add_argument(
        "--extractive-ids",
        dest="extractive_ids",
        help="comma-separated system ids to flag extractive (default: all)",
    )

    score = commands.add_parser("score", help="score one summary against one reference")
    score.add_argument("--corpus", required=True)
    score.add_argument("--outputs", help="optional extra JSONL file with model summaries")
    score.add_argument("--doc", required=True)
    score.add_argument("--ref", required=True)
    score.add_argument("--model", required=True)
    _add_scoring_flags(score)

    multi = commands.add_parser("multiref-score", help="score one summary against several references")
    multi.add_argument("--corpus", required=True)
    multi.add_argument("--outputs")
    multi.add_argument("--doc", required=True)
    multi.add_argument("--refs", required=True, help="comma-separated reference ids")
    multi.add_argument("--model", required=True)
    multi.add_argument("--ensemble", choices=("sim", "rel"))
    _add_scoring_flags(multi)

    buckets = commands.add_parser("bucket-refs", help="group references by lexical overlap")
    buckets.add_argument("--corpus", required=True)
    buckets.add_argument("--outputs")
    buckets.add_argument("--doc", help="only this document (default: all)")
    buckets.add_argument("--out", help="write JSONL here instead of stdout")

    meta = commands.add_parser("meta-eval", help="correlate scores with human annotations")
    meta.add_argument("--corpus", required=True)
    meta.add_argument("--outputs", required=True)
    meta.add_argument("--annotations", required=True)
    meta.add_argument("--out", required=True)
    meta.add_argument("--setting", choices=("LOR", "MOR", "HOR", "multi-LORs", "multi-MORs", "multi-HORs", "multi-mixed"))
    meta.add_argument("--ensemble", choices=("sim", "rel"))
    meta.add_argument("--mor-id", dest="mor_id", help="pin MOR to this reference id (or ::suffix)")
    meta.add_argument("--tau-variant", choices=("a", "b"), dest="tau_variant")
    _add_scoring_flags(meta)

    sweep = commands.add_parser("sweep", help="meta-eval across a lambda grid")
    sweep.add_argument("--corpus", required=True)
    sweep.add_argument("--outputs", required=True)
    sweep.add_argument("--annotations", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--lambda-grid", dest="lambda_grid", required=True, help="a:b:step, e.g. 0:1:0.1")
    sweep.add_argument("--setting", choices=("LOR", "MOR", "HOR", "multi-LORs", "multi-MORs", "multi-HORs", "multi-mixed"))
    sweep.add_argument("--ensemble", choices=("sim", "rel"))
    sweep.add_argument("--mor-id", dest="mor_id")
    sweep.add_argument("--tau-variant", choices=("a", "b"), dest="tau_variant")
    _add_scoring_flags(sweep)

    serve = commands.add_parser("serve", help="run the scoring service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


_COMMANDS = {
    "ingest": _cmd_ingest,
    "score": _cmd_score,
    "multiref-score": _cmd_multiref_score,
    "bucket-refs": _cmd_bucket_refs,
    "meta-eval": _cmd_meta_eval,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        options = Options(args, _load_config(args.config))
        return _COMMANDS[args.command](args, options)
    except (CliError, SampleSkipped, ValueError, KeyError, OSError) as exc:
        message = str(exc) if not isinstance(exc, KeyError) else str(exc.args[0])
        print(dump_json({"error": message}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
