"""Command line entry points: ingest, serve, query, eval-sheet, eval-tally."""

import dataclasses
import json
import sys

import click

from iconsearch.config import ServiceConfig, load_config
from iconsearch.corpus import ingest as ingest_corpus
from iconsearch.corpus import save_corpus
from iconsearch.evaluation import generate_sheet
from iconsearch.evaluation import tally as run_tally
from iconsearch.service import SearchEngine, create_app_from_config
from iconsearch.vector_index import build_flat, build_ivf


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(f"{type(exc).__name__}: {exc}")


_ENGINE_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="key=value config file"),
    click.option("--scheme", "scheme_path", type=click.Path(), default=None),
    click.option("--embeddings", "embeddings_path", type=click.Path(), default=None),
    click.option("--metadata", "metadata_path", type=click.Path(), default=None),
    click.option("--adapter-table", "adapter_table_path", type=click.Path(), default=None),
    click.option("--encoder-endpoint", default=None),
]


def engine_options(fn):
    for option in reversed(_ENGINE_OPTIONS):
        fn = option(fn)
    return fn


def _build_config(config_path, **overrides) -> ServiceConfig:
    config = load_config(config_path)
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    return config


def _build_engine(config_path, **overrides) -> SearchEngine:
    try:
        return SearchEngine.from_config(_build_config(config_path, **overrides))
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None


@click.group()
def main():
    """Multimodal and TF-IDF concept search over annotated-image corpora."""


@main.command("ingest")
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True), required=True)
@click.option("--metadata", "metadata_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--ivf-partitions", type=int, default=None)
@click.option("--ivf-seed", type=int, default=0)
def ingest_cmd(embeddings_path, metadata_path, out_dir, ivf_partitions, ivf_seed):
    """Validate a corpus and persist it with its search indices."""
    import pathlib

    try:
        corpus = ingest_corpus(embeddings_path, metadata_path)
        out = pathlib.Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_corpus(corpus, out / "embeddings.icnx", out / "metadata.jsonl")
        flat = build_flat(corpus.matrix, corpus.row_ids())
        flat.save(out / "index.icnx")
        if ivf_partitions:
            ivf = build_ivf(corpus.matrix, corpus.row_ids(), ivf_partitions, ivf_seed)
            ivf.save(out / "index.icnv")
        stats = corpus.stats()
        click.echo(
            json.dumps(
                {
                    "n_images": stats.n_images,
                    "n_assignments": stats.n_assignments,
                    "n_unique_notations": stats.n_unique_notations,
                    "n_unparsed_codes": corpus.n_unparsed_codes,
                    "out_dir": str(out),
                }
            )
        )
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve_cmd(config_path, host, port):
    """Start the HTTP/JSON API (and static UI, when configured)."""
    import uvicorn

    try:
        config = _build_config(config_path, host=host, port=port)
        app = create_app_from_config(config)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


@main.command("query")
@engine_options
@click.option("--q", "query", required=True, help="query string (or adapter table key)")
@click.option("--mode", type=click.Choice(["multimodal", "tfidf"]), default="multimodal")
@click.option("--k", type=int, default=None, help="neighbors to retrieve")
@click.option("--n", type=int, default=None, help="notations to return")
@click.option("--probe", type=int, default=None, help="IVF partitions to probe")
@click.option("--rank", type=click.Choice(["count", "weighted"]), default="count")
def query_cmd(config_path, query, mode, k, n, probe, rank, **paths):
    """Run one search and print the JSON response."""
    engine = _build_engine(config_path, **paths)
    try:
        if mode == "tfidf":
            payload = engine.tfidf(query, n)
        else:
            payload = engine.multimodal(query, k=k, n=n, probe=probe, rank_by=rank)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None
    click.echo(json.dumps(payload, indent=2))


@main.command("eval-sheet")
@engine_options
@click.option("--queries", "queries_path", type=click.Path(exists=True), required=True, help="one query per line")
@click.option("--sheet", "sheet_path", type=click.Path(), required=True)
@click.option("--key", "key_path", type=click.Path(), required=True)
@click.option("--seed", type=int, default=0, help="blinding seed")
@click.option("--k", type=int, default=None, help="neighbors fetched for the multimodal side")
def eval_sheet_cmd(config_path, queries_path, sheet_path, key_path, seed, k, **paths):
    """Generate a blinded side-by-side sheet: multimodal (A) vs TF-IDF (B)."""
    engine = _build_engine(config_path, **paths)
    with open(queries_path, encoding="utf-8") as fh:
        queries = [line.strip() for line in fh if line.strip()]

    def system_a(query):
        payload = engine.multimodal(query, k=k, n=10)
        return [(item["code"], item["label"]) for item in payload["notations"]]

    def system_b(query):
        payload = engine.tfidf(query, n=10)
        return [(item["code"], item["label"]) for item in payload["notations"]]

    try:
        rows = generate_sheet(queries, system_a, system_b, seed, sheet_path, key_path)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None
    click.echo(json.dumps({"rows": len(rows), "sheet": str(sheet_path), "key": str(key_path)}))


@main.command("eval-tally")
@click.option("--responses", "responses_path", type=click.Path(exists=True), required=True)
@click.option("--key", "key_path", type=click.Path(exists=True), required=True)
def eval_tally_cmd(responses_path, key_path):
    """Unblind responses and print the per-system tally."""
    try:
        result = run_tally(responses_path, key_path)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        raise _fail(exc) from None
    click.echo(
        json.dumps(
            {
                "multimodal": dataclasses.asdict(result.system_a),
                "tfidf": dataclasses.asdict(result.system_b),
                "n_responses": result.n_responses,
                "n_no_preference": result.n_no_preference,
            },
            indent=2,
        )
    )


if __name__ == "__main__":
    sys.exit(main())
