"""The `doris` command: ingest -> expand -> annotate -> index -> serve/query.

Exit codes: 0 success, 1 data error (unreadable or inconsistent input
files), 2 usage error (click's default for bad invocations).
"""

from __future__ import annotations

import dataclasses
import os
import signal
import socket
import sys
from pathlib import Path

import click

from . import __version__, annotator, corpus, textprep
from .expansion import (ExpansionConfig, expand_taxonomy, load_embeddings,
                        load_lda_overrides)
from .index import IndexFormatError, build_index, load_index, save_index
from .service import (ApiConfig, BadRequest, ServiceState, build_query,
                      create_app, dumps_api, has_any_parameter,
                      search_payload)
from .taxonomy import TaxonomyError, load_taxonomy, save_taxonomy


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _read_corpus(path: str) -> list[corpus.Document]:
    try:
        load = corpus.parse_corpus(path)
    except OSError as exc:
        _fail(str(exc))
    for issue in load.issues:
        click.echo(f"{path}: {issue}", err=True)
    if load.errors:
        _fail(f"{len(load.errors)} corpus error(s) in {path}")
    return load.documents


def _read_taxonomy(path: str):
    try:
        return load_taxonomy(path)
    except (OSError, TaxonomyError) as exc:
        _fail(str(exc))


def _read_annotations(path: str) -> list[corpus.AnnotationStatement]:
    try:
        statements, issues = corpus.parse_annotations(path)
    except OSError as exc:
        _fail(str(exc))
    for issue in issues:
        click.echo(f"{path}: {issue}", err=True)
    if issues:
        _fail(f"{len(issues)} malformed line(s) in {path}")
    return statements


@click.group()
@click.version_option(version=__version__, prog_name="doris")
def main():
    """Explore an annotated corpus of historical texts."""


@main.command()
@click.option("--corpus", "corpus_path", required=True, metavar="FILE",
              help="JSONL corpus file.")
@click.option("--annotations", "annotations_path", metavar="FILE",
              help="Annotation triples to cross-check.")
@click.option("--taxonomy", "taxonomy_path", metavar="FILE",
              help="Taxonomy for resolving annotated topic ids.")
def ingest(corpus_path, annotations_path, taxonomy_path):
    """Parse a corpus and print a validation report."""
    documents = _read_corpus(corpus_path)
    statements = _read_annotations(annotations_path) if annotations_path else []
    tax = _read_taxonomy(taxonomy_path) if taxonomy_path else None
    report = corpus.validate_corpus(documents, statements, tax)
    click.echo(report.to_text())
    if not report.ok:
        sys.exit(1)


@main.group("taxonomy")
def taxonomy_group():
    """Taxonomy maintenance."""


@taxonomy_group.command("validate")
@click.argument("path", metavar="FILE")
def taxonomy_validate(path):
    """Check a taxonomy file: structure, parents, acyclicity."""
    tax = _read_taxonomy(path)
    rules = sum(len(n.own_rules) for n in tax.nodes.values())
    click.echo(f"OK: {len(tax.nodes)} topics, {len(tax.roots)} roots, "
               f"{rules} keyword rules")
    for warning in tax.warnings:
        click.echo(f"warning: {warning}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, metavar="FILE")
@click.option("--taxonomy", "taxonomy_path", required=True, metavar="FILE")
@click.option("--embeddings", "embeddings_path", metavar="FILE",
              help="Word-vector file; omit to skip embedding expansion.")
@click.option("--lda-k", type=int, default=None, help="LDA topic count.")
@click.option("--lda-iters", type=int, default=None,
              help="Gibbs sweeps over the corpus.")
@click.option("--seed", type=int, default=None, help="Sampler RNG seed.")
@click.option("--cooccur-min-count", type=int, default=None)
@click.option("--cooccur-min-pmi", type=float, default=None)
@click.option("--embed-threshold", type=float, default=None)
@click.option("--lda-overrides", "overrides_path", metavar="FILE",
              help='JSON {"topicIndex": "topicId" | null} review file.')
@click.option("--stopwords", "stopwords_path", metavar="FILE")
@click.option("-o", "--out", "out_path", required=True, metavar="FILE")
def expand(corpus_path, taxonomy_path, embeddings_path, lda_k, lda_iters,
           seed, cooccur_min_count, cooccur_min_pmi, embed_threshold,
           overrides_path, stopwords_path, out_path):
    """Grow topic keyword sets from corpus statistics."""
    documents = _read_corpus(corpus_path)
    tax = _read_taxonomy(taxonomy_path)
    overrides = {}
    for name, value in (("lda_k", lda_k), ("lda_iterations", lda_iters),
                        ("rng_seed", seed),
                        ("cooccur_min_count", cooccur_min_count),
                        ("cooccur_min_pmi", cooccur_min_pmi),
                        ("embed_threshold", embed_threshold)):
        if value is not None:
            overrides[name] = value
    try:
        cfg = dataclasses.replace(ExpansionConfig(), **overrides)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    table = None
    if embeddings_path:
        try:
            table, issues = load_embeddings(embeddings_path)
        except (OSError, ValueError) as exc:
            _fail(str(exc))
        for issue in issues:
            click.echo(f"{embeddings_path}: {issue}", err=True)
    try:
        stopwords = textprep.load_stopwords(stopwords_path)
    except OSError as exc:
        _fail(str(exc))
    lda_overrides = None
    if overrides_path:
        try:
            lda_overrides = load_lda_overrides(overrides_path)
        except (OSError, ValueError) as exc:
            _fail(str(exc))
    try:
        expanded = expand_taxonomy(tax, documents, table, cfg,
                                   stopwords=stopwords,
                                   lda_overrides=lda_overrides)
    except ValueError as exc:
        _fail(str(exc))
    save_taxonomy(expanded, out_path)
    before = sum(len(n.own_rules) for n in tax.nodes.values())
    after = sum(len(n.own_rules) for n in expanded.nodes.values())
    click.echo(f"wrote {out_path}: {len(expanded.nodes)} topics, "
               f"{after - before} new rules", err=True)


@main.command()
@click.option("--corpus", "corpus_path", required=True, metavar="FILE")
@click.option("--taxonomy", "taxonomy_path", required=True, metavar="FILE")
@click.option("--min-evidence", type=float,
              default=annotator.DEFAULT_MIN_EVIDENCE, show_default=True,
              help="Evidence threshold for emitting a statement.")
@click.option("-o", "--out", "out_path", required=True, metavar="FILE")
def annotate(corpus_path, taxonomy_path, min_evidence, out_path):
    """Annotate documents with topics; write schema:about triples."""
    documents = _read_corpus(corpus_path)
    tax = _read_taxonomy(taxonomy_path)
    statements = annotator.annotate_corpus(documents, tax,
                                           min_evidence=min_evidence)
    corpus.write_annotations(statements, out_path)
    topics = len({s.topic_id for s in statements})
    click.echo(f"annotated {len(documents)} documents: "
               f"{len(statements)} statements, {topics} topics", err=True)


@main.command("index")
@click.option("--corpus", "corpus_path", required=True, metavar="FILE")
@click.option("--annotations", "annotations_path", required=True,
              metavar="FILE")
@click.option("--taxonomy", "taxonomy_path", required=True, metavar="FILE")
@click.option("-o", "--out", "out_path", required=True, metavar="FILE")
def index_command(corpus_path, annotations_path, taxonomy_path, out_path):
    """Build the search index artifact."""
    documents = _read_corpus(corpus_path)
    statements = _read_annotations(annotations_path)
    tax = _read_taxonomy(taxonomy_path)
    report = corpus.validate_corpus(documents, statements, tax)
    for doc_id in report.dangling_docs:
        click.echo(f"warning: annotation for unknown document {doc_id!r} "
                   "skipped", err=True)
    for topic_id in report.dangling_topics:
        click.echo(f"warning: annotation for unknown topic {topic_id!r} "
                   "skipped", err=True)
    built = build_index(documents, statements, tax)
    save_index(built, out_path)
    click.echo(f"wrote {out_path}: {len(documents)} documents, "
               f"version {built.build_hash}", err=True)


def _index_path_or_fail(index_path: str | None) -> str:
    path = os.environ.get("DORIS_INDEX") or index_path
    if not path:
        raise click.UsageError("no index given: pass --index or set DORIS_INDEX")
    return path


@main.command()
@click.option("--index", "index_path", metavar="FILE",
              help="Index artifact (DORIS_INDEX overrides).")
@click.option("--taxonomy", "taxonomy_path", required=True, metavar="FILE")
@click.option("--corpus", "corpus_path", metavar="FILE",
              help="Source corpus path, recorded for reference.")
@click.option("--bind", default="127.0.0.1:8765", show_default=True,
              metavar="HOST:PORT", help="Port 0 picks a free port.")
@click.option("--static", "static_dir", metavar="DIR",
              help="Built UI bundle to serve at /.")
@click.option("--page-size", type=int, default=10, show_default=True)
@click.option("--facet-k", type=int, default=5, show_default=True)
@click.option("--allow-reload", is_flag=True,
              help="Enable /api/admin/reload and SIGHUP reload.")
def serve(index_path, taxonomy_path, corpus_path, bind, static_dir,
          page_size, facet_k, allow_reload):
    """Serve the HTTP API (and UI, if built) over the index."""
    import uvicorn

    index_path = _index_path_or_fail(index_path)
    host, _, port_text = bind.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        raise click.UsageError(f"malformed --bind {bind!r}, want HOST:PORT")
    if not host:
        raise click.UsageError(f"malformed --bind {bind!r}, want HOST:PORT")
    try:
        config = ApiConfig(index_path=Path(index_path),
                           taxonomy_path=Path(taxonomy_path),
                           corpus_path=Path(corpus_path) if corpus_path else None,
                           bind_address=bind,
                           static_dir=Path(static_dir) if static_dir else None,
                           page_size=page_size, facet_k=facet_k,
                           allow_reload=allow_reload)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    state = ServiceState(config)
    try:
        state.load()
    except (OSError, IndexFormatError, TaxonomyError) as exc:
        _fail(str(exc))
    app = create_app(config, state)
    if allow_reload and hasattr(signal, "SIGHUP"):
        signal.signal(signal.SIGHUP, lambda *_: state.load())
    try:
        sock = socket.create_server((host, port))
    except OSError as exc:
        _fail(f"cannot bind {bind}: {exc}")
    chosen = sock.getsockname()[1]
    click.echo(f"listening on http://{host}:{chosen}")
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])


@main.command()
@click.argument("text", metavar="QUERY")
@click.option("--author", "authors", multiple=True, metavar="NAME")
@click.option("--kind", "kinds", multiple=True, metavar="KIND")
@click.option("--topic", "topics", multiple=True, metavar="TOPIC_ID")
@click.option("--year-from", metavar="YEAR")
@click.option("--year-to", metavar="YEAR")
@click.option("--page", type=int, default=0, show_default=True)
@click.option("--page-size", type=int, default=10, show_default=True)
@click.option("--facet-k", type=int, default=5, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@click.option("--index", "index_path", metavar="FILE",
              help="Index artifact (DORIS_INDEX overrides).")
def query(text, authors, kinds, topics, year_from, year_to, page, page_size,
          facet_k, fmt, index_path):
    """Search the index; --format json matches /api/search byte for byte."""
    index_path = _index_path_or_fail(index_path)
    if not has_any_parameter(text, authors, kinds, topics, year_from,
                             year_to):
        raise click.UsageError(
            "empty query: give search words or at least one filter")
    if page < 0:
        raise click.UsageError("--page must be >= 0")
    try:
        parsed, impossible = build_query(text, authors, kinds, topics,
                                         year_from, year_to)
    except BadRequest as exc:
        raise click.UsageError(str(exc))
    try:
        idx = load_index(index_path)
    except (OSError, IndexFormatError) as exc:
        _fail(str(exc))
    payload = search_payload(idx, parsed, impossible, page, page_size,
                             facet_k)
    if fmt == "json":
        sys.stdout.write(dumps_api(payload))
        return
    click.echo(f"total: {payload['totalCount']}")
    for i, hit in enumerate(payload["hits"], start=1 + page * page_size):
        click.echo(f"{i:3}. {hit['date']}  {hit['author']} — {hit['title']} "
                   f"[{hit['kind']}]  ({hit['score']:.4f})")
        if hit["snippet"]:
            click.echo(f"     {hit['snippet']}")
    if payload["topicFacet"]:
        facet = ", ".join(f"{f['topicId']} ({f['count']})"
                          for f in payload["topicFacet"])
        click.echo(f"topics: {facet}")


if __name__ == "__main__":
    main()
