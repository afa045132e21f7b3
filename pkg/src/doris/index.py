"""Inverted index with positional postings, BM25 ranking, facets, and the
stacked-bucket aggregation views.

Queries are conjunctive: a document must match every clause and every
filter. Within one filter the selected values are alternatives (a document
has a single author, so author={A,B} means A or B); topic filters widen to
the topic's descendants. The index is immutable once built and is persisted
as a versioned JSON artifact.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import textprep
from .corpus import (AnnotationStatement, Document, DocumentKind, KIND_ORDER)
from .taxonomy import TopicTaxonomy, descendants

INDEX_FORMAT = "doris.index"
INDEX_VERSION = 1

BM25_K1 = 1.2
BM25_B = 0.75

GENERAL_SEGMENT = "(general)"


class IndexFormatError(ValueError):
    pass


class IndexVersionError(IndexFormatError):
    """Artifact from another format version; rebuild with `doris index`."""


class InvalidMode(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    token: str


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class Query:
    clauses: tuple = ()
    authors: frozenset[str] = frozenset()
    kinds: frozenset[DocumentKind] = frozenset()
    topic_ids: frozenset[str] = frozenset()
    year_range: tuple[int | None, int | None] | None = None

    def is_empty(self) -> bool:
        return (not self.clauses and not self.authors and not self.kinds
                and not self.topic_ids and self.year_range is None)


def parse_query_text(text: str) -> tuple:
    """Turn query text into clauses: double-quoted spans become phrases,
    bare words become word clauses."""
    clauses: list = []
    for quoted, bare in _split_quoted(text):
        if quoted is not None:
            tokens = tuple(textprep.tokenize(quoted))
            if len(tokens) == 1:
                clauses.append(Word(tokens[0]))
            elif tokens:
                clauses.append(Phrase(tokens))
        else:
            for token in textprep.tokenize(bare):
                clauses.append(Word(token))
    return tuple(clauses)


def _split_quoted(text: str):
    parts = text.split('"')
    for i, part in enumerate(parts):
        if i % 2 == 1:
            yield part, None
        else:
            yield None, part


@dataclass(frozen=True)
class DocMeta:
    title: str
    author: str
    date: dt.date
    kind: DocumentKind
    length: int  # body length in tokens


@dataclass(frozen=True)
class Hit:
    doc_id: str
    score: float
    title: str
    author: str
    date: str
    kind: str
    snippet: str


@dataclass(frozen=True)
class SearchResult:
    total_count: int
    hits: tuple[Hit, ...]
    topic_facet: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Bucket:
    key: str
    total: int
    segments: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class AggregationView:
    mode: str  # author_kind | year_kind | author_subtopic
    parent_topic: str | None
    buckets: tuple[Bucket, ...]


@dataclass
class SearchIndex:
    postings: dict[str, dict[str, tuple[int, ...]]]
    doc_meta: dict[str, DocMeta]
    doc_bodies: dict[str, str]
    topic_docs: dict[str, frozenset[str]]
    doc_topics: dict[str, frozenset[str]]
    topic_children: dict[str, tuple[str, ...]]
    topic_closure: dict[str, frozenset[str]]  # topic plus all descendants
    author_order: list[str]
    avg_doc_length: float
    build_hash: str = ""
    all_docs: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.all_docs:
            self.all_docs = frozenset(self.doc_meta)


def build_index(documents: list[Document],
                annotations: list[AnnotationStatement],
                tax: TopicTaxonomy) -> SearchIndex:
    """Index tokenized bodies, metadata, and topic annotations.

    Annotation statements referencing unknown documents or topics are
    skipped; run validation first to surface them.
    """
    docs = sorted(documents, key=lambda d: d.id)
    postings: dict[str, dict[str, list[int]]] = {}
    doc_meta: dict[str, DocMeta] = {}
    doc_bodies: dict[str, str] = {}
    total_length = 0
    for doc in docs:
        tokens = textprep.tokenize(doc.body)
        total_length += len(tokens)
        doc_meta[doc.id] = DocMeta(doc.title, doc.author, doc.date, doc.kind,
                                   len(tokens))
        doc_bodies[doc.id] = doc.body
        for position, token in enumerate(tokens):
            postings.setdefault(token, {}).setdefault(doc.id, []).append(position)

    topic_docs: dict[str, set[str]] = {}
    doc_topics: dict[str, set[str]] = {d.id: set() for d in docs}
    for statement in annotations:
        if statement.doc_id not in doc_meta or statement.topic_id not in tax.nodes:
            continue
        topic_docs.setdefault(statement.topic_id, set()).add(statement.doc_id)
        doc_topics[statement.doc_id].add(statement.topic_id)

    first_date: dict[str, dt.date] = {}
    for doc in docs:
        if doc.author not in first_date or doc.date < first_date[doc.author]:
            first_date[doc.author] = doc.date
    author_order = sorted(first_date, key=lambda a: (first_date[a], a))

    closures = {t: frozenset({t} | descendants(tax, t)) for t in tax.nodes}

    index = SearchIndex(
        postings={t: {d: tuple(p) for d, p in by_doc.items()}
                  for t, by_doc in sorted(postings.items())},
        doc_meta=doc_meta,
        doc_bodies=doc_bodies,
        topic_docs={t: frozenset(ds) for t, ds in sorted(topic_docs.items())},
        doc_topics={d: frozenset(ts) for d, ts in doc_topics.items()},
        topic_children=dict(tax.children),
        topic_closure=closures,
        author_order=author_order,
        avg_doc_length=(total_length / len(docs)) if docs else 0.0,
    )
    index.build_hash = _payload_hash(_to_payload(index))
    return index


# ---------------------------------------------------------------- queries

def _phrase_docs(index: SearchIndex, tokens: tuple[str, ...]) -> set[str]:
    by_token = []
    for token in tokens:
        docs = index.postings.get(token)
        if not docs:
            return set()
        by_token.append(docs)
    candidates = set(by_token[0])
    for docs in by_token[1:]:
        candidates &= set(docs)
    return {d for d in candidates if _phrase_count(index, tokens, d) > 0}


def _phrase_count(index: SearchIndex, tokens: tuple[str, ...],
                  doc_id: str) -> int:
    starts = set(index.postings[tokens[0]].get(doc_id, ()))
    for offset, token in enumerate(tokens[1:], start=1):
        positions = index.postings[token].get(doc_id, ())
        starts &= {p - offset for p in positions}
        if not starts:
            return 0
    return len(starts)


def evaluate(index: SearchIndex, query: Query) -> list[str]:
    """Doc ids matching all clauses and filters, sorted ascending."""
    result: set[str] | None = None
    for clause in query.clauses:
        if isinstance(clause, Word):
            docs = set(index.postings.get(clause.token, ()))
        else:
            docs = _phrase_docs(index, clause.tokens)
        result = docs if result is None else (result & docs)
        if not result:
            return []
    if result is None:
        result = set(index.all_docs)

    if query.authors:
        result = {d for d in result
                  if index.doc_meta[d].author in query.authors}
    if query.kinds:
        result = {d for d in result if index.doc_meta[d].kind in query.kinds}
    if query.topic_ids:
        allowed: set[str] = set()
        for topic_id in query.topic_ids:
            for t in index.topic_closure.get(topic_id, frozenset({topic_id})):
                allowed |= index.topic_docs.get(t, frozenset())
        result &= allowed
    if query.year_range is not None:
        lo, hi = query.year_range
        result = {d for d in result
                  if (lo is None or index.doc_meta[d].date.year >= lo)
                  and (hi is None or index.doc_meta[d].date.year <= hi)}
    return sorted(result)


# ---------------------------------------------------------------- ranking

def _idf(index: SearchIndex, df: int) -> float:
    n = len(index.doc_meta)
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def _bm25_term(index: SearchIndex, tf: int, df: int, doc_length: int) -> float:
    if tf == 0 or df == 0:
        return 0.0
    norm = BM25_K1 * (1.0 - BM25_B + BM25_B * doc_length / index.avg_doc_length)
    return _idf(index, df) * tf * (BM25_K1 + 1.0) / (tf + norm)


def score_doc(index: SearchIndex, query: Query, doc_id: str) -> float:
    """BM25 (k1=1.2, b=0.75) summed over clauses. A phrase contributes the
    summed idf of its tokens with tf = phrase occurrence count."""
    meta = index.doc_meta[doc_id]
    score = 0.0
    for clause in query.clauses:
        if isinstance(clause, Word):
            positions = index.postings.get(clause.token, {}).get(doc_id, ())
            df = len(index.postings.get(clause.token, {}))
            score += _bm25_term(index, len(positions), df, meta.length)
        else:
            tf = _phrase_count(index, clause.tokens, doc_id)
            if tf == 0:
                continue
            idf = sum(_idf(index, len(index.postings.get(t, {})))
                      for t in clause.tokens)
            norm = BM25_K1 * (1.0 - BM25_B
                              + BM25_B * meta.length / index.avg_doc_length)
            score += idf * tf * (BM25_K1 + 1.0) / (tf + norm)
    return score


def _snippet(index: SearchIndex, query: Query, doc_id: str,
             limit: int = 200) -> str:
    body = index.doc_bodies[doc_id]
    sentences = textprep.split_sentences(doc_id, body)
    if not sentences:
        return ""
    chosen = sentences[0]
    for sentence in sentences:
        if _sentence_hits_query(sentence, query):
            chosen = sentence
            break
    text = body[chosen.char_span[0]:chosen.char_span[1]]
    if len(text) > limit:
        text = text[:limit] + "…"
    return text


def _sentence_hits_query(sentence: textprep.Sentence, query: Query) -> bool:
    for clause in query.clauses:
        if isinstance(clause, Word):
            if clause.token in sentence.tokens:
                return True
        else:
            n = len(clause.tokens)
            if any(sentence.tokens[i:i + n] == clause.tokens
                   for i in range(len(sentence.tokens) - n + 1)):
                return True
    return False


def rank(index: SearchIndex, query: Query, doc_ids: list[str]) -> list[Hit]:
    """Hits for the given docs, ordered by (score desc, doc id asc)."""
    scored = sorted(((score_doc(index, query, d), d) for d in doc_ids),
                    key=lambda pair: (-pair[0], pair[1]))
    hits = []
    for score, doc_id in scored:
        meta = index.doc_meta[doc_id]
        hits.append(Hit(doc_id, score, meta.title, meta.author,
                        meta.date.isoformat(), meta.kind.value,
                        _snippet(index, query, doc_id)))
    return hits


def topic_facet(index: SearchIndex, doc_ids: list[str], k: int = 5,
                exclude: frozenset[str] = frozenset(),
                ) -> list[tuple[str, int]]:
    """Top-k (topic, doc count) over the result docs, excluding topics that
    are already query filters."""
    counts: dict[str, int] = {}
    for doc_id in doc_ids:
        for topic_id in index.doc_topics.get(doc_id, frozenset()):
            if topic_id in exclude:
                continue
            counts[topic_id] = counts.get(topic_id, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def search(index: SearchIndex, query: Query, page: int = 0,
           page_size: int = 10, facet_k: int = 5) -> SearchResult:
    doc_ids = evaluate(index, query)
    hits = rank(index, query, doc_ids)
    start = page * page_size
    return SearchResult(
        total_count=len(doc_ids),
        hits=tuple(hits[start:start + page_size]),
        topic_facet=tuple(topic_facet(index, doc_ids, facet_k,
                                      exclude=query.topic_ids)))


# ----------------------------------------------------------- aggregations

def _kind_segments(index: SearchIndex, doc_ids: list[str]) -> tuple:
    counts: dict[DocumentKind, int] = {}
    for doc_id in doc_ids:
        kind = index.doc_meta[doc_id].kind
        counts[kind] = counts.get(kind, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: KIND_ORDER[item[0]])
    return tuple((kind.value, n) for kind, n in ordered)


def aggregate(index: SearchIndex, doc_ids: list[str], mode: str,
              query: Query | None = None,
              parent_topic: str | None = None) -> AggregationView:
    """Stacked-bucket distribution of the result docs.

    author_kind: bucket per author (temporal order), segment per kind.
    year_kind: bucket per year ascending; requires the query to be
    filtered to exactly one author. author_subtopic: bucket per author,
    one overlapping segment per child of parent_topic plus "(general)" for
    docs matching only the parent; bucket totals count docs once.
    """
    if mode == "author_kind":
        buckets = []
        for author in index.author_order:
            docs = [d for d in doc_ids if index.doc_meta[d].author == author]
            if not docs:
                continue
            buckets.append(Bucket(author, len(docs),
                                  _kind_segments(index, docs)))
        return AggregationView(mode, None, tuple(buckets))

    if mode == "year_kind":
        if query is None or len(query.authors) != 1:
            raise InvalidMode(
                "year_kind needs the query restricted to a single author")
        years = sorted({index.doc_meta[d].date.year for d in doc_ids})
        buckets = []
        for year in years:
            docs = [d for d in doc_ids
                    if index.doc_meta[d].date.year == year]
            buckets.append(Bucket(str(year), len(docs),
                                  _kind_segments(index, docs)))
        return AggregationView(mode, None, tuple(buckets))

    if mode == "author_subtopic":
        if parent_topic is None:
            raise InvalidMode("author_subtopic needs a parent topic")
        children = index.topic_children.get(parent_topic)
        if children is None:
            raise InvalidMode(f"unknown topic {parent_topic!r}")
        if not children:
            raise InvalidMode(f"topic {parent_topic!r} has no children")
        parent_set = set()
        for t in index.topic_closure[parent_topic]:
            parent_set |= index.topic_docs.get(t, frozenset())
        child_sets = {}
        for child in children:
            covered = set()
            for t in index.topic_closure[child]:
                covered |= index.topic_docs.get(t, frozenset())
            child_sets[child] = covered
        buckets = []
        for author in index.author_order:
            bucket_docs = {d for d in doc_ids
                           if index.doc_meta[d].author == author} & parent_set
            if not bucket_docs:
                continue
            segments = []
            in_any_child: set[str] = set()
            for child in children:
                overlap = bucket_docs & child_sets[child]
                in_any_child |= overlap
                if overlap:
                    segments.append((child, len(overlap)))
            general = bucket_docs - in_any_child
            if general:
                segments.append((GENERAL_SEGMENT, len(general)))
            buckets.append(Bucket(author, len(bucket_docs), tuple(segments)))
        return AggregationView(mode, parent_topic, tuple(buckets))

    raise InvalidMode(f"unknown aggregation mode {mode!r}")


# ---------------------------------------------------------- persistence

def _to_payload(index: SearchIndex) -> dict:
    return {
        "format": INDEX_FORMAT,
        "version": INDEX_VERSION,
        "postings": {t: {d: list(p) for d, p in by_doc.items()}
                     for t, by_doc in index.postings.items()},
        "docs": {d: {"title": m.title, "author": m.author,
                     "date": m.date.isoformat(), "kind": m.kind.value,
                     "length": m.length, "body": index.doc_bodies[d]}
                 for d, m in sorted(index.doc_meta.items())},
        "topic_docs": {t: sorted(ds)
                       for t, ds in sorted(index.topic_docs.items())},
        "topic_children": {t: list(c)
                           for t, c in sorted(index.topic_children.items())},
        "topic_closure": {t: sorted(c)
                          for t, c in sorted(index.topic_closure.items())},
        "author_order": index.author_order,
        "avg_doc_length": index.avg_doc_length,
    }


def _payload_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def save_index(index: SearchIndex, path: str | Path) -> None:
    payload = _to_payload(index)
    payload["build_hash"] = index.build_hash or _payload_hash(payload)
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n",
        "utf-8")


def load_index(path: str | Path) -> SearchIndex:
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"not an index artifact: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != INDEX_FORMAT:
        raise IndexFormatError("not an index artifact (bad magic)")
    if payload.get("version") != INDEX_VERSION:
        raise IndexVersionError(
            f"index version {payload.get('version')} != {INDEX_VERSION}; rebuild")
    doc_meta = {}
    doc_bodies = {}
    for doc_id, m in payload["docs"].items():
        doc_meta[doc_id] = DocMeta(
            m["title"], m["author"], dt.date.fromisoformat(m["date"]),
            DocumentKind.from_string(m["kind"])[0], m["length"])
        doc_bodies[doc_id] = m["body"]
    stored_hash = payload.pop("build_hash", "")
    index = SearchIndex(
        postings={t: {d: tuple(p) for d, p in by_doc.items()}
                  for t, by_doc in payload["postings"].items()},
        doc_meta=doc_meta,
        doc_bodies=doc_bodies,
        topic_docs={t: frozenset(ds)
                    for t, ds in payload["topic_docs"].items()},
        doc_topics={},
        topic_children={t: tuple(c)
                        for t, c in payload["topic_children"].items()},
        topic_closure={t: frozenset(c)
                       for t, c in payload["topic_closure"].items()},
        author_order=list(payload["author_order"]),
        avg_doc_length=float(payload["avg_doc_length"]),
        build_hash=stored_hash,
    )
    doc_topics: dict[str, set[str]] = {d: set() for d in doc_meta}
    for topic_id, ds in index.topic_docs.items():
        for d in ds:
            doc_topics[d].add(topic_id)
    index.doc_topics = {d: frozenset(ts) for d, ts in doc_topics.items()}
    return index
