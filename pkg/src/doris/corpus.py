"""Document model, corpus file parsing, and the annotation triple format.

A corpus is UTF-8 JSONL, one document per line with fields
``id, title, author, date, kind, text`` (extra fields are ignored).
Annotations are a strict N-Triples subset::

    <urn:doris:doc:ID> <http://schema.org/about> <urn:doris:topic:ID> .

with ``#`` comment lines and LF endings.
"""

from __future__ import annotations

import datetime as dt
import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

ID_RE = re.compile(r"[A-Za-z0-9._-]+")

DOC_URN_PREFIX = "urn:doris:doc:"
TOPIC_URN_PREFIX = "urn:doris:topic:"

_TRIPLE_RE = re.compile(
    r"<urn:doris:doc:([A-Za-z0-9._-]+)> "
    r"<http://schema\.org/about> "
    r"<urn:doris:topic:([A-Za-z0-9._-]+)> \.")


class DocumentKind(enum.Enum):
    """Closed document-kind vocabulary; declaration order is the display
    and aggregation-segment order."""

    STATE_OF_UNION_REPORT = "StateOfUnionReport"
    INAUGURAL_ADDRESS = "InauguralAddress"
    COMMENCEMENT_ADDRESS = "CommencementAddress"
    CAMPAIGN_SPEECH = "CampaignSpeech"
    PUBLIC_SPEECH = "PublicSpeech"
    PRESS_RELEASE = "PressRelease"
    PROCLAMATION = "Proclamation"
    EXECUTIVE_ACTION = "ExecutiveAction"
    OTHER = "Other"

    @classmethod
    def from_string(cls, s: str) -> tuple["DocumentKind", bool]:
        """Map a kind string to a member; anything outside the vocabulary
        becomes OTHER. Returns (kind, recognized)."""
        member = _KIND_BY_VALUE.get(s)
        if member is None:
            return cls.OTHER, False
        return member, True


_KIND_BY_VALUE = {k.value: k for k in DocumentKind}

KIND_ORDER = {k: i for i, k in enumerate(DocumentKind)}


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    author: str
    date: dt.date
    kind: DocumentKind
    body: str

    @property
    def year(self) -> int:
        return self.date.year


@dataclass(frozen=True)
class AnnotationStatement:
    """One (document, about, topic) triple."""

    doc_id: str
    topic_id: str
    source: str = ""
    predicate: str = "about"


@dataclass(frozen=True)
class ParseIssue:
    code: str
    message: str
    line: int | None = None
    severity: str = "error"  # "error" | "warning"

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.severity}: {self.code}: {self.message}{where}"


@dataclass
class CorpusLoad:
    documents: list[Document]
    issues: list[ParseIssue]

    @property
    def errors(self) -> list[ParseIssue]:
        return [i for i in self.issues if i.severity == "error"]


def parse_corpus(path: str | Path) -> CorpusLoad:
    """Parse a JSONL corpus file.

    Per-line problems are collected, not raised: malformed JSON, missing or
    invalid fields, duplicate ids, and bad dates each produce one issue and
    the line is skipped (unknown kinds only warn; the document is kept with
    kind Other).
    """
    documents: list[Document] = []
    issues: list[ParseIssue] = []
    seen: set[str] = set()
    text = Path(path).read_text("utf-8")
    # Records are LF-delimited; str.splitlines would also cut on NEL and
    # friends, which are legal inside JSON strings.
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            issues.append(ParseIssue("malformed_record", str(exc), lineno))
            continue
        if not isinstance(record, dict):
            issues.append(ParseIssue(
                "malformed_record", "record is not a JSON object", lineno))
            continue
        doc, record_issues = _record_to_document(record, lineno)
        issues.extend(record_issues)
        if doc is None:
            continue
        if doc.id in seen:
            issues.append(ParseIssue(
                "duplicate_id", f"duplicate document id {doc.id!r}", lineno))
            continue
        seen.add(doc.id)
        documents.append(doc)
    return CorpusLoad(documents, issues)


def _record_to_document(
        record: dict, lineno: int) -> tuple[Document | None, list[ParseIssue]]:
    issues: list[ParseIssue] = []
    missing = [f for f in ("id", "title", "author", "date", "kind", "text")
               if f not in record]
    if missing:
        issues.append(ParseIssue(
            "malformed_record", f"missing fields: {', '.join(missing)}", lineno))
        return None, issues
    doc_id = str(record["id"])
    if not ID_RE.fullmatch(doc_id):
        issues.append(ParseIssue(
            "malformed_record", f"invalid document id {doc_id!r}", lineno))
        return None, issues
    body = str(record["text"])
    if not body.strip():
        issues.append(ParseIssue(
            "malformed_record", f"empty body for {doc_id!r}", lineno))
        return None, issues
    try:
        date = dt.date.fromisoformat(str(record["date"]))
    except ValueError:
        issues.append(ParseIssue(
            "invalid_date",
            f"invalid date {record['date']!r} for {doc_id!r}", lineno))
        return None, issues
    kind, recognized = DocumentKind.from_string(str(record["kind"]))
    if not recognized:
        issues.append(ParseIssue(
            "unknown_kind",
            f"unknown kind {record['kind']!r} for {doc_id!r}, using Other",
            lineno, severity="warning"))
    doc = Document(doc_id, str(record["title"]), str(record["author"]),
                   date, kind, body)
    return doc, issues


def serialize_corpus(documents: list[Document]) -> str:
    """JSONL text that parse_corpus reads back to an equal document list."""
    lines = []
    for d in documents:
        lines.append(json.dumps(
            {"id": d.id, "title": d.title, "author": d.author,
             "date": d.date.isoformat(), "kind": d.kind.value, "text": d.body},
            ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_annotations(
        path: str | Path) -> tuple[list[AnnotationStatement], list[ParseIssue]]:
    """Parse an annotation triple file, preserving line order.

    Any non-empty, non-comment line that does not match the grammar exactly
    (single spaces, trailing `` .``) yields a malformed_triple issue.
    """
    statements: list[AnnotationStatement] = []
    issues: list[ParseIssue] = []
    source = str(path)
    text = Path(path).read_text("utf-8")
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        m = _TRIPLE_RE.fullmatch(line)
        if m is None:
            issues.append(ParseIssue(
                "malformed_triple", f"not a valid triple: {line!r}", lineno))
            continue
        statements.append(AnnotationStatement(m.group(1), m.group(2), source))
    return statements, issues


def format_annotation(statement: AnnotationStatement) -> str:
    return (f"<{DOC_URN_PREFIX}{statement.doc_id}> "
            f"<http://schema.org/about> "
            f"<{TOPIC_URN_PREFIX}{statement.topic_id}> .")


def write_annotations(statements: list[AnnotationStatement],
                      path: str | Path) -> None:
    lines = [format_annotation(s) for s in statements]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")


@dataclass
class ValidationReport:
    doc_count: int = 0
    annotation_count: int = 0
    dangling_docs: list[str] = field(default_factory=list)
    dangling_topics: list[str] = field(default_factory=list)
    kind_counts: dict[str, int] = field(default_factory=dict)
    author_counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.dangling_docs and not self.dangling_topics

    def to_text(self) -> str:
        lines = [f"documents: {self.doc_count}",
                 f"annotations: {self.annotation_count}"]
        lines.append("documents per kind:")
        for kind, n in self.kind_counts.items():
            lines.append(f"  {kind}: {n}")
        lines.append("documents per author:")
        for author, n in self.author_counts.items():
            lines.append(f"  {author}: {n}")
        for d in self.dangling_docs:
            lines.append(f"dangling document id: {d}")
        for t in self.dangling_topics:
            lines.append(f"dangling topic id: {t}")
        return "\n".join(lines)


def validate_corpus(documents, annotations, taxonomy=None) -> ValidationReport:
    """Cross-check documents, annotations, and (optionally) a taxonomy.

    Unresolvable ids are reported, never dropped silently.
    """
    report = ValidationReport(doc_count=len(documents),
                              annotation_count=len(annotations))
    doc_ids = {d.id for d in documents}
    for kind in DocumentKind:
        n = sum(1 for d in documents if d.kind is kind)
        if n:
            report.kind_counts[kind.value] = n
    for author in sorted({d.author for d in documents}):
        report.author_counts[author] = sum(
            1 for d in documents if d.author == author)
    dangling_docs = sorted({a.doc_id for a in annotations}
                           - doc_ids)
    report.dangling_docs = dangling_docs
    if taxonomy is not None:
        known = set(taxonomy.nodes)
        report.dangling_topics = sorted(
            {a.topic_id for a in annotations} - known)
    return report
