import datetime as dt
import json

import hypothesis.strategies as st
import pytest
from hypothesis import given

from doris import corpus
from doris.corpus import (AnnotationStatement, Document, DocumentKind,
                          format_annotation, parse_annotations, parse_corpus,
                          serialize_corpus, validate_corpus,
                          write_annotations)

KINDS = ["StateOfUnionReport", "InauguralAddress", "CommencementAddress",
         "CampaignSpeech", "PublicSpeech", "PressRelease", "Proclamation",
         "ExecutiveAction", "Other"]


def write_jsonl(tmp_path, records, name="corpus.jsonl"):
    path = tmp_path / name
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record if isinstance(record, str)
                     else json.dumps(record))
            fh.write("\n")
    return path


def record(**overrides):
    base = {"id": "d1", "title": "T", "author": "A", "date": "1901-05-04",
            "kind": "PublicSpeech", "text": "We met."}
    base.update(overrides)
    return base


class TestDocumentKind:
    def test_vocabulary_is_closed_and_ordered(self):
        assert [k.value for k in DocumentKind] == KINDS

    def test_every_kind_round_trips(self):
        for name in KINDS:
            kind, recognized = DocumentKind.from_string(name)
            assert recognized and kind.value == name

    def test_unknown_maps_to_other(self):
        kind, recognized = DocumentKind.from_string("Sermon")
        assert kind is DocumentKind.OTHER and not recognized


class TestParseCorpus:
    def test_fixture_parses_cleanly(self, documents):
        assert len(documents) == 60
        assert all(isinstance(d.date, dt.date) for d in documents)

    def test_malformed_json_line_reported_and_skipped(self, tmp_path):
        path = write_jsonl(tmp_path, [record(), "{not json"])
        load = parse_corpus(path)
        assert len(load.documents) == 1
        assert [i.code for i in load.errors] == ["malformed_record"]
        assert load.issues[0].line == 2

    def test_non_object_line(self, tmp_path):
        path = write_jsonl(tmp_path, ["[1, 2]"])
        load = parse_corpus(path)
        assert not load.documents
        assert load.errors[0].code == "malformed_record"

    def test_duplicate_id_keeps_first(self, tmp_path):
        path = write_jsonl(tmp_path, [record(title="first"),
                                      record(title="second")])
        load = parse_corpus(path)
        assert [d.title for d in load.documents] == ["first"]
        assert [i.code for i in load.errors] == ["duplicate_id"]

    def test_invalid_date_reported(self, tmp_path):
        path = write_jsonl(tmp_path, [record(date="1901-13-40")])
        load = parse_corpus(path)
        assert not load.documents
        assert load.errors[0].code == "invalid_date"

    def test_missing_field_reported(self, tmp_path):
        bad = record()
        del bad["author"]
        load = parse_corpus(write_jsonl(tmp_path, [bad]))
        assert not load.documents and load.errors

    def test_unknown_kind_warns_but_keeps_document(self, tmp_path):
        path = write_jsonl(tmp_path, [record(kind="Sermon")])
        load = parse_corpus(path)
        assert load.documents[0].kind is DocumentKind.OTHER
        assert [i.code for i in load.issues] == ["unknown_kind"]
        assert not load.errors  # a warning, not an error

    def test_extra_fields_ignored(self, tmp_path):
        path = write_jsonl(tmp_path, [record(archive="x", pages=3)])
        load = parse_corpus(path)
        assert len(load.documents) == 1 and not load.issues

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(record()) + "\n\n\n", "utf-8")
        assert len(parse_corpus(path).documents) == 1

    def test_bad_id_characters_rejected(self, tmp_path):
        load = parse_corpus(write_jsonl(tmp_path, [record(id="has space")]))
        assert not load.documents and load.errors


class TestRoundTrip:
    def test_fixture_round_trips(self, documents, tmp_path):
        path = tmp_path / "again.jsonl"
        path.write_text(serialize_corpus(documents), "utf-8")
        again = parse_corpus(path)
        assert not again.issues
        assert again.documents == documents

    docs_strategy = st.lists(
        st.builds(
            Document,
            id=st.from_regex(r"[A-Za-z0-9._-]{1,12}", fullmatch=True),
            title=st.text(max_size=30),
            author=st.text(min_size=1, max_size=20),
            date=st.dates(dt.date(1800, 1, 1), dt.date(2000, 12, 31)),
            kind=st.sampled_from(list(DocumentKind)),
            body=st.text(min_size=1, max_size=200).filter(str.strip),
        ),
        max_size=8,
        unique_by=lambda d: d.id,
    )

    @given(docs=docs_strategy)
    def test_parse_serialize_identity(self, docs, tmp_path_factory):
        tmp = tmp_path_factory.mktemp("rt") / "c.jsonl"
        tmp.write_text(serialize_corpus(docs), "utf-8")
        load = parse_corpus(tmp)
        assert not load.issues
        assert load.documents == docs


GOOD = "<urn:doris:doc:sotu-1862> <http://schema.org/about> <urn:doris:topic:race_relations> ."


class TestAnnotations:
    def test_single_statement(self, tmp_path):
        path = tmp_path / "a.nt"
        path.write_text(GOOD + "\n", "utf-8")
        statements, issues = parse_annotations(path)
        assert not issues
        assert statements == [AnnotationStatement(
            "sotu-1862", "race_relations", str(path))]

    def test_comments_and_blanks_only(self, tmp_path):
        path = tmp_path / "a.nt"
        path.write_text("# a comment\n\n# another\n", "utf-8")
        assert parse_annotations(path) == ([], [])

    def test_order_preserved(self, tmp_path):
        lines = [
            "<urn:doris:doc:b> <http://schema.org/about> <urn:doris:topic:t2> .",
            "<urn:doris:doc:a> <http://schema.org/about> <urn:doris:topic:t1> .",
        ]
        path = tmp_path / "a.nt"
        path.write_text("\n".join(lines) + "\n", "utf-8")
        statements, _ = parse_annotations(path)
        assert [(s.doc_id, s.topic_id) for s in statements] == [
            ("b", "t2"), ("a", "t1")]

    @pytest.mark.parametrize("line", [
        GOOD[:-2].rstrip(),                      # missing terminal " ."
        GOOD.replace(" <http", "  <http"),       # double space
        GOOD.replace("schema.org/about", "schema.org/mentions"),
        GOOD.replace("urn:doris:doc:", "urn:doc:"),
        "<urn:doris:doc:x y> <http://schema.org/about> <urn:doris:topic:t> .",
        GOOD + " extra",
    ])
    def test_malformed_lines(self, tmp_path, line):
        path = tmp_path / "a.nt"
        path.write_text(line + "\n", "utf-8")
        statements, issues = parse_annotations(path)
        assert not statements
        assert [i.code for i in issues] == ["malformed_triple"]

    def test_parse_is_idempotent(self, tmp_path):
        path = tmp_path / "a.nt"
        path.write_text(GOOD + "\n" + GOOD + "\n", "utf-8")
        first, _ = parse_annotations(path)
        second, _ = parse_annotations(path)
        assert first == second and len(first) == 2

    def test_format_round_trip(self, tmp_path):
        statements = [AnnotationStatement("d2", "t9"),
                      AnnotationStatement("d1", "t1")]
        path = tmp_path / "out.nt"
        write_annotations(statements, path)
        text = path.read_text("utf-8")
        assert text.endswith(".\n") and "  " not in text
        again, issues = parse_annotations(path)
        assert not issues
        assert [(s.doc_id, s.topic_id) for s in again] == [
            ("d2", "t9"), ("d1", "t1")]

    def test_write_empty(self, tmp_path):
        path = tmp_path / "empty.nt"
        write_annotations([], path)
        assert path.read_text("utf-8") == ""

    def test_format_matches_grammar(self):
        line = format_annotation(AnnotationStatement("doc-001", "economy"))
        assert line == ("<urn:doris:doc:doc-001> <http://schema.org/about> "
                        "<urn:doris:topic:economy> .")


class TestValidation:
    def test_empty_inputs(self):
        report = validate_corpus([], [])
        assert report.doc_count == 0 and report.annotation_count == 0
        assert report.ok

    def test_dangling_doc_reported(self, documents, taxonomy):
        statements = [AnnotationStatement("zzz", "economy")]
        report = validate_corpus(documents, statements, taxonomy)
        assert report.dangling_docs == ["zzz"]
        assert not report.ok

    def test_dangling_topic_needs_taxonomy(self, documents, taxonomy):
        statements = [AnnotationStatement(documents[0].id, "not_a_topic")]
        assert validate_corpus(documents, statements).ok
        report = validate_corpus(documents, statements, taxonomy)
        assert report.dangling_topics == ["not_a_topic"]

    def test_kind_counts_match_independent_scan(self, documents,
                                                corpus_path):
        report = validate_corpus(documents, [])
        counts: dict[str, int] = {}
        for line in corpus_path.read_text("utf-8").splitlines():
            if line.strip():
                kind = json.loads(line)["kind"]
                counts[kind] = counts.get(kind, 0) + 1
        assert report.kind_counts == counts
        assert sum(report.author_counts.values()) == 60

    def test_report_text_mentions_problems(self, documents):
        statements = [AnnotationStatement("zzz", "economy")]
        text = validate_corpus(documents, statements).to_text()
        assert "zzz" in text and "documents: 60" in text
