import json
import signal
import socket
import subprocess
import sys
import time
import urllib.request

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from doris import __version__
from doris.cli import main
from doris.corpus import parse_annotations
from doris.index import save_index
from doris.service import ApiConfig, create_app
from doris.taxonomy import default_taxonomy_path, load_taxonomy


@pytest.fixture(scope="module")
def index_path(tmp_path_factory, fixture_index):
    path = tmp_path_factory.mktemp("cli") / "corpus.idx"
    save_index(fixture_index, path)
    return str(path)


@pytest.fixture()
def runner():
    return CliRunner()


TAXONOMY = str(default_taxonomy_path())
CORPUS = "tests/fixtures/corpus.jsonl"


class TestTopLevel:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_help_lists_commands(self, runner):
        result = runner.invoke(main, ["--help"])
        for command in ("ingest", "expand", "annotate", "index", "serve",
                        "query", "taxonomy"):
            assert command in result.output


class TestTaxonomyValidate:
    def test_packaged_taxonomy_is_ok(self, runner):
        result = runner.invoke(main, ["taxonomy", "validate", TAXONOMY])
        assert result.exit_code == 0
        assert result.output.startswith("OK: 14 topics, ")

    def test_broken_file_fails(self, runner, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text('{"topics": [{"id": "a", "parents": ["ghost"]}]}',
                       "utf-8")
        result = runner.invoke(main, ["taxonomy", "validate", str(bad)])
        assert result.exit_code == 1
        assert "error:" in result.stderr

    def test_missing_file_fails(self, runner):
        result = runner.invoke(main, ["taxonomy", "validate", "/nope.json"])
        assert result.exit_code == 1


class TestIngest:
    def test_clean_corpus(self, runner):
        result = runner.invoke(main, ["ingest", "--corpus", CORPUS])
        assert result.exit_code == 0
        assert "documents: 60" in result.output
        assert "documents per kind:" in result.output

    def test_with_annotations_and_taxonomy(self, runner, tmp_path,
                                           annotations):
        notes = tmp_path / "notes.nt"
        runner.invoke(main, ["annotate", "--corpus", CORPUS,
                             "--taxonomy", TAXONOMY, "-o", str(notes)])
        result = runner.invoke(main, ["ingest", "--corpus", CORPUS,
                                      "--annotations", str(notes),
                                      "--taxonomy", TAXONOMY])
        assert result.exit_code == 0

    def test_dangling_annotation_fails(self, runner, tmp_path):
        notes = tmp_path / "notes.nt"
        notes.write_text(
            "<urn:doris:doc:ghost> <http://schema.org/about> "
            "<urn:doris:topic:economy> .\n", "utf-8")
        result = runner.invoke(main, ["ingest", "--corpus", CORPUS,
                                      "--annotations", str(notes),
                                      "--taxonomy", TAXONOMY])
        assert result.exit_code == 1

    def test_unreadable_corpus_fails(self, runner):
        result = runner.invoke(main, ["ingest", "--corpus", "/nope.jsonl"])
        assert result.exit_code == 1
        assert "error:" in result.stderr

    def test_malformed_corpus_line_fails(self, runner, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("not json\n", "utf-8")
        result = runner.invoke(main, ["ingest", "--corpus", str(bad)])
        assert result.exit_code == 1


class TestExpand:
    def test_writes_expanded_taxonomy(self, runner, tmp_path,
                                      embeddings_path):
        out = tmp_path / "expanded.json"
        result = runner.invoke(main, [
            "expand", "--corpus", CORPUS, "--taxonomy", TAXONOMY,
            "--embeddings", str(embeddings_path),
            "--lda-k", "30", "--lda-iters", "80", "--seed", "42",
            "-o", str(out)])
        assert result.exit_code == 0, result.output + result.stderr
        assert "new rules" in result.stderr
        expanded = load_taxonomy(out)
        before = sum(len(n.own_rules)
                     for n in load_taxonomy(TAXONOMY).nodes.values())
        after = sum(len(n.own_rules) for n in expanded.nodes.values())
        assert after > before

    def test_bad_flag_value_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "expand", "--corpus", CORPUS, "--taxonomy", TAXONOMY,
            "--lda-k", "0", "-o", str(tmp_path / "x.json")])
        assert result.exit_code == 2

    def test_missing_embeddings_file_fails(self, runner, tmp_path):
        result = runner.invoke(main, [
            "expand", "--corpus", CORPUS, "--taxonomy", TAXONOMY,
            "--embeddings", "/nope.txt", "-o", str(tmp_path / "x.json")])
        assert result.exit_code == 1


class TestAnnotate:
    def test_writes_statements(self, runner, tmp_path):
        out = tmp_path / "notes.nt"
        result = runner.invoke(main, ["annotate", "--corpus", CORPUS,
                                      "--taxonomy", TAXONOMY,
                                      "-o", str(out)])
        assert result.exit_code == 0
        assert "annotated 60 documents: 85 statements" in result.stderr
        statements, issues = parse_annotations(out)
        assert issues == []
        assert len(statements) == 85

    def test_threshold_flag(self, runner, tmp_path):
        out = tmp_path / "strict.nt"
        result = runner.invoke(main, ["annotate", "--corpus", CORPUS,
                                      "--taxonomy", TAXONOMY,
                                      "--min-evidence", "100",
                                      "-o", str(out)])
        assert result.exit_code == 0
        statements, _ = parse_annotations(out)
        assert statements == []


class TestIndexCommand:
    def test_builds_artifact(self, runner, tmp_path, fixture_index):
        notes = tmp_path / "notes.nt"
        runner.invoke(main, ["annotate", "--corpus", CORPUS,
                             "--taxonomy", TAXONOMY, "-o", str(notes)])
        out = tmp_path / "corpus.idx"
        result = runner.invoke(main, ["index", "--corpus", CORPUS,
                                      "--annotations", str(notes),
                                      "--taxonomy", TAXONOMY,
                                      "-o", str(out)])
        assert result.exit_code == 0
        assert f"version {fixture_index.build_hash}" in result.stderr
        from doris.index import load_index
        assert load_index(out).build_hash == fixture_index.build_hash

    def test_dangling_annotations_warned_not_fatal(self, runner, tmp_path):
        notes = tmp_path / "notes.nt"
        notes.write_text(
            "<urn:doris:doc:ghost> <http://schema.org/about> "
            "<urn:doris:topic:economy> .\n", "utf-8")
        out = tmp_path / "corpus.idx"
        result = runner.invoke(main, ["index", "--corpus", CORPUS,
                                      "--annotations", str(notes),
                                      "--taxonomy", TAXONOMY,
                                      "-o", str(out)])
        assert result.exit_code == 0
        assert "unknown document 'ghost'" in result.stderr
        assert out.exists()


class TestQuery:
    def test_json_format(self, runner, index_path):
        result = runner.invoke(main, ["query", "oil", "--format", "json",
                                      "--index", index_path])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["totalCount"] == 8
        assert len(payload["hits"]) == 8

    def test_json_matches_http_byte_for_byte(self, runner, index_path,
                                             fixture_index):
        config = ApiConfig(index_path=index_path,
                           taxonomy_path=default_taxonomy_path())
        with TestClient(create_app(config)) as client:
            http = client.get("/api/search", params={
                "q": 'oil "free trade"', "author": "Felix Navarro"})
        cli = runner.invoke(main, ["query", 'oil "free trade"',
                                   "--author", "Felix Navarro",
                                   "--format", "json",
                                   "--index", index_path])
        assert cli.exit_code == 0
        assert cli.output.encode("utf-8") == http.content

    def test_text_format(self, runner, index_path):
        result = runner.invoke(main, ["query", "oil", "--index", index_path])
        assert result.exit_code == 0
        assert result.output.startswith("total: 8\n")
        assert "topics:" in result.output

    def test_filters(self, runner, index_path):
        result = runner.invoke(main, [
            "query", "we", "--author", "Ada Thorne", "--kind", "PublicSpeech",
            "--year-from", "1869", "--year-to", "1873",
            "--format", "json", "--index", index_path])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert all(h["author"] == "Ada Thorne" for h in payload["hits"])

    def test_unknown_kind_gives_empty_result(self, runner, index_path):
        result = runner.invoke(main, ["query", "we", "--kind", "NoSuchKind",
                                      "--format", "json",
                                      "--index", index_path])
        assert result.exit_code == 0
        assert json.loads(result.output) == {"totalCount": 0, "hits": [],
                                             "topicFacet": []}

    def test_empty_query_is_usage_error(self, runner, index_path):
        result = runner.invoke(main, ["query", "", "--index", index_path])
        assert result.exit_code == 2

    def test_filters_without_text_allowed(self, runner, index_path):
        result = runner.invoke(main, ["query", "", "--author", "Ada Thorne",
                                      "--format", "json",
                                      "--index", index_path])
        assert result.exit_code == 0
        assert json.loads(result.output)["totalCount"] == 10

    def test_malformed_year_is_usage_error(self, runner, index_path):
        result = runner.invoke(main, ["query", "we", "--year-from", "MCMX",
                                      "--index", index_path])
        assert result.exit_code == 2

    def test_negative_page_is_usage_error(self, runner, index_path):
        result = runner.invoke(main, ["query", "we", "--page", "-1",
                                      "--index", index_path])
        assert result.exit_code == 2

    def test_no_index_given_is_usage_error(self, runner):
        result = runner.invoke(main, ["query", "we"], env={"DORIS_INDEX": ""})
        assert result.exit_code == 2
        assert "DORIS_INDEX" in result.stderr

    def test_env_var_selects_index(self, runner, index_path):
        result = runner.invoke(main, ["query", "oil", "--format", "json"],
                               env={"DORIS_INDEX": index_path})
        assert result.exit_code == 0
        assert json.loads(result.output)["totalCount"] == 8

    def test_env_var_overrides_flag(self, runner, index_path):
        result = runner.invoke(main, ["query", "oil", "--format", "json",
                                      "--index", "/nope.idx"],
                               env={"DORIS_INDEX": index_path})
        assert result.exit_code == 0

    def test_missing_index_file_is_data_error(self, runner):
        result = runner.invoke(main, ["query", "we", "--index", "/nope.idx"])
        assert result.exit_code == 1

    def test_corrupt_index_file_is_data_error(self, runner, tmp_path):
        bad = tmp_path / "bad.idx"
        bad.write_text("not an index", "utf-8")
        result = runner.invoke(main, ["query", "we", "--index", str(bad)])
        assert result.exit_code == 1
        assert "error:" in result.stderr


class TestServe:
    def test_usage_errors(self, runner, index_path):
        result = runner.invoke(main, ["serve", "--taxonomy", TAXONOMY,
                                      "--index", index_path,
                                      "--bind", "nocolon"])
        assert result.exit_code == 2

        result = runner.invoke(main, ["serve", "--taxonomy", TAXONOMY],
                               env={"DORIS_INDEX": ""})
        assert result.exit_code == 2

    def test_bad_index_is_data_error(self, runner, tmp_path):
        bad = tmp_path / "bad.idx"
        bad.write_text("nope", "utf-8")
        result = runner.invoke(main, ["serve", "--taxonomy", TAXONOMY,
                                      "--index", str(bad)])
        assert result.exit_code == 1

    def test_serves_over_a_real_socket(self, index_path):
        # Port 0 makes the OS pick; the chosen port is printed on stdout.
        proc = subprocess.Popen(
            [sys.executable, "-m", "doris.cli", "serve",
             "--index", index_path, "--taxonomy", TAXONOMY,
             "--bind", "127.0.0.1:0"],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        try:
            line = proc.stdout.readline()
            assert line.startswith("listening on http://127.0.0.1:")
            port = int(line.rsplit(":", 1)[1])
            deadline = time.monotonic() + 10
            while True:
                try:
                    with urllib.request.urlopen(
                            f"http://127.0.0.1:{port}/api/health",
                            timeout=2) as response:
                        assert json.load(response) == {"status": "ok"}
                    break
                except OSError:
                    if time.monotonic() > deadline:
                        raise
                    time.sleep(0.05)
            with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/api/search?q=oil",
                    timeout=5) as response:
                payload = json.load(response)
                assert payload["totalCount"] == 8
                assert response.headers["Cache-Control"] == "no-store"
        finally:
            proc.send_signal(signal.SIGTERM)
            try:
                proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
