import pathlib

import pytest

from doris import annotator as annotator_mod
from doris import corpus as corpus_mod
from doris import textprep
from doris.index import build_index
from doris.taxonomy import load_default_taxonomy

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_path() -> pathlib.Path:
    return FIXTURES / "corpus.jsonl"


@pytest.fixture(scope="session")
def embeddings_path() -> pathlib.Path:
    return FIXTURES / "embeddings.txt"


@pytest.fixture(scope="session")
def documents(corpus_path):
    load = corpus_mod.parse_corpus(corpus_path)
    assert not load.issues, "fixture corpus must parse cleanly"
    return load.documents


@pytest.fixture(scope="session")
def taxonomy():
    return load_default_taxonomy()


@pytest.fixture(scope="session")
def annotations(documents, taxonomy):
    return annotator_mod.annotate_corpus(documents, taxonomy)


@pytest.fixture(scope="session")
def fixture_index(documents, annotations, taxonomy):
    return build_index(documents, annotations, taxonomy)


@pytest.fixture(scope="session")
def stopwords():
    return textprep.load_stopwords()
