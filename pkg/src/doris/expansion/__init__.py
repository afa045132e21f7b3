"""Keyword expansion: co-occurrence statistics, embedding neighbors, and
topic-model harvesting, combined by :func:`expand_taxonomy`."""

from .cooccur import (CooccurrenceStats, UnknownTerm, build_cooccurrence,
                      cooccur_candidates, pmi)
from .embeddings import (EmbeddingTable, EmptyFile, UnknownToken, cosine,
                         embedding_neighbors, load_embeddings)
from .lda import (LdaModel, kernel_name, load_lda_overrides,
                  match_lda_topics, top_words, train_lda)
from .expand import ExpansionConfig, expand_taxonomy

__all__ = [
    "CooccurrenceStats", "UnknownTerm", "build_cooccurrence",
    "cooccur_candidates", "pmi",
    "EmbeddingTable", "EmptyFile", "UnknownToken", "cosine",
    "embedding_neighbors", "load_embeddings",
    "LdaModel", "kernel_name", "load_lda_overrides", "match_lda_topics",
    "top_words", "train_lda",
    "ExpansionConfig", "expand_taxonomy",
]
