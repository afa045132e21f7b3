"""Taxonomy expansion: grow each topic's keyword rules from the corpus.

Three techniques feed a topic's new rules: co-occurrence candidates of each
positive seed, embedding neighbors of each single-token positive seed, and
the top words of matched learned topics. Additions are single-token
positive exact rules with source-specific weights; existing rules are never
removed, and no rule is added whose tokens equal those of an existing rule
of the topic, positive or negative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import textprep
from ..corpus import Document
from ..taxonomy import (DEFAULT_WEIGHTS, KeywordRule, MatchMode, Polarity,
                        RuleSource, TopicNode, TopicTaxonomy, build_taxonomy,
                        make_rule)
from .cooccur import build_cooccurrence, cooccur_candidates
from .embeddings import EmbeddingTable, embedding_neighbors
from .lda import EmptyVocabulary, match_lda_topics, top_words, train_lda


@dataclass
class ExpansionConfig:
    cooccur_min_count: int = 5
    cooccur_min_pmi: float = 1.0
    cooccur_top_n: int = 10
    embed_threshold: float = 0.55
    embed_top_n: int = 10
    lda_k: int = 300
    lda_iterations: int = 200
    lda_top_words_imported: int = 3
    lda_match_min_overlap: int = 2
    rng_seed: int = 42

    def __post_init__(self):
        for name in ("cooccur_min_count", "cooccur_top_n", "embed_top_n",
                     "lda_k", "lda_iterations", "lda_top_words_imported",
                     "lda_match_min_overlap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not -1.0 <= self.embed_threshold <= 1.0:
            raise ValueError("embed_threshold must be a cosine in [-1, 1]")


def expand_taxonomy(tax: TopicTaxonomy, documents: list[Document],
                    embeddings: EmbeddingTable | None,
                    cfg: ExpansionConfig | None = None,
                    stopwords: frozenset[str] = frozenset(),
                    lda_overrides: dict[int, str | None] | None = None,
                    ) -> TopicTaxonomy:
    """Return a new taxonomy whose topics carry expanded rule sets."""
    cfg = cfg or ExpansionConfig()

    sentences = []
    for doc in documents:
        sentences.extend(textprep.split_sentences(doc.id, doc.body))
    stats = build_cooccurrence(sentences, stopwords)

    # token -> (source, weight) per topic; higher weight wins, first
    # technique offered wins ties (co-occurrence, embeddings, then lda)
    additions: dict[str, dict[str, tuple[RuleSource, float]]] = {
        t: {} for t in tax.nodes}

    def offer(topic_id: str, token: str, source: RuleSource) -> None:
        weight = DEFAULT_WEIGHTS[source]
        current = additions[topic_id].get(token)
        if current is None or weight > current[1]:
            additions[topic_id][token] = (source, weight)

    for topic_id in sorted(tax.nodes):
        node = tax.nodes[topic_id]
        seeds = [r for r in node.own_rules
                 if r.polarity is Polarity.POSITIVE
                 and r.source is RuleSource.SEED]
        for rule in seeds:
            for token, _score in cooccur_candidates(
                    stats, rule, cfg.cooccur_min_count, cfg.cooccur_min_pmi,
                    cfg.cooccur_top_n, stopwords):
                offer(topic_id, token, RuleSource.COOCCURRENCE)
        if embeddings is not None:
            for rule in seeds:
                if len(rule.tokens) != 1 or rule.tokens[0] not in embeddings:
                    continue
                for token, _sim in embedding_neighbors(
                        embeddings, rule.tokens[0], cfg.embed_threshold,
                        cfg.embed_top_n):
                    offer(topic_id, token, RuleSource.EMBEDDING)

    doc_tokens = [textprep.tokenize(doc.body) for doc in documents]
    try:
        model = train_lda(doc_tokens, cfg.lda_k, cfg.lda_iterations,
                          cfg.rng_seed, stopwords=stopwords)
    except EmptyVocabulary:
        model = None  # corpus too small for a topic model; skip this route
    if model is not None:
        mapping = match_lda_topics(model, tax, lda_overrides,
                                   cfg.lda_match_min_overlap)
        for lda_index in sorted(mapping):
            topic_id = mapping[lda_index]
            for token in top_words(model, lda_index,
                                   cfg.lda_top_words_imported):
                offer(topic_id, token, RuleSource.LDA)

    nodes: list[TopicNode] = []
    for topic_id in sorted(tax.nodes):
        node = tax.nodes[topic_id]
        positive_tokens = {r.tokens for r in node.own_rules
                           if r.polarity is Polarity.POSITIVE}
        negative_tokens = {r.tokens for r in node.own_rules
                           if r.polarity is Polarity.NEGATIVE}
        new_rules: list[KeywordRule] = []
        for token in sorted(additions[topic_id]):
            source, weight = additions[topic_id][token]
            if (token,) in positive_tokens or (token,) in negative_tokens:
                continue
            new_rules.append(make_rule((token,), MatchMode.EXACT_PHRASE,
                                       Polarity.POSITIVE, source, weight))
        nodes.append(TopicNode(node.id, node.label, node.parent_ids,
                               node.own_rules + tuple(new_rules)))
    return build_taxonomy(nodes)
