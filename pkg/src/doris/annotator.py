"""Apply a taxonomy's keyword rules to documents and emit topic annotations.

Scoring is per sentence: a sentence that matches any negative effective
rule contributes nothing (veto); otherwise it contributes the maximum
weight among matching positive rules. A document is annotated with a topic
when its summed evidence reaches the threshold. Because rules inherit from
children to parents, ancestors accumulate at least as much evidence as any
descendant and are annotated alongside them.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import textprep
from .corpus import AnnotationStatement, Document
from .taxonomy import (KeywordRule, MatchMode, Polarity, TopicTaxonomy,
                       effective_rules)

DEFAULT_MIN_EVIDENCE = 2.0


@dataclass(frozen=True)
class TopicEvidence:
    doc_id: str
    topic_id: str
    evidence: float
    matched_sentences: tuple[int, ...]


def sentence_matches(sentence: textprep.Sentence, rule: KeywordRule) -> bool:
    """Exact phrases need the rule tokens contiguous in the sentence; bag
    rules need every token present somewhere."""
    tokens = sentence.tokens
    if rule.match_mode is MatchMode.ALL_TOKENS:
        return all(t in tokens for t in rule.tokens)
    n = len(rule.tokens)
    if n > len(tokens):
        return False
    first = rule.tokens[0]
    return any(tokens[i] == first and tokens[i:i + n] == rule.tokens
               for i in range(len(tokens) - n + 1))


def _sentence_contribution(sentence: textprep.Sentence,
                           rules: list[KeywordRule]) -> float:
    best = 0.0
    for rule in rules:
        if rule.polarity is Polarity.NEGATIVE:
            if sentence_matches(sentence, rule):
                return 0.0
        elif rule.weight > best and sentence_matches(sentence, rule):
            best = rule.weight
    return best


def score_document(doc: Document, sentences: list[textprep.Sentence],
                   tax: TopicTaxonomy, topic_id: str,
                   min_evidence: float = DEFAULT_MIN_EVIDENCE,
                   ) -> TopicEvidence | None:
    """Evidence for one (document, topic) pair, or None below threshold."""
    rules = effective_rules(tax, topic_id)
    return _score_with_rules(doc, sentences, topic_id, rules, min_evidence)


def _score_with_rules(doc, sentences, topic_id, rules,
                      min_evidence) -> TopicEvidence | None:
    evidence = 0.0
    matched: list[int] = []
    for sentence in sentences:
        contribution = _sentence_contribution(sentence, rules)
        if contribution > 0.0:
            evidence += contribution
            matched.append(sentence.index)
    if evidence < min_evidence:
        return None
    return TopicEvidence(doc.id, topic_id, evidence, tuple(matched))


def annotate_corpus(documents: list[Document], tax: TopicTaxonomy,
                    min_evidence: float = DEFAULT_MIN_EVIDENCE,
                    ) -> list[AnnotationStatement]:
    """Statements for every (doc, topic) whose evidence clears the
    threshold, sorted by (doc id, topic id). Every node's effective rules
    are evaluated, so parents fire even when no single child does."""
    rules_by_topic = {t: effective_rules(tax, t) for t in tax.nodes}
    statements: list[AnnotationStatement] = []
    for doc in sorted(documents, key=lambda d: d.id):
        sentences = textprep.split_sentences(doc.id, doc.body)
        for topic_id in sorted(tax.nodes):
            hit = _score_with_rules(doc, sentences, topic_id,
                                    rules_by_topic[topic_id], min_evidence)
            if hit is not None:
                statements.append(AnnotationStatement(doc.id, topic_id))
    return statements
