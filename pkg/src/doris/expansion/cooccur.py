"""Sentence-level co-occurrence counts and PMI-based candidate terms.

Counting is by distinct presence: a token occurring twice in one sentence
counts once, and a pair is counted once per sentence containing both.
Stopwords are excluded from the statistics (they are still present in the
retained sentence token lists, which phrase rules match against).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .. import textprep
from ..taxonomy import KeywordRule, MatchMode, Polarity

NEG_INF = float("-inf")


class UnknownTerm(KeyError):
    pass


@dataclass
class CooccurrenceStats:
    sentence_count: int = 0
    term_sentence_count: Counter = field(default_factory=Counter)
    pair_sentence_count: Counter = field(default_factory=Counter)
    # Full (unfiltered) token tuples, kept so multiword rules can be matched
    # against the same sentences the counts came from.
    sentence_tokens: list[tuple[str, ...]] = field(default_factory=list)


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def build_cooccurrence(sentences: list[textprep.Sentence],
                       stopwords: frozenset[str] = frozenset()) -> CooccurrenceStats:
    stats = CooccurrenceStats()
    for sentence in sentences:
        stats.sentence_count += 1
        stats.sentence_tokens.append(sentence.tokens)
        distinct = sorted(set(sentence.tokens) - stopwords)
        stats.term_sentence_count.update(distinct)
        for i, a in enumerate(distinct):
            for b in distinct[i + 1:]:
                stats.pair_sentence_count[(a, b)] += 1
    return stats


def pair_count(stats: CooccurrenceStats, a: str, b: str) -> int:
    if a == b:
        return stats.term_sentence_count[a]
    return stats.pair_sentence_count[_pair(a, b)]


def pmi(stats: CooccurrenceStats, a: str, b: str) -> float:
    """Natural-log PMI of two terms at sentence granularity.

    Disjoint terms give -inf; terms never seen at all raise UnknownTerm.
    """
    n = stats.sentence_count
    count_a = stats.term_sentence_count[a]
    count_b = stats.term_sentence_count[b]
    if count_a == 0:
        raise UnknownTerm(a)
    if count_b == 0:
        raise UnknownTerm(b)
    joint = pair_count(stats, a, b)
    if joint == 0:
        return NEG_INF
    return math.log((joint / n) / ((count_a / n) * (count_b / n)))


def _rule_matches(rule_tokens: tuple[str, ...], mode: MatchMode,
                  sentence: tuple[str, ...]) -> bool:
    if mode is MatchMode.ALL_TOKENS:
        return all(t in sentence for t in rule_tokens)
    n = len(rule_tokens)
    if n > len(sentence):
        return False
    return any(sentence[i:i + n] == rule_tokens
               for i in range(len(sentence) - n + 1))


def cooccur_candidates(stats: CooccurrenceStats, rule: KeywordRule,
                       min_count: int = 5, min_pmi: float = 1.0,
                       top_n: int = 10,
                       stopwords: frozenset[str] = frozenset()) -> list[tuple[str, float]]:
    """Expansion candidates for one positive rule: (token, pmi) pairs.

    Single-token rules pair the token against every counted term; multiword
    rules use the set of sentences the rule matches as a pseudo-term.
    Candidates need a joint count >= min_count and PMI >= min_pmi; the top_n
    survivors are ordered by (joint count desc, pmi desc, token asc).
    """
    if rule.polarity is not Polarity.POSITIVE:
        raise ValueError("expansion runs on positive rules only")
    n = stats.sentence_count
    if n == 0:
        return []

    excluded = set(rule.tokens) | stopwords
    scored: list[tuple[int, float, str]] = []

    if len(rule.tokens) == 1:
        seed = rule.tokens[0]
        seed_count = stats.term_sentence_count[seed]
        if seed_count == 0:
            return []
        for token, token_count in stats.term_sentence_count.items():
            if token in excluded:
                continue
            joint = pair_count(stats, seed, token)
            if joint < min_count:
                continue
            score = math.log((joint / n) / ((seed_count / n) * (token_count / n)))
            if score < min_pmi:
                continue
            scored.append((joint, score, token))
    else:
        matched = [s for s in stats.sentence_tokens
                   if _rule_matches(rule.tokens, rule.match_mode, s)]
        m = len(matched)
        if m == 0:
            return []
        joint_counts: Counter = Counter()
        for sentence in matched:
            joint_counts.update(set(sentence) - excluded)
        for token, joint in joint_counts.items():
            token_count = stats.term_sentence_count[token]
            if token_count == 0 or joint < min_count:
                continue
            score = math.log((joint / n) / ((m / n) * (token_count / n)))
            if score < min_pmi:
                continue
            scored.append((joint, score, token))

    scored.sort(key=lambda item: (-item[0], -item[1], item[2]))
    return [(token, score) for _, score, token in scored[:top_n]]
