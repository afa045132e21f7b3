"""Topic-model training by collapsed Gibbs sampling, plus topic matching.

The sweep itself lives in a compiled kernel (``_gibbs``) with a pure-Python
twin (``_gibbs_py``); whichever imports is used. Both produce bit-identical
counts for the same seed, so trained models do not depend on which kernel
ran. ``benchmarks/bench_gibbs.py`` compares their speed.

Topic counts in the hundreds behave best on real corpora; matching a
learned topic to a taxonomy topic goes by top-word overlap with the
taxonomy's positive rules, with an explicit override map for the cases a
human wants to pin or suppress.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..taxonomy import Polarity, TopicTaxonomy, UnknownTopic, effective_rules

try:
    from . import _gibbs as _kernel
    _KERNEL_NAME = "cython"
except ImportError:  # extension not built; use the slow twin
    from . import _gibbs_py as _kernel
    _KERNEL_NAME = "python"

VOCAB_MIN_FREQ = 5


def kernel_name() -> str:
    """Which Gibbs kernel is active: "cython" or "python"."""
    return _KERNEL_NAME


class EmptyVocabulary(ValueError):
    pass


class InvalidK(ValueError):
    pass


@dataclass
class LdaModel:
    n_topics: int
    alpha: float
    beta: float
    vocabulary: list[str]
    topic_word: np.ndarray  # (K, V), rows sum to 1
    doc_topic: np.ndarray   # (M, K), rows sum to 1
    seed: int
    iterations: int
    doc_indices: list[int]  # positions of retained (non-empty) input docs


def build_vocabulary(doc_tokens, stopwords=frozenset(),
                     min_freq: int = VOCAB_MIN_FREQ) -> list[str]:
    """Sorted vocabulary of non-stopword tokens with total corpus frequency
    >= min_freq."""
    freq: Counter = Counter()
    for tokens in doc_tokens:
        freq.update(tokens)
    return sorted(t for t, n in freq.items()
                  if n >= min_freq and t not in stopwords)


def train_lda(doc_tokens, n_topics: int, iterations: int = 200,
              seed: int = 42, alpha: float | None = None,
              beta: float | None = None, stopwords=frozenset(),
              min_freq: int = VOCAB_MIN_FREQ) -> LdaModel:
    """Train a topic model over bags of tokens.

    Documents with no in-vocabulary tokens are dropped (their input
    positions are recorded in ``doc_indices``). Posterior means are
    smoothed: topic_word = (n_kw + beta) / (n_k + V*beta) and
    doc_topic = (n_dk + alpha) / (n_d + K*alpha), with alpha defaulting to
    50/K and beta to 0.01. Deterministic for a fixed (corpus, params, seed).
    """
    if n_topics < 2:
        raise InvalidK(f"need at least 2 topics, got {n_topics}")
    vocabulary = build_vocabulary(doc_tokens, stopwords, min_freq)
    if not vocabulary:
        raise EmptyVocabulary(
            f"no tokens with corpus frequency >= {min_freq}")
    word_id = {t: i for i, t in enumerate(vocabulary)}

    offsets = [0]
    words: list[int] = []
    doc_indices: list[int] = []
    for position, tokens in enumerate(doc_tokens):
        ids = [word_id[t] for t in tokens if t in word_id]
        if not ids:
            continue
        words.extend(ids)
        offsets.append(len(words))
        doc_indices.append(position)
    if not doc_indices:
        raise EmptyVocabulary("every document is empty after filtering")

    if alpha is None:
        alpha = 50.0 / n_topics
    if beta is None:
        beta = 0.01

    ndk, nkw, nk = _kernel.sample_topic_counts(
        np.array(offsets, dtype=np.int64), np.array(words, dtype=np.int32),
        n_topics, len(vocabulary), alpha, beta, iterations, seed)

    v = len(vocabulary)
    doc_len = np.diff(np.array(offsets, dtype=np.int64)).astype(np.float64)
    topic_word = (nkw + beta) / (nk[:, None] + v * beta)
    doc_topic = (ndk + alpha) / (doc_len[:, None] + n_topics * alpha)
    return LdaModel(n_topics, alpha, beta, vocabulary, topic_word, doc_topic,
                    seed, iterations, doc_indices)


def top_words(model: LdaModel, k: int, n: int) -> list[str]:
    """The n most probable words of topic k; ties break token-ascending."""
    if not 0 <= k < model.n_topics:
        raise IndexError(f"topic index {k} outside [0, {model.n_topics})")
    if n <= 0:
        return []
    row = model.topic_word[k]
    ranked = sorted(zip(row, model.vocabulary), key=lambda p: (-p[0], p[1]))
    return [t for _, t in ranked[:n]]


def match_lda_topics(model: LdaModel, tax: TopicTaxonomy,
                     overrides: dict[int, str | None] | None = None,
                     min_overlap: int = 2,
                     inspected_words: int = 10) -> dict[int, str]:
    """Map learned topic indices to taxonomy topic ids.

    Automatic rule: topic k maps to the taxonomy topic whose positive rule
    tokens share the most of topWords(k, inspected_words), requiring at
    least min_overlap; ties go to the smaller topic id. Overrides win
    unconditionally (value None suppresses the mapping).
    """
    positive_tokens: dict[str, set[str]] = {}
    for topic_id in sorted(tax.nodes):
        tokens: set[str] = set()
        for rule in effective_rules(tax, topic_id):
            if rule.polarity is Polarity.POSITIVE:
                tokens.update(rule.tokens)
        positive_tokens[topic_id] = tokens

    mapping: dict[int, str] = {}
    for k in range(model.n_topics):
        top = set(top_words(model, k, inspected_words))
        best_id = None
        best_overlap = 0
        for topic_id in sorted(tax.nodes):
            overlap = len(top & positive_tokens[topic_id])
            if overlap >= min_overlap and overlap > best_overlap:
                best_id, best_overlap = topic_id, overlap
        if best_id is not None:
            mapping[k] = best_id

    for index, target in (overrides or {}).items():
        if target is None:
            mapping.pop(index, None)
        else:
            if target not in tax.nodes:
                raise UnknownTopic(target)
            mapping[index] = target
    return mapping


def load_lda_overrides(path: str | Path) -> dict[int, str | None]:
    """Override file: JSON map of topic index to taxonomy id (null
    suppresses), e.g. ``{"7": "security", "12": null}``."""
    payload = json.loads(Path(path).read_text("utf-8"))
    return {int(k): v for k, v in payload.items()}
