"""Deterministic tokenizer and sentence splitter.

Every component that looks at document text (co-occurrence statistics,
keyword matching, the inverted index) goes through these two functions, so
their behavior is pinned by golden tests and must not drift.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

# Maximal runs of letters/digits; apostrophes are kept when they join two
# runs ("don't"), every other character separates tokens.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")

# A sentence ends after . ! ? followed by whitespace, or at a blank line.
_BOUNDARY_RE = re.compile(r"[.!?](?=\s)|\n[ \t]*\n")


def tokenize(text: str) -> list[str]:
    """Lowercase token list; no stemming, no stopword removal."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    tokens: tuple[str, ...]
    char_span: tuple[int, int]  # [start, end) offsets into the body string


def split_sentences(doc_id: str, body: str) -> list[Sentence]:
    """Split a document body into sentences.

    Naive splitting: after terminal punctuation followed by whitespace and
    at blank lines. Abbreviations ("U.S.") oversplit; that is accepted and
    pinned by tests. Spans are whitespace-trimmed and non-overlapping;
    segments with no tokens are dropped.
    """
    cuts: list[tuple[int, int]] = []
    for m in _BOUNDARY_RE.finditer(body):
        if body[m.start()] in ".!?":
            cuts.append((m.end(), m.end()))
        else:  # blank line: the gap belongs to no sentence
            cuts.append((m.start(), m.end()))
    cuts.append((len(body), len(body)))

    sentences: list[Sentence] = []
    pos = 0
    for seg_end, next_start in cuts:
        start, end = pos, seg_end
        pos = next_start
        while start < end and body[start].isspace():
            start += 1
        while end > start and body[end - 1].isspace():
            end -= 1
        if start >= end:
            continue
        tokens = tokenize(body[start:end])
        if not tokens:
            continue
        sentences.append(
            Sentence(doc_id, len(sentences), tuple(tokens), (start, end)))
    return sentences


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set: the built-in English list, or an override file
    (one token per line, ``#`` comments)."""
    if path is None:
        text = resources.files("doris.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return frozenset(words)
