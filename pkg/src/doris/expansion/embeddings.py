"""Pretrained word-vector loading and cosine nearest neighbors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus import ParseIssue


class EmptyFile(ValueError):
    pass


class UnknownToken(KeyError):
    pass


@dataclass
class EmbeddingTable:
    dimension: int
    tokens: list[str]
    matrix: np.ndarray  # (len(tokens), dimension) float64
    _row: dict[str, int]

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._row

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.matrix[self._row[token.lower()]]
        except KeyError:
            raise UnknownToken(token) from None


def load_embeddings(path: str | Path) -> tuple[EmbeddingTable, list[ParseIssue]]:
    """Parse a text vector file: ``token v1 ... vD`` per line, D fixed by the
    first parseable line. Bad lines are skipped and reported."""
    issues: list[ParseIssue] = []
    tokens: list[str] = []
    rows: list[list[float]] = []
    row_of: dict[str, int] = {}
    dimension: int | None = None
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(),
                                  start=1):
        parts = line.split()
        if not parts:
            continue
        token, values = parts[0].lower(), parts[1:]
        try:
            vector = [float(v) for v in values]
        except ValueError:
            issues.append(ParseIssue(
                "malformed_vector", f"non-numeric value for {token!r}",
                lineno, severity="warning"))
            continue
        if not vector:
            issues.append(ParseIssue(
                "malformed_vector", f"no values for {token!r}",
                lineno, severity="warning"))
            continue
        if dimension is None:
            dimension = len(vector)
        if len(vector) != dimension:
            issues.append(ParseIssue(
                "dimension_mismatch",
                f"{token!r} has {len(vector)} values, expected {dimension}",
                lineno, severity="warning"))
            continue
        if token in row_of:
            issues.append(ParseIssue(
                "duplicate_token", f"repeated token {token!r}, keeping first",
                lineno, severity="warning"))
            continue
        row_of[token] = len(tokens)
        tokens.append(token)
        rows.append(vector)
    if dimension is None or not tokens:
        raise EmptyFile(f"no vectors in {path}")
    table = EmbeddingTable(dimension, tokens, np.array(rows, dtype=np.float64),
                           row_of)
    return table, issues


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = math.sqrt(float(u @ u))
    nv = math.sqrt(float(v @ v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v) / (nu * nv)


def embedding_neighbors(table: EmbeddingTable, token: str,
                        threshold: float = 0.55,
                        top_n: int = 10) -> list[tuple[str, float]]:
    """All vocabulary tokens with cosine >= threshold against ``token``,
    excluding the token itself, ordered by (cosine desc, token asc)."""
    folded = token.lower()
    if folded not in table._row:
        raise UnknownToken(token)
    query = table.vector(folded)
    qnorm = math.sqrt(float(query @ query))
    norms = np.sqrt(np.einsum("ij,ij->i", table.matrix, table.matrix))
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = (table.matrix @ query) / (norms * qnorm)
    sims = np.nan_to_num(sims, nan=0.0, posinf=0.0, neginf=0.0)
    candidates = [(float(sims[i]), t)
                  for i, t in enumerate(table.tokens)
                  if t != folded and sims[i] >= threshold]
    candidates.sort(key=lambda item: (-item[0], item[1]))
    return [(t, s) for s, t in candidates[:top_n]]
