"""Topic taxonomy: a DAG of topics carrying keyword rules.

Keyword rules flow from children to parents: a node's effective rule set is
its own rules plus every rule of every descendant. Negative rules inherit
too (a disambiguation stays valid for ancestors).

File format (JSON)::

    {"topics": [{"id": "...", "label": "...", "parents": ["..."],
                 "keywords": {"positive": [...], "negative": [...]},
                 "rules": [...]}]}

Seed keyword strings follow three conventions: a string containing
double quotes is an exact phrase; an unquoted multiword string matches when
all its tokens appear in a sentence; a single word is an exact (one-token)
phrase. The optional ``rules`` array carries explicit rule objects and is
what expanded taxonomies are written with.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import textprep


class MatchMode(enum.Enum):
    EXACT_PHRASE = "exact"
    ALL_TOKENS = "all"


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class RuleSource(enum.Enum):
    SEED = "seed"
    COOCCURRENCE = "cooccur"
    EMBEDDING = "embedding"
    LDA = "lda"


DEFAULT_WEIGHTS = {
    RuleSource.SEED: 1.0,
    RuleSource.EMBEDDING: 0.7,
    RuleSource.COOCCURRENCE: 0.5,
    RuleSource.LDA: 0.5,
}

# Seed-count guideline per node; more than this warns.
SEED_WARN_THRESHOLD = 16


class TaxonomyError(Exception):
    pass


class CycleDetected(TaxonomyError):
    def __init__(self, path: list[str]):
        self.path = path
        super().__init__("cycle detected: " + " -> ".join(path))


class UnknownParent(TaxonomyError):
    def __init__(self, topic_id: str, parent_id: str):
        self.topic_id = topic_id
        self.parent_id = parent_id
        super().__init__(f"topic {topic_id!r} lists unknown parent {parent_id!r}")


class DuplicateTopicId(TaxonomyError):
    def __init__(self, topic_id: str):
        self.topic_id = topic_id
        super().__init__(f"duplicate topic id {topic_id!r}")


class UnknownTopic(TaxonomyError):
    def __init__(self, topic_id: str):
        self.topic_id = topic_id
        super().__init__(f"unknown topic {topic_id!r}")


@dataclass(frozen=True)
class KeywordRule:
    tokens: tuple[str, ...]
    match_mode: MatchMode
    polarity: Polarity
    source: RuleSource
    weight: float

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("rule tokens must be non-empty")
        for token in self.tokens:
            # Sentence tokens come out of the tokenizer lowercased; a
            # cased rule token could never match anything.
            if not token or token != token.lower():
                raise ValueError(f"rule token {token!r} must be lowercase")
        if not 0.0 < self.weight <= 1.0:
            raise ValueError(f"rule weight {self.weight} outside (0, 1]")

    @property
    def key(self) -> tuple:
        """Dedup identity: tokens + mode + polarity (source/weight ignored)."""
        return (self.tokens, self.match_mode, self.polarity)


def make_rule(tokens, match_mode, polarity, source, weight=None) -> KeywordRule:
    if weight is None:
        weight = DEFAULT_WEIGHTS[source]
    return KeywordRule(tuple(tokens), match_mode, polarity, source, weight)


def rule_from_keyword(keyword: str, polarity: Polarity) -> KeywordRule:
    """Interpret one seed keyword string (see module docstring)."""
    exact = '"' in keyword
    tokens = textprep.tokenize(keyword)
    if not tokens:
        raise TaxonomyError(f"keyword {keyword!r} has no tokens")
    if exact or len(tokens) == 1:
        mode = MatchMode.EXACT_PHRASE
    else:
        mode = MatchMode.ALL_TOKENS
    return make_rule(tokens, mode, polarity, RuleSource.SEED)


@dataclass(frozen=True)
class TopicNode:
    id: str
    label: str
    parent_ids: frozenset[str]
    own_rules: tuple[KeywordRule, ...]


@dataclass
class TopicTaxonomy:
    nodes: dict[str, TopicNode]
    children: dict[str, tuple[str, ...]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.children:
            self.children = _child_map(self.nodes)

    @property
    def roots(self) -> list[str]:
        return sorted(t for t, n in self.nodes.items() if not n.parent_ids)

    def node(self, topic_id: str) -> TopicNode:
        try:
            return self.nodes[topic_id]
        except KeyError:
            raise UnknownTopic(topic_id) from None


def _child_map(nodes: dict[str, TopicNode]) -> dict[str, tuple[str, ...]]:
    children: dict[str, list[str]] = {t: [] for t in nodes}
    for node in nodes.values():
        for p in node.parent_ids:
            children[p].append(node.id)
    return {t: tuple(sorted(c)) for t, c in children.items()}


def _check_acyclic(nodes: dict[str, TopicNode]) -> None:
    # DFS from every node; grey set detects a back edge and rebuilds the path.
    WHITE, GREY, BLACK = 0, 1, 2
    color = {t: WHITE for t in nodes}

    def visit(topic_id: str, path: list[str]):
        color[topic_id] = GREY
        path.append(topic_id)
        for parent in sorted(nodes[topic_id].parent_ids):
            if color[parent] == GREY:
                cycle = path[path.index(parent):] + [parent]
                raise CycleDetected(cycle)
            if color[parent] == WHITE:
                visit(parent, path)
        path.pop()
        color[topic_id] = BLACK

    for t in sorted(nodes):
        if color[t] == WHITE:
            visit(t, [])


def build_taxonomy(nodes: list[TopicNode]) -> TopicTaxonomy:
    """Validate structure and assemble a taxonomy from nodes."""
    by_id: dict[str, TopicNode] = {}
    for node in nodes:
        if node.id in by_id:
            raise DuplicateTopicId(node.id)
        by_id[node.id] = node
    for node in nodes:
        for p in node.parent_ids:
            if p not in by_id:
                raise UnknownParent(node.id, p)
    _check_acyclic(by_id)
    tax = TopicTaxonomy(by_id)
    tax.warnings = _structural_warnings(tax)
    return tax


def _structural_warnings(tax: TopicTaxonomy) -> list[str]:
    warnings = []
    for topic_id in sorted(tax.nodes):
        node = tax.nodes[topic_id]
        seeds = [r for r in node.own_rules if r.source is RuleSource.SEED]
        positives = [r for r in seeds if r.polarity is Polarity.POSITIVE]
        if not tax.children[topic_id] and not positives:
            warnings.append(
                f"leaf topic {topic_id!r} has no positive seed rule")
        if tax.children[topic_id] and seeds and not positives:
            warnings.append(
                f"topic {topic_id!r} adds only negative keywords")
        if len(seeds) > SEED_WARN_THRESHOLD:
            warnings.append(
                f"topic {topic_id!r} has {len(seeds)} seed rules "
                f"(guideline is 4-8)")
    return warnings


def load_taxonomy(path: str | Path) -> TopicTaxonomy:
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise TaxonomyError(f"invalid taxonomy JSON: {exc}") from exc
    if not isinstance(payload, dict) or "topics" not in payload:
        raise TaxonomyError("taxonomy file must be an object with a 'topics' list")
    nodes = []
    for entry in payload["topics"]:
        rules: list[KeywordRule] = []
        keywords = entry.get("keywords", {})
        for kw in keywords.get("positive", []):
            rules.append(rule_from_keyword(kw, Polarity.POSITIVE))
        for kw in keywords.get("negative", []):
            rules.append(rule_from_keyword(kw, Polarity.NEGATIVE))
        for obj in entry.get("rules", []):
            rules.append(make_rule(
                obj["tokens"], MatchMode(obj["mode"]), Polarity(obj["polarity"]),
                RuleSource(obj["source"]), obj.get("weight")))
        nodes.append(TopicNode(
            id=entry["id"],
            label=entry.get("label", entry["id"]),
            parent_ids=frozenset(entry.get("parents", [])),
            own_rules=tuple(rules)))
    return build_taxonomy(nodes)


def save_taxonomy(tax: TopicTaxonomy, path: str | Path) -> None:
    """Write a taxonomy with explicit rule objects; byte-deterministic."""
    topics = []
    for topic_id in sorted(tax.nodes):
        node = tax.nodes[topic_id]
        topics.append({
            "id": node.id,
            "label": node.label,
            "parents": sorted(node.parent_ids),
            "rules": [
                {"tokens": list(r.tokens), "mode": r.match_mode.value,
                 "polarity": r.polarity.value, "source": r.source.value,
                 "weight": r.weight}
                for r in node.own_rules
            ],
        })
    text = json.dumps({"topics": topics}, indent=2, ensure_ascii=False,
                      sort_keys=True)
    Path(path).write_text(text + "\n", "utf-8")


def descendants(tax: TopicTaxonomy, topic_id: str) -> set[str]:
    """Transitive closure of children, excluding the topic itself."""
    tax.node(topic_id)
    seen: set[str] = set()
    stack = list(tax.children[topic_id])
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        stack.extend(tax.children[t])
    return seen


def ancestors(tax: TopicTaxonomy, topic_id: str) -> set[str]:
    """Transitive closure of parents, excluding the topic itself."""
    tax.node(topic_id)
    seen: set[str] = set()
    stack = list(tax.nodes[topic_id].parent_ids)
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        stack.extend(tax.nodes[t].parent_ids)
    return seen


def effective_rules(tax: TopicTaxonomy, topic_id: str) -> list[KeywordRule]:
    """Own rules plus every descendant's rules, deduplicated and ordered.

    Dedup key is (tokens, mode, polarity); on collision the max-weight rule
    wins. Order: positives before negatives, then tokens lexicographically.
    """
    tax.node(topic_id)
    best: dict[tuple, KeywordRule] = {}
    for t in [topic_id] + sorted(descendants(tax, topic_id)):
        for rule in tax.nodes[t].own_rules:
            existing = best.get(rule.key)
            if existing is None or rule.weight > existing.weight:
                best[rule.key] = rule
    return sorted(best.values(),
                  key=lambda r: (r.polarity is Polarity.NEGATIVE,
                                 r.tokens, r.match_mode.value))


def replace_rules(tax: TopicTaxonomy, topic_id: str,
                  rules: tuple[KeywordRule, ...]) -> TopicTaxonomy:
    """New taxonomy with one node's own rules replaced."""
    nodes = dict(tax.nodes)
    nodes[topic_id] = replace(tax.node(topic_id), own_rules=rules)
    return build_taxonomy(list(nodes.values()))


def default_taxonomy_path() -> Path:
    from importlib import resources
    return Path(str(resources.files("doris.data").joinpath("default_taxonomy.json")))


def load_default_taxonomy() -> TopicTaxonomy:
    return load_taxonomy(default_taxonomy_path())
