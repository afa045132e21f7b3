#!/usr/bin/env python3
"""Regenerate the committed test fixtures.

    python3 scripts/make_fixtures.py

Writes tests/fixtures/corpus.jsonl (60 documents, 6 synthetic authors) and
tests/fixtures/embeddings.txt (200 tokens, 16 dimensions). Deterministic:
reruns produce identical bytes, and the outputs are committed so the test
suite never regenerates them.

The corpus is built to make several suite-level properties hold *by
construction*, and this script asserts each of them:

- Every non-stopword token in a document belongs to that document's theme
  pool. Sentence "glue" is drawn from the packaged stopword list only, so
  keyword expansion (which ignores stopwords) can only ever import
  theme-pool words into a topic.
- Economy-family vocabulary appears only in economy-family documents, so
  the per-author count of economy-annotated documents is fixed no matter
  which keywords expansion discovers. Those counts are non-decreasing
  across the last four authors.
- "oil" appears mainly in Proclamations and ExecutiveActions (7 of 8).
- Every document contains the token "we" (handy as a match-all query).
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from doris import textprep  # noqa: E402

OUT_DIR = ROOT / "tests" / "fixtures"

# --------------------------------------------------------------- corpus

POOLS = {
    "econ": ["economy", "economic", "prosperity", "inflation", "budget",
             "market", "growth", "taxes", "banks", "recession"],
    "trade": ["trade", "tariff", "exports", "imports", "commerce",
              "merchants", "shipping", "ports", "free"],
    "jobs": ["jobs", "employment", "unemployment", "wages", "labor",
             "workers", "factories", "strikes"],
    "climate": ["climate", "emissions", "drought", "conservation",
                "warming", "global", "forests", "rivers"],
    "foreign": ["diplomacy", "treaty", "allies", "ambassador", "foreign",
                "embassy", "negotiations", "peace"],
    "security": ["security", "border", "safety", "police", "patrol",
                 "national"],
    "terror": ["terror", "terrorism", "terrorists", "extremists", "plots"],
    "nuclear": ["nuclear", "atomic", "warheads", "disarmament", "reactors",
                "uranium"],
    "defense": ["defense", "military", "army", "navy", "armed", "forces",
                "soldiers", "fleet", "war", "conflict"],
    "health": ["health", "medicine", "hospitals", "disease", "healthcare",
               "doctors", "epidemic", "vaccines"],
    "rights": ["rights", "liberty", "freedom", "human", "equality",
               "justice"],
    "native": ["cherokee", "tribes", "apache", "native", "americans",
               "tribal", "reservations", "indian", "ocean"],
    "gay": ["gay", "lesbian", "sex", "marriage"],
    "race": ["segregation", "civil", "slavery", "emancipation", "racial"],
    "oil": ["oil", "petroleum", "pipeline", "refinery", "barrels",
            "drilling", "gas", "wells"],
}

# Single-word positive taxonomy seeds per theme; forced into the first
# sentences so every themed document clears the evidence threshold.
SEEDS = {
    "econ": ["economy", "economic", "prosperity", "inflation", "budget"],
    "trade": ["tariff", "trade", "exports", "imports", "commerce"],
    "jobs": ["jobs", "employment", "unemployment", "wages", "labor",
             "workers"],
    "climate": ["climate", "emissions", "drought", "conservation"],
    "foreign": ["diplomacy", "treaty", "allies", "ambassador", "foreign"],
    "security": ["security", "border", "safety"],
    "terror": ["terror", "terrorism", "terrorists", "extremists"],
    "nuclear": ["nuclear", "atomic", "warheads", "disarmament"],
    "defense": ["defense", "military", "army", "navy"],
    "health": ["health", "medicine", "hospitals", "disease", "healthcare"],
    "rights": ["rights", "liberty", "freedom"],
    "native": ["cherokee", "tribes", "apache", "tribal", "reservations"],
    "gay": ["gay", "lesbian"],
    "race": ["segregation", "slavery", "emancipation", "racial"],
    "oil": ["oil", "petroleum"],
}

ECON_THEMES = {"econ", "trade", "jobs", "climate"}
ECON_WORDS = {w for t in ECON_THEMES for w in POOLS[t]}

# Slot templates; glue words are all in the packaged stopword list.
TEMPLATES = [
    "We shall have {a} and {b} in this {c}.",
    "There will be more {a} for all of us now.",
    "It is the {a} of our {b} that we have now.",
    "Our {a} and their {b} were with us through the {c}.",
    "All of this will be for the {a} and for the {b}.",
    "No {a} can be against the {b} of us all.",
    "Upon this {a} we shall have our {b} again.",
    "Such {a} as we have had before will be with us again.",
    "What we do now for {a} will be for them too.",
    "More {a} and more {b} are now upon us.",
]

# One crafted sentence per theme exercising its phrase or all-tokens rule.
PHRASE_SENTENCES = {
    "trade": "We shall have free trade with all of them.",
    "security": "Our national security will be the safety of us all.",
    "rights": "All human rights are for all of us.",
    "race": "We shall have civil rights for all of them now.",
    "climate": "There will be global warming upon us all.",
    "native": "The native americans shall have their reservations again.",
    "gay": "We are for gay rights and for same sex marriage now.",
    "defense": "Our armed forces shall be with us through this war.",
}

VETO_SENTENCE = "The tribes over the indian ocean are not with us now."
NONADJACENT_DEFENSE = "Our forces shall be armed again."

# Tokens a theme's phrase sentence borrows from another pool. The borrow
# is deliberate: "civil rights" / "gay rights" also carrying the
# human-rights seed "rights" mirrors how those topics nest.
EXTRA_ALLOWED = {"race": {"rights"}, "gay": {"rights"}}

AUTHORS = [
    ("Ada Thorne", 1869),
    ("Brock Ellison", 1885),
    ("Cora Whitfield", 1901),
    ("Dane Mercer", 1917),
    ("Edith Calloway", 1933),
    ("Felix Navarro", 1953),
]

# (year offset, theme, kind, special)
PLAN = {
    "Ada Thorne": [
        (0, "rights", "InauguralAddress", "long"),
        (0, "native", "PublicSpeech", "native_ok"),
        (1, "native", "Proclamation", "native_veto"),
        (2, "defense", "StateOfUnionReport", ""),
        (3, "defense", "PublicSpeech", ""),
        (3, "foreign", "StateOfUnionReport", ""),
        (4, "foreign", "Other", ""),
        (5, "race", "CommencementAddress", ""),
        (6, "econ", "StateOfUnionReport", ""),
        (7, "health", "PressRelease", ""),
    ],
    "Brock Ellison": [
        (0, "econ", "InauguralAddress", ""),
        (1, "trade", "StateOfUnionReport", ""),
        (1, "oil", "Proclamation", ""),
        (2, "oil", "ExecutiveAction", ""),
        (3, "defense", "StateOfUnionReport", ""),
        (4, "foreign", "PublicSpeech", ""),
        (5, "security", "StateOfUnionReport", ""),
        (5, "native", "PublicSpeech", ""),
        (6, "health", "Other", ""),
        (7, "race", "PublicSpeech", ""),
    ],
    "Cora Whitfield": [
        (0, "econ", "InauguralAddress", ""),
        (1, "trade", "StateOfUnionReport", ""),
        (2, "jobs", "CampaignSpeech", ""),
        (2, "oil", "Proclamation", ""),
        (3, "oil", "ExecutiveAction", ""),
        (4, "foreign", "StateOfUnionReport", ""),
        (5, "security", "PublicSpeech", ""),
        (5, "terror", "StateOfUnionReport", ""),
        (6, "health", "PressRelease", ""),
        (7, "rights", "CommencementAddress", ""),
    ],
    "Dane Mercer": [
        (0, "econ", "InauguralAddress", ""),
        (1, "jobs", "CampaignSpeech", ""),
        (1, "jobs", "StateOfUnionReport", ""),
        (2, "trade", "StateOfUnionReport", ""),
        (3, "oil", "ExecutiveAction", ""),
        (4, "oil", "Proclamation", ""),
        (5, "defense", "StateOfUnionReport", ""),
        (6, "native", "PublicSpeech", ""),
        (6, "foreign", "PublicSpeech", ""),
        (7, "health", "PressRelease", ""),
    ],
    "Edith Calloway": [
        (0, "econ", "InauguralAddress", ""),
        (0, "jobs", "CampaignSpeech", ""),
        (1, "jobs", "StateOfUnionReport", ""),
        (2, "econ", "StateOfUnionReport", ""),
        (3, "trade", "StateOfUnionReport", ""),
        (4, "climate", "PublicSpeech", ""),
        (5, "oil", "Proclamation", ""),
        (6, "defense", "StateOfUnionReport", ""),
        (6, "foreign", "Other", ""),
        (7, "race", "PublicSpeech", ""),
    ],
    "Felix Navarro": [
        (0, "econ", "InauguralAddress", ""),
        (1, "econ", "StateOfUnionReport", ""),
        (1, "jobs", "CampaignSpeech", ""),
        (2, "jobs", "StateOfUnionReport", ""),
        (3, "trade", "StateOfUnionReport", ""),
        (4, "trade", "PressRelease", "oil_mention"),
        (5, "climate", "PublicSpeech", ""),
        (6, "climate", "StateOfUnionReport", ""),
        (6, "nuclear", "StateOfUnionReport", ""),
        (7, "gay", "CommencementAddress", ""),
    ],
}

ECON_SCHEDULE = {"Ada Thorne": 1, "Brock Ellison": 2, "Cora Whitfield": 3,
                 "Dane Mercer": 4, "Edith Calloway": 6, "Felix Navarro": 8}

LONG_SENTENCE = ("We have for all of us the liberty and the freedom and "
                 "the justice and the equality that shall be for all of "
                 "them and for their own through all that we do and "
                 "through all that we have now and will have again.")


def _fill(template: str, rng: random.Random, slot_pool: list[str],
          forced: str | None = None) -> str:
    n = template.count("{")
    words = [rng.choice(slot_pool) for _ in range(n)]
    if forced is not None and n:
        words[0] = forced
    keys = ["a", "b", "c"][:n]
    return template.format(**dict(zip(keys, words)))


def _doc_body(doc_id: str, theme: str, special: str) -> str:
    rng = random.Random(f"body:{doc_id}")
    slot_pool = [w for w in POOLS[theme] if w not in ("indian", "ocean")]
    seeds = SEEDS[theme]
    sentences = []
    sentences.append(_fill(TEMPLATES[0], rng, slot_pool, rng.choice(seeds)))
    count = rng.randrange(6, 10)
    for i in range(1, count):
        forced = rng.choice(seeds) if i < 4 else None
        sentences.append(_fill(rng.choice(TEMPLATES), rng, slot_pool, forced))
    if theme in PHRASE_SENTENCES:
        sentences.insert(rng.randrange(1, len(sentences)),
                         PHRASE_SENTENCES[theme])
    if theme == "defense":
        sentences.append(NONADJACENT_DEFENSE)
    if special == "native_ok":
        sentences.insert(2, VETO_SENTENCE)
    elif special == "native_veto":
        # Every sentence with native evidence also hits the negative rule.
        sentences = [VETO_SENTENCE,
                     "The apache over the indian ocean were not with us.",
                     _fill(TEMPLATES[7], rng, ["ocean"]),
                     _fill(TEMPLATES[4], rng, ["ocean", "indian"])]
    elif special == "long":
        sentences.insert(1, LONG_SENTENCE)
    elif special == "oil_mention":
        sentences.append("We shall have oil and petroleum in our ports.")
    mid = len(sentences) // 2
    enders = rng.choices("..!.?.", k=len(sentences))
    dressed = [s[:-1] + e for s, e in zip(sentences, enders)]
    return " ".join(dressed[:mid]) + "\n\n" + " ".join(dressed[mid:])


def _title(doc_id: str, theme: str, kind: str) -> str:
    rng = random.Random(f"title:{doc_id}")
    a, b = rng.sample(POOLS[theme], 2)
    return f"On {a.capitalize()} and {b.capitalize()}"


def make_corpus() -> list[dict]:
    records = []
    stop = textprep.load_stopwords()
    veto_allowed = set(POOLS["native"]) | set(POOLS["defense"])
    serial = 0
    for author, era in AUTHORS:
        for year_offset, theme, kind, special in PLAN[author]:
            serial += 1
            doc_id = f"doc-{serial:03d}"
            rng = random.Random(f"date:{doc_id}")
            date = (f"{era + year_offset:04d}-{rng.randrange(1, 13):02d}-"
                    f"{rng.randrange(1, 29):02d}")
            body = _doc_body(doc_id, theme, special)
            record = {"id": doc_id, "title": _title(doc_id, theme, kind),
                      "author": author, "date": date, "kind": kind,
                      "text": body}
            if serial in (7, 33):  # leniency: parsers must ignore extras
                record["archive"] = f"shelf-{serial}"
            records.append(record)

            tokens = set(textprep.tokenize(body))
            allowed = stop | set(POOLS[theme]) | EXTRA_ALLOWED.get(theme, set())
            if special == "native_veto":
                allowed |= veto_allowed
            if special == "oil_mention":
                allowed |= {"oil", "petroleum"}
            stray = tokens - allowed
            assert not stray, f"{doc_id}: stray tokens {stray}"
            assert "we" in tokens, f"{doc_id}: missing the match-all token"
            if theme not in ECON_THEMES:
                assert not tokens & ECON_WORDS, f"{doc_id}: economy leak"
    assert len(records) == 60
    assert len({r["id"] for r in records}) == 60

    by_author = {a: [r for r in records if r["author"] == a]
                 for a, _ in AUTHORS}
    for (author, _), want in zip(AUTHORS, ECON_SCHEDULE.values()):
        themed = [r for r, (_, theme, _, _) in zip(by_author[author],
                                                   PLAN[author])
                  if theme in ECON_THEMES]
        assert len(themed) == ECON_SCHEDULE[author], author
    trend = [ECON_SCHEDULE[a] for a, _ in AUTHORS[-4:]]
    assert trend == sorted(trend), "economy trend must be non-decreasing"

    kinds = {r["kind"] for r in records}
    assert len(kinds) == 9, f"want all 9 kinds, got {sorted(kinds)}"
    oil_docs = [r for r in records if "oil" in textprep.tokenize(r["text"])]
    stated = [r["kind"] in ("Proclamation", "ExecutiveAction")
              for r in oil_docs]
    assert len(oil_docs) == 8 and sum(stated) == 7, "oil distribution"
    return records


# ------------------------------------------------------------ embeddings

CLUSTERS = {
    "royal": ["king", "queen", "crown"],
    "tropical": ["banana", "mango"],
    "warfare": ["war", "conflict", "military"],
    "petro": ["oil", "petroleum", "drilling"],
    "tradewinds": ["trade", "tariff", "shipping", "merchants"],
    "laborforce": ["jobs", "employment", "factories"],
    "economic": ["economy", "market", "growth"],
    "medical": ["health", "doctors", "vaccines"],
    "atomfield": ["nuclear", "uranium", "reactors"],
}

FILLERS = """
anchor anthem apron arch arrow attic autumn badge bakery ballad barn basket
beacon bell bench birch blanket boulder braid brass breeze brick bridge brook
bucket bugle bundle cabin cable candle canoe canvas canyon carpet cart cedar
cellar chalk chapel chart chimney cider circus clay cliff clock cloth clover
cobble comet compass copper coral cottage crate creek crest crow cupboard
dairy dawn delta desk dove drum dusk echo elm ember fable feather fern ferry
fiddle flint fog fountain fox frost gable galley garden gate gavel glacier
glade goblet gorge granite grove gull hammer harbor harp hatch hawthorn hazel
hearth heather hedge helm hill hollow horizon inkwell island ivory ivy jetty
kettle kiln knoll ladder lantern larch ledge lily limestone loft loom lumber
mantel maple marble marsh mast meadow mill mirror moss moth nectar nest oak
oar orchard otter oxcart paddle pane parlor pasture pebble pier pine pitcher
plank plaza plume pond poplar porch prairie quarry quill rafter raven reed
ridge rill roost rope rudder saddle sail sandbar satchel shale shore sketch
slate sled spruce stable steeple stone summit thicket timber trellis valley
vale wagon walnut weir willow windmill wharf
""".split()

DIM = 16


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def make_embeddings() -> list[tuple[str, np.ndarray]]:
    themed = [w for members in CLUSTERS.values() for w in members]
    fillers = FILLERS[:200 - len(themed)]
    assert len(set(themed + fillers)) == 200, "token collision"

    rng = np.random.default_rng(20260815)
    bases = []
    while len(bases) < len(CLUSTERS):
        candidate = _unit(rng.standard_normal(DIM))
        if all(abs(candidate @ b) < 0.35 for b in bases):
            bases.append(candidate)

    vectors: list[tuple[str, np.ndarray]] = []
    for base, members in zip(bases, CLUSTERS.values()):
        for word in members:
            vectors.append((word, _unit(base + 0.25
                                        * _unit(rng.standard_normal(DIM)))))
    themed_matrix = np.array([v for _, v in vectors])
    for word in fillers:
        while True:
            v = _unit(rng.standard_normal(DIM))
            if np.max(themed_matrix @ v) < 0.50:
                vectors.append((word, v))
                break

    # The 0.55 neighbor threshold must never be a boundary call.
    start = 0
    for members in CLUSTERS.values():
        block = themed_matrix[start:start + len(members)]
        inner = block @ block.T
        assert inner.min() > 0.60, "cluster too loose"
        start += len(members)
    start = 0
    for members in CLUSTERS.values():
        block = themed_matrix[start:start + len(members)]
        rest = np.vstack([themed_matrix[:start],
                          themed_matrix[start + len(members):]])
        assert np.max(block @ rest.T) < 0.50, "clusters overlap"
        start += len(members)
    return vectors


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    records = make_corpus()
    corpus_path = OUT_DIR / "corpus.jsonl"
    with corpus_path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {corpus_path} ({len(records)} documents)")

    vectors = make_embeddings()
    emb_path = OUT_DIR / "embeddings.txt"
    with emb_path.open("w", encoding="utf-8") as fh:
        for word, vec in vectors:
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
    print(f"wrote {emb_path} ({len(vectors)} vectors)")


if __name__ == "__main__":
    main()
