"""Relation extraction: lexico-syntactic patterns plus sentence-window PMI.

Patterns match on token surfaces (markers) and concept synonym phrases on
lemmas (slots), sentence by sentence:

    X – это Y        is_a(X, Y)        "isa_dash"
    X является Y     is_a(X, Y)        "isa_verb"
    X, такой как Y   is_a(Y, X)        "isa_such_as"
    X состоит из Y   part_of(Y, X)     "part_of_consists"
    X включает Y     part_of(Y, X)     "part_of_includes"

Pattern hits carry confidence 0.9. The co-occurrence pass links concepts
appearing in the same sentence when ln(n_ab * S / (n_a * n_b)) clears the
PMI threshold, with confidence min(1, PMI / pmi_cap).
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from itertools import combinations

from .model import Concept, Evidence, Relation
from .text import Token
from ..config import AnalysisConfig

PATTERN_CONFIDENCE = 0.9

_DASHES = {"-", "–", "—"}
_SUCH = {"такой", "такая", "такое", "такие"}


class PhraseMatcher:
    """Longest-match lookup of concept synonym phrases in lemma sequences."""

    def __init__(self, concepts: list[Concept]):
        self._by_phrase: dict[tuple[str, ...], str] = {}
        self.max_len = 1
        for concept in sorted(concepts, key=lambda c: c.id):
            for synonym in concept.synonyms:
                phrase = tuple(synonym.split(" "))
                # First concept (by id) wins a contested phrase.
                self._by_phrase.setdefault(phrase, concept.id)
                self.max_len = max(self.max_len, len(phrase))

    def match_forward(self, tokens: list[Token], start: int) -> str | None:
        for length in range(min(self.max_len, len(tokens) - start), 0, -1):
            window = tokens[start : start + length]
            if any(t.kind != "word" for t in window):
                continue
            hit = self._by_phrase.get(tuple(t.lemma for t in window))
            if hit is not None:
                return hit
        return None

    def match_backward(self, tokens: list[Token], end: int) -> str | None:
        for length in range(min(self.max_len, end + 1), 0, -1):
            window = tokens[end - length + 1 : end + 1]
            if any(t.kind != "word" for t in window):
                continue
            hit = self._by_phrase.get(tuple(t.lemma for t in window))
            if hit is not None:
                return hit
        return None

    def present(self, tokens: list[Token]) -> set[str]:
        found = set()
        for start in range(len(tokens)):
            hit = self.match_forward(tokens, start)
            if hit is not None:
                found.add(hit)
        return found


def sentence_span(tokens: list[Token]) -> tuple[int, int] | None:
    positions = [t.position for t in tokens if t.kind != "punct"]
    if not positions:
        return None
    return (positions[0], positions[-1] + 1)


def _pattern_hits(tokens: list[Token], matcher: PhraseMatcher):
    """Yield (source_cid, target_cid, rtype, pattern_id) for one sentence."""
    for i, token in enumerate(tokens):
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        after = tokens[i + 2] if i + 2 < len(tokens) else None
        if (
            token.kind == "punct"
            and token.surface in _DASHES
            and nxt is not None
            and nxt.surface == "это"
        ):
            x = matcher.match_backward(tokens, i - 1)
            y = matcher.match_forward(tokens, i + 2)
            if x and y:
                yield x, y, "is_a", "isa_dash"
        elif token.kind == "word" and token.surface in ("является", "являются"):
            x = matcher.match_backward(tokens, i - 1)
            y = matcher.match_forward(tokens, i + 1)
            if x and y:
                yield x, y, "is_a", "isa_verb"
        elif (
            token.surface == ","
            and nxt is not None
            and nxt.surface in _SUCH
            and after is not None
            and after.surface == "как"
        ):
            x = matcher.match_backward(tokens, i - 1)
            y = matcher.match_forward(tokens, i + 3)
            if x and y:
                yield y, x, "is_a", "isa_such_as"
        elif (
            token.kind == "word"
            and token.surface in ("состоит", "состоят")
            and nxt is not None
            and nxt.surface == "из"
        ):
            x = matcher.match_backward(tokens, i - 1)
            y = matcher.match_forward(tokens, i + 2)
            if x and y:
                yield y, x, "part_of", "part_of_consists"
        elif token.kind == "word" and token.surface in ("включает", "включают"):
            start = i + 1
            if (
                nxt is not None
                and nxt.surface == "в"
                and after is not None
                and after.surface == "себя"
            ):
                start = i + 3
            x = matcher.match_backward(tokens, i - 1)
            y = matcher.match_forward(tokens, start)
            if x and y:
                yield y, x, "part_of", "part_of_includes"


def extract_relations(
    doc_sentences: dict[str, list[list[Token]]],
    concepts: list[Concept],
    config: AnalysisConfig,
) -> list[Relation]:
    matcher = PhraseMatcher(concepts)
    merged: dict[tuple[str, str, str], dict] = {}

    def add(source: str, target: str, rtype: str, confidence: float, ev: Evidence):
        if source == target:
            return
        slot = merged.setdefault(
            (source, target, rtype), {"confidence": 0.0, "evidence": []}
        )
        slot["confidence"] = max(slot["confidence"], confidence)
        if ev not in slot["evidence"]:
            slot["evidence"].append(ev)

    sentence_count = 0
    concept_sentences: Counter[str] = Counter()
    pair_sentences: Counter[tuple[str, str]] = Counter()
    pair_evidence: dict[tuple[str, str], list[Evidence]] = defaultdict(list)

    for doc_id in sorted(doc_sentences):
        for tokens in doc_sentences[doc_id]:
            span = sentence_span(tokens)
            if span is None:
                continue
            sentence_count += 1
            for source, target, rtype, pattern_id in _pattern_hits(tokens, matcher):
                add(
                    source,
                    target,
                    rtype,
                    PATTERN_CONFIDENCE,
                    Evidence(doc_id, span, pattern_id),
                )
            present = matcher.present(tokens)
            for cid in present:
                concept_sentences[cid] += 1
            for a, b in combinations(sorted(present), 2):
                pair_sentences[(a, b)] += 1
                pair_evidence[(a, b)].append(Evidence(doc_id, span, "pmi"))

    for (a, b), n_ab in pair_sentences.items():
        pmi = math.log(
            (n_ab * sentence_count) / (concept_sentences[a] * concept_sentences[b])
        )
        if pmi < config.pmi_min:
            continue
        confidence = min(1.0, pmi / config.pmi_cap)
        for ev in pair_evidence[(a, b)]:
            add(a, b, "associated_with", confidence, ev)

    relations = [
        Relation(
            source=source,
            target=target,
            rtype=rtype,
            confidence=slot["confidence"],
            evidence=tuple(slot["evidence"]),
        )
        for (source, target, rtype), slot in merged.items()
    ]
    relations.sort(key=lambda r: (r.source, r.target, r.rtype))
    return relations
