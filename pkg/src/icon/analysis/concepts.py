"""Concept formation: group terms by thesaurus synonymy and attach definitions."""

from __future__ import annotations

from .model import Concept, Dictionary, Interpretation, Term, concept_kind


class UnionFind:
    def __init__(self):
        self._parent: dict[str, str] = {}

    def find(self, item: str) -> str:
        parent = self._parent.setdefault(item, item)
        if parent != item:
            parent = self.find(parent)
            self._parent[item] = parent
        return parent

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Deterministic canonical element: the lexicographically smaller.
            low, high = sorted((ra, rb))
            self._parent[high] = low


def synonym_groups(dictionaries: list[Dictionary]) -> UnionFind:
    """Union-find over lemma keys linked by thesaurus entries."""
    groups = UnionFind()
    for dictionary in dictionaries:
        if dictionary.source_kind != "thesaurus":
            continue
        for entry in dictionary.entries:
            for synonym in entry.synonyms:
                groups.union(entry.headword, synonym)
    return groups


def lookup_interpretations(
    lemma_keys: list[str], dictionaries: list[Dictionary]
) -> tuple[Interpretation, ...]:
    """All matching definitions, deduplicated, in dictionary order."""
    seen = set()
    found = []
    for dictionary in dictionaries:
        for key in lemma_keys:
            for definition in dictionary.definitions(key):
                pair = (dictionary.id, definition)
                if pair not in seen:
                    seen.add(pair)
                    found.append(Interpretation(dictionary.id, definition))
    return tuple(found)


def form_concepts(terms: list[Term], dictionaries: list[Dictionary]) -> list[Concept]:
    """Partition terms into concepts.

    Terms sharing a lemma_key or linked through thesaurus synonymy fold into
    one concept. The preferred label is the highest-scoring member (ties by
    lemma_key); the concept id is the label itself, which is unique because
    groups partition the key space. Output sorted by label.
    """
    groups = synonym_groups(dictionaries)
    by_root: dict[str, list[Term]] = {}
    for term in terms:
        by_root.setdefault(groups.find(term.lemma_key), []).append(term)

    concepts = []
    for members in by_root.values():
        members.sort(key=lambda t: (-t.score, t.lemma_key))
        label = members[0].lemma_key
        keys = sorted({t.lemma_key for t in members})
        concepts.append(
            Concept(
                id=label,
                label=label,
                synonyms=tuple(keys),
                kind=concept_kind(label),
                interpretations=lookup_interpretations(keys, dictionaries),
                provenance=tuple(keys),
            )
        )
    concepts.sort(key=lambda c: c.label)
    return concepts
