"""Value types produced and consumed by the analysis stages."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import IconError

RELATION_TYPES = ("is_a", "part_of", "synonym_of", "associated_with")
CONCEPT_KINDS = ("object", "process")
DICTIONARY_KINDS = ("encyclopedic", "explanatory", "thesaurus")

# Lemmas ending in these mark a process concept; everything else is an object.
PROCESS_SUFFIXES = ("ние", "ция", "ка", "ство")


@dataclass(frozen=True)
class Term:
    lemma_key: str
    tf: int
    df: int
    tfidf: float
    cvalue: float | None  # multiword candidates only
    occurrences: tuple[tuple[str, int], ...]  # (doc_id, token position)

    @property
    def length(self) -> int:
        return self.lemma_key.count(" ") + 1

    @property
    def score(self) -> float:
        return self.tfidf if self.cvalue is None else self.cvalue

    def to_dict(self) -> dict:
        return {
            "lemma_key": self.lemma_key,
            "tf": self.tf,
            "df": self.df,
            "tfidf": self.tfidf,
            "cvalue": self.cvalue,
            "occurrences": [list(o) for o in self.occurrences],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Term":
        return cls(
            lemma_key=doc["lemma_key"],
            tf=doc["tf"],
            df=doc["df"],
            tfidf=doc["tfidf"],
            cvalue=doc.get("cvalue"),
            occurrences=tuple((d, p) for d, p in doc.get("occurrences", [])),
        )


@dataclass(frozen=True)
class Interpretation:
    dictionary_id: str
    definition: str

    def to_dict(self) -> dict:
        return {"dictionary_id": self.dictionary_id, "definition": self.definition}


def concept_kind(lemma_key: str) -> str:
    head = lemma_key.split(" ")[-1]
    return "process" if head.endswith(PROCESS_SUFFIXES) else "object"


@dataclass(frozen=True)
class Concept:
    id: str
    label: str
    synonyms: tuple[str, ...]
    kind: str
    interpretations: tuple[Interpretation, ...] = ()
    provenance: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.label not in self.synonyms:
            raise IconError("INVALID_CONCEPT", f"label {self.label!r} not in synonyms")
        if len(set(self.synonyms)) != len(self.synonyms):
            raise IconError("INVALID_CONCEPT", f"duplicate synonyms on {self.id!r}")
        if self.kind not in CONCEPT_KINDS:
            raise IconError("INVALID_CONCEPT", f"unknown kind {self.kind!r}")

    def to_node(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "synonyms": sorted(self.synonyms),
            "kind": self.kind,
            "provenance": sorted(self.provenance),
            "flags": sorted(self.flags),
        }

    @classmethod
    def from_node(cls, doc: dict) -> "Concept":
        return cls(
            id=doc["id"],
            label=doc["label"],
            synonyms=tuple(doc["synonyms"]),
            kind=doc["kind"],
            provenance=tuple(doc.get("provenance", [])),
            flags=tuple(doc.get("flags", [])),
        )


@dataclass(frozen=True)
class Evidence:
    doc_id: str
    span: tuple[int, int]  # [first, last) token positions of the sentence
    via: str  # pattern identifier, "pmi", or "manual"

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "span": list(self.span), "via": self.via}

    @classmethod
    def from_dict(cls, doc: dict) -> "Evidence":
        return cls(doc["doc_id"], (doc["span"][0], doc["span"][1]), doc["via"])


@dataclass(frozen=True)
class Relation:
    source: str
    target: str
    rtype: str
    confidence: float
    evidence: tuple[Evidence, ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise IconError("INVALID_RELATION", f"self-relation on {self.source!r}")
        if self.rtype not in RELATION_TYPES:
            raise IconError("INVALID_RELATION", f"unknown rtype {self.rtype!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise IconError("INVALID_RELATION", f"confidence {self.confidence} out of range")

    @property
    def pair(self) -> tuple[str, str]:
        return (self.source, self.target)

    def to_edge(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "rtype": self.rtype,
            "confidence": self.confidence,
            "evidence": [e.to_dict() for e in self.evidence],
            "flags": sorted(self.flags),
        }

    @classmethod
    def from_edge(cls, doc: dict) -> "Relation":
        return cls(
            source=doc["source"],
            target=doc["target"],
            rtype=doc["rtype"],
            confidence=doc["confidence"],
            evidence=tuple(Evidence.from_dict(e) for e in doc.get("evidence", [])),
            flags=tuple(doc.get("flags", [])),
        )


@dataclass(frozen=True)
class DictionaryEntry:
    headword: str
    definition: str
    synonyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class Dictionary:
    id: str
    name: str
    source_kind: str
    entries: tuple[DictionaryEntry, ...]
    language: str | None = None

    def __post_init__(self) -> None:
        if self.source_kind not in DICTIONARY_KINDS:
            raise IconError(
                "INVALID_DICTIONARY", f"unknown source_kind {self.source_kind!r}"
            )

    @classmethod
    def from_dict(cls, doc: dict) -> "Dictionary":
        return cls(
            id=doc["id"],
            name=doc["name"],
            source_kind=doc["source_kind"],
            language=doc.get("language"),
            entries=tuple(
                DictionaryEntry(
                    headword=e["headword"],
                    definition=e["definition"],
                    synonyms=tuple(e.get("synonyms", [])),
                )
                for e in doc["entries"]
            ),
        )

    def to_dict(self) -> dict:
        doc = {
            "id": self.id,
            "name": self.name,
            "source_kind": self.source_kind,
            "entries": [
                {
                    "headword": e.headword,
                    "definition": e.definition,
                    "synonyms": list(e.synonyms),
                }
                for e in self.entries
            ],
        }
        if self.language:
            doc["language"] = self.language
        return doc

    def definitions(self, lemma_key: str) -> list[str]:
        return [e.definition for e in self.entries if e.headword == lemma_key]
