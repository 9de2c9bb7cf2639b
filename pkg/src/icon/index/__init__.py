"""Positional inverted index with deterministic serialization and search.

An index is a pure function of the corpus contents and the analyzer
configuration: rebuilding without changes reproduces the same bytes, and the
version counter only advances when either input changed. The serialized form
is a sorted flat text file so digests are stable across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..analysis import Analyzer
from ..common import digest_bytes, digest_text
from ..errors import IconError
from ..library.schemas import INDEX_MAGIC


@dataclass(frozen=True)
class Posting:
    doc_id: str
    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.positions:
            raise IconError("INVALID_POSTING", "posting without positions")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise IconError("INVALID_POSTING", "positions must strictly increase")


@dataclass
class InvertedIndex:
    corpus_id: str
    version: int
    analyzer_digest: str
    corpus_digest: str
    doc_count: int
    doc_lengths: dict[str, int]
    entries: dict[str, list[Posting]] = field(default_factory=dict)

    def tf(self, lemma: str, doc_id: str) -> int:
        for posting in self.entries.get(lemma, []):
            if posting.doc_id == doc_id:
                return len(posting.positions)
        return 0

    def df(self, lemma: str) -> int:
        return len(self.entries.get(lemma, []))

    def idf(self, lemma: str) -> float:
        df = self.df(lemma)
        if df == 0 or self.doc_count == 0:
            return 0.0
        return math.log(self.doc_count / df)


def corpus_content_digest(doc_texts: dict[str, str]) -> str:
    """Fingerprint of the corpus contents, independent of dict order."""
    lines = [f"{doc_id} {digest_text(text)}" for doc_id, text in sorted(doc_texts.items())]
    return digest_text("\n".join(lines))


def build_index(
    corpus_id: str,
    doc_texts: dict[str, str],
    analyzer: Analyzer,
    prior: InvertedIndex | None = None,
) -> InvertedIndex:
    """Build the positional index; reuse the prior version when unchanged."""
    corpus_digest = corpus_content_digest(doc_texts)
    if (
        prior is not None
        and prior.corpus_digest == corpus_digest
        and prior.analyzer_digest == analyzer.digest()
    ):
        return prior
    version = prior.version + 1 if prior is not None else 1

    positions: dict[str, dict[str, list[int]]] = {}
    doc_lengths: dict[str, int] = {}
    for doc_id in sorted(doc_texts):
        length = 0
        for token in analyzer.tokens(doc_texts[doc_id]):
            if token.kind == "punct":
                continue
            positions.setdefault(token.lemma, {}).setdefault(doc_id, []).append(
                token.position
            )
            length += 1
        doc_lengths[doc_id] = length

    entries = {
        lemma: [
            Posting(doc_id, tuple(pos_list))
            for doc_id, pos_list in sorted(by_doc.items())
        ]
        for lemma, by_doc in positions.items()
    }
    return InvertedIndex(
        corpus_id=corpus_id,
        version=version,
        analyzer_digest=analyzer.digest(),
        corpus_digest=corpus_digest,
        doc_count=len(doc_texts),
        doc_lengths=doc_lengths,
        entries=entries,
    )


def serialize_index(index: InvertedIndex) -> bytes:
    lines = [
        INDEX_MAGIC,
        f"corpus_id {index.corpus_id}",
        f"corpus_digest {index.corpus_digest}",
        f"analyzer {index.analyzer_digest}",
        f"version {index.version}",
        f"doc_count {index.doc_count}",
    ]
    for doc_id in sorted(index.doc_lengths):
        lines.append(f"doclen {doc_id} {index.doc_lengths[doc_id]}")
    for lemma in sorted(index.entries):
        postings = index.entries[lemma]
        tf = sum(len(p.positions) for p in postings)
        lines.append(f"lemma {lemma} {len(postings)} {tf}")
        for posting in postings:
            joined = " ".join(str(p) for p in posting.positions)
            lines.append(f"p {posting.doc_id} {joined}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_index(data: bytes) -> InvertedIndex:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IconError("SCHEMA_VIOLATION", f"index is not UTF-8: {exc}")
    lines = text.splitlines()
    if not lines or lines[0] != INDEX_MAGIC:
        raise IconError("SCHEMA_VIOLATION", "not an index file")
    head: dict[str, str] = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=1):
        if line.startswith(("doclen ", "lemma ")):
            body_start = i
            break
        name, _, value = line.partition(" ")
        head[name] = value
        body_start = i + 1
    try:
        index = InvertedIndex(
            corpus_id=head["corpus_id"],
            version=int(head["version"]),
            analyzer_digest=head["analyzer"],
            corpus_digest=head["corpus_digest"],
            doc_count=int(head["doc_count"]),
            doc_lengths={},
        )
        current: str | None = None
        for line in lines[body_start:]:
            if line.startswith("doclen "):
                _, doc_id, length = line.split(" ")
                index.doc_lengths[doc_id] = int(length)
            elif line.startswith("lemma "):
                current = line.split(" ")[1]
                index.entries[current] = []
            elif line.startswith("p "):
                if current is None:
                    raise IconError("SCHEMA_VIOLATION", "posting line before any lemma")
                parts = line.split(" ")
                index.entries[current].append(
                    Posting(parts[1], tuple(int(p) for p in parts[2:]))
                )
    except (KeyError, ValueError, IndexError) as exc:
        raise IconError("SCHEMA_VIOLATION", f"malformed index body: {exc!r}")
    return index


def index_digest(index: InvertedIndex) -> str:
    return digest_bytes(serialize_index(index))


def analyze_query(query: str, analyzer: Analyzer, mode: str) -> list[str]:
    """Lemmatize a query; any/all drop stopwords, phrase keeps every token."""
    tokens = [t for t in analyzer.tokens(query) if t.kind != "punct"]
    if mode != "phrase":
        tokens = [t for t in tokens if not analyzer.is_stopword(t)]
    lemmas = [t.lemma for t in tokens]
    if not lemmas:
        raise IconError("EMPTY_QUERY", f"query {query!r} is empty after analysis")
    return lemmas


def query_index(
    index: InvertedIndex, lemmas: list[str], mode: str
) -> list[tuple[str, float]]:
    """Match and rank: tf-idf sum descending, ties by ascending doc_id."""
    if mode not in ("any", "all", "phrase"):
        raise IconError("INVALID_QUERY", f"unknown mode {mode!r}")
    if not lemmas:
        raise IconError("EMPTY_QUERY", "no query terms")
    distinct = sorted(set(lemmas))
    docs_per_lemma = {
        lemma: {p.doc_id for p in index.entries.get(lemma, [])} for lemma in distinct
    }
    if mode == "any":
        matched = set().union(*docs_per_lemma.values())
    elif mode == "all":
        matched = set.intersection(*docs_per_lemma.values())
    else:
        matched = {
            doc_id
            for doc_id in set.intersection(*docs_per_lemma.values())
            if _has_phrase(index, lemmas, doc_id)
        }
    scored = []
    for doc_id in matched:
        score = sum(index.tf(lemma, doc_id) * index.idf(lemma) for lemma in distinct)
        scored.append((doc_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def _has_phrase(index: InvertedIndex, lemmas: list[str], doc_id: str) -> bool:
    position_sets = []
    for lemma in lemmas:
        positions = None
        for posting in index.entries.get(lemma, []):
            if posting.doc_id == doc_id:
                positions = set(posting.positions)
                break
        if positions is None:
            return False
        position_sets.append(positions)
    first = position_sets[0]
    return any(
        all(start + offset in position_sets[offset] for offset in range(1, len(lemmas)))
        for start in first
    )
