"""Document acquisition and corpus formation.

Documents are content-addressed: the id is the digest of the normalized
text, which makes ingestion idempotent. A corpus is an ordered, de-duplicated
selection of stored document ids.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from ..analysis import Analyzer
from ..common import canonical_json, digest_json, digest_text, utc_now
from ..errors import IconError
from ..library import Store

LANGUAGES = ("ru", "uk")


@dataclass(frozen=True)
class Document:
    id: str
    source: str
    title: str
    language: str
    text: str
    ingested_at: str
    metadata: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "title": self.title,
            "language": self.language,
            "text": self.text,
            "metadata": dict(self.metadata),
            "ingested_at": self.ingested_at,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Document":
        return cls(
            id=doc["id"],
            source=doc["source"],
            title=doc["title"],
            language=doc["language"],
            text=doc["text"],
            metadata=dict(doc.get("metadata", {})),
            ingested_at=doc["ingested_at"],
        )


@dataclass(frozen=True)
class Corpus:
    id: str
    name: str
    doc_ids: tuple[str, ...]
    created_at: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "doc_ids": list(self.doc_ids),
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Corpus":
        return cls(
            id=doc["id"],
            name=doc["name"],
            doc_ids=tuple(doc["doc_ids"]),
            created_at=doc.get("created_at", ""),
        )


@dataclass(frozen=True)
class SourceDescriptor:
    uri: str
    title: str
    size: int

    def to_dict(self) -> dict:
        return {"uri": self.uri, "title": self.title, "size": self.size}


def normalize_text(text: str) -> str:
    """Canonicalize to NFC with LF newlines; idempotent."""
    text = text.lstrip("﻿").replace("\r\n", "\n").replace("\r", "\n")
    return unicodedata.normalize("NFC", text).strip()


def document_id(normalized_text: str) -> str:
    return digest_text(normalized_text)


def ingest_document(
    store: Store,
    raw: bytes,
    source: str,
    analyzer: Analyzer,
    title: str | None = None,
    language: str | None = None,
    encoding: str = "utf-8",
) -> tuple[Document, list[str]]:
    """Normalize, detect language, persist; returns (document, warnings).

    Re-ingesting identical content returns the already-stored document.
    """
    warnings: list[str] = []
    try:
        text = raw.decode(encoding)
    except (UnicodeDecodeError, LookupError) as exc:
        raise IconError("ENCODING_ERROR", f"cannot decode {source}: {exc}")
    text = normalize_text(text)
    if not text:
        raise IconError("EMPTY_DOCUMENT", f"{source} is empty after normalization")

    doc_id = document_id(text)
    try:
        existing = store.get("documents", doc_id)
    except IconError as exc:
        if exc.code != "NOT_FOUND":
            raise
    else:
        return Document.from_dict(json.loads(existing.decode("utf-8"))), warnings

    if language is None:
        language, warning = analyzer.detect_language(text)
        if warning:
            warnings.append(warning)
    elif language not in LANGUAGES:
        raise IconError("USAGE_ERROR", f"language must be one of {LANGUAGES}")
    if title is None:
        title = text.split("\n", 1)[0][:120]
    document = Document(
        id=doc_id,
        source=source,
        title=title,
        language=language,
        text=text,
        ingested_at=utc_now(),
    )
    store.put("documents", doc_id, canonical_json(document.to_dict()))
    return document, warnings


def build_corpus(store: Store, name: str, selection: list[str]) -> Corpus:
    """Form a corpus from stored documents; duplicates collapse in order."""
    if not name or not name.strip():
        raise IconError("USAGE_ERROR", "corpus name must be non-empty")
    if not selection:
        raise IconError("EMPTY_SELECTION", "corpus selection must be non-empty")
    seen = set()
    doc_ids = []
    for doc_id in selection:
        if doc_id in seen:
            continue
        seen.add(doc_id)
        try:
            store.get("documents", doc_id)
        except IconError as exc:
            if exc.code == "NOT_FOUND":
                raise IconError("UNKNOWN_DOCUMENT", f"no stored document {doc_id!r}")
            raise
        doc_ids.append(doc_id)
    corpus_id = "c-" + digest_json({"name": name, "doc_ids": doc_ids})[:16]
    corpus = Corpus(
        id=corpus_id, name=name, doc_ids=tuple(doc_ids), created_at=utc_now()
    )
    store.put("corpora", corpus_id, canonical_json(corpus.to_dict()))
    return corpus


def load_corpus(store: Store, corpus_id: str) -> Corpus:
    try:
        raw = store.get("corpora", corpus_id)
    except IconError as exc:
        if exc.code == "NOT_FOUND":
            raise IconError("UNKNOWN_CORPUS", f"no stored corpus {corpus_id!r}")
        raise
    return Corpus.from_dict(json.loads(raw.decode("utf-8")))


def corpus_documents(store: Store, corpus: Corpus) -> dict[str, Document]:
    """Resolve every member; raises UNKNOWN_DOCUMENT on a broken reference."""
    documents = {}
    for doc_id in corpus.doc_ids:
        try:
            raw = store.get("documents", doc_id)
        except IconError as exc:
            if exc.code == "NOT_FOUND":
                raise IconError(
                    "UNKNOWN_DOCUMENT",
                    f"corpus {corpus.id} references missing document {doc_id!r}",
                )
            raise
        documents[doc_id] = Document.from_dict(json.loads(raw.decode("utf-8")))
    return documents


def corpus_texts(store: Store, corpus: Corpus) -> dict[str, str]:
    return {d.id: d.text for d in corpus_documents(store, corpus).values()}


def search_external(source_config: dict, query: str) -> list[SourceDescriptor]:
    """Enumerate candidate documents from configured sources.

    ``source_config`` is ``{"sources": [{"kind": "directory", "root": path},
    {"kind": "url_list", "urls": [...]}]}``. Query "*" matches everything;
    otherwise a casefolded substring match against title and content
    (directory sources) or the URL (url_list sources).
    """
    descriptors: list[SourceDescriptor] = []
    needle = query.casefold()
    for source in source_config.get("sources", []):
        kind = source.get("kind")
        if kind == "directory":
            descriptors.extend(_scan_directory(source, needle, query))
        elif kind == "url_list":
            for url in source.get("urls", []):
                if query == "*" or needle in url.casefold():
                    descriptors.append(SourceDescriptor(uri=url, title=url, size=0))
        else:
            raise IconError("UNSUPPORTED_SOURCE", f"unknown source kind {kind!r}")
    return descriptors


def _scan_directory(source: dict, needle: str, query: str) -> list[SourceDescriptor]:
    root = Path(source.get("root", "."))
    if not root.is_dir():
        raise IconError("SOURCE_UNAVAILABLE", f"directory {root} does not exist")
    found = []
    for path in sorted(root.rglob("*.txt")):
        if query != "*":
            try:
                content = path.read_text("utf-8", errors="replace")
            except OSError:
                continue
            if needle not in path.name.casefold() and needle not in content.casefold():
                continue
        found.append(
            SourceDescriptor(uri=str(path), title=path.stem, size=path.stat().st_size)
        )
    return found


def fetch(descriptor: SourceDescriptor) -> bytes:
    """Retrieve the raw bytes behind a descriptor."""
    uri = descriptor.uri
    if uri.startswith(("http://", "https://")):
        import httpx

        try:
            response = httpx.get(uri, timeout=10.0, follow_redirects=True)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise IconError("SOURCE_UNAVAILABLE", f"cannot fetch {uri}: {exc}")
        return response.content
    try:
        return Path(uri).read_bytes()
    except OSError as exc:
        raise IconError("SOURCE_UNAVAILABLE", f"cannot read {uri}: {exc}")
