"""Segment catalogue and value validation for the record store.

The store keeps opaque bytes; this module is the boundary where those bytes
are checked against the owning segment's schema before a write is accepted.
Eight segments hold JSON documents, the ``indexes`` segment holds the
serialized index flat file and is validated by its header line.
"""

from __future__ import annotations

import json
import re

from jsonschema import Draft202012Validator

from ..errors import IconError

INDEX_MAGIC = "icon-index 1"

KEY_RE = re.compile(r"^[A-Za-z0-9_.:\-]{1,256}$")

_LEMMA_KEY = {"type": "string", "minLength": 1}

_INTERPRETATION = {
    "type": "object",
    "required": ["dictionary_id", "definition"],
    "properties": {
        "dictionary_id": {"type": "string", "minLength": 1},
        "definition": {"type": "string", "minLength": 1},
    },
    "additionalProperties": False,
}

_NODE = {
    "type": "object",
    "required": ["id", "label", "synonyms", "kind"],
    "properties": {
        "id": _LEMMA_KEY,
        "label": _LEMMA_KEY,
        "synonyms": {"type": "array", "items": _LEMMA_KEY},
        "kind": {"enum": ["object", "process"]},
        "provenance": {"type": "array", "items": {"type": "string"}},
        "flags": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

_EVIDENCE = {
    "type": "object",
    "required": ["doc_id", "span", "via"],
    "properties": {
        "doc_id": {"type": "string"},
        "span": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 2,
            "maxItems": 2,
        },
        "via": {"type": "string", "minLength": 1},
    },
    "additionalProperties": False,
}

_EDGE = {
    "type": "object",
    "required": ["source", "target", "rtype", "confidence"],
    "properties": {
        "source": _LEMMA_KEY,
        "target": _LEMMA_KEY,
        "rtype": {"enum": ["is_a", "part_of", "synonym_of", "associated_with"]},
        "confidence": {"type": "number", "minimum": 0, "maximum": 1},
        "evidence": {"type": "array", "items": _EVIDENCE},
        "flags": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

ONTOLOGY_SCHEMA = {
    "type": "object",
    "required": ["digest", "edges", "interpretations", "nodes", "provenance", "status"],
    "properties": {
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "nodes": {"type": "object", "additionalProperties": _NODE},
        "edges": {"type": "array", "items": _EDGE},
        "interpretations": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _INTERPRETATION},
        },
        "provenance": {"enum": ["initial", "document", "merged", "bound"]},
        "status": {"enum": ["draft", "under_verification", "verified", "rejected"]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

_TERM = {
    "type": "object",
    "required": ["lemma_key", "tf", "df", "tfidf"],
    "properties": {
        "lemma_key": _LEMMA_KEY,
        "tf": {"type": "integer", "minimum": 1},
        "df": {"type": "integer", "minimum": 1},
        "tfidf": {"type": "number", "minimum": 0},
        "cvalue": {"type": ["number", "null"]},
        "occurrences": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "integer", "minimum": 0}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
    "additionalProperties": False,
}

_RELATION = dict(_EDGE)

_SEGMENT_SCHEMAS: dict[str, dict] = {
    "documents": {
        "type": "object",
        "required": ["id", "source", "title", "language", "text", "ingested_at"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "source": {"type": "string"},
            "title": {"type": "string"},
            "language": {"enum": ["uk", "ru"]},
            "text": {"type": "string", "minLength": 1},
            "metadata": {
                "type": "object",
                "additionalProperties": {"type": "string"},
            },
            "ingested_at": {"type": "string"},
        },
        "additionalProperties": False,
    },
    "corpora": {
        "type": "object",
        "required": ["id", "name", "doc_ids"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "name": {"type": "string", "minLength": 1},
            "doc_ids": {"type": "array", "items": {"type": "string", "minLength": 1}},
            "created_at": {"type": "string"},
        },
        "additionalProperties": False,
    },
    "ontologies": ONTOLOGY_SCHEMA,
    "termsets": {
        "type": "object",
        "required": ["id", "corpus_id", "terms"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "project_id": {"type": "string"},
            "corpus_id": {"type": "string", "minLength": 1},
            "terms": {"type": "array", "items": _TERM},
        },
        "additionalProperties": False,
    },
    "conceptsets": {
        "type": "object",
        "required": ["id", "corpus_id", "concepts"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "project_id": {"type": "string"},
            "corpus_id": {"type": "string", "minLength": 1},
            "concepts": {"type": "array", "items": _NODE},
        },
        "additionalProperties": False,
    },
    "relationsets": {
        "type": "object",
        "required": ["id", "corpus_id", "relations"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "project_id": {"type": "string"},
            "corpus_id": {"type": "string", "minLength": 1},
            "relations": {"type": "array", "items": _RELATION},
        },
        "additionalProperties": False,
    },
    "projects": {
        "type": "object",
        "required": ["id", "name", "state", "created_at"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "name": {"type": "string", "minLength": 1},
            "state": {
                "enum": [
                    "NEW",
                    "CORPUS_READY",
                    "INDEXED",
                    "ANALYZED",
                    "DRAFT_ONTOLOGY",
                    "UNDER_VERIFICATION",
                    "VERIFIED",
                    "REJECTED",
                ]
            },
            "corpus_id": {"type": ["string", "null"]},
            "artifacts": {
                "type": "object",
                "additionalProperties": {
                    "type": "array",
                    "items": {"type": "string"},
                },
            },
            "event_log": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["ts", "actor", "event"],
                    "properties": {
                        "ts": {"type": "string"},
                        "actor": {"type": "string"},
                        "event": {"type": "string"},
                        "detail": {"type": "object"},
                    },
                    "additionalProperties": False,
                },
            },
            "created_at": {"type": "string"},
            "updated_at": {"type": "string"},
        },
        "additionalProperties": False,
    },
    "dictionaries": {
        "type": "object",
        "required": ["id", "name", "source_kind", "entries"],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "name": {"type": "string", "minLength": 1},
            "source_kind": {"enum": ["encyclopedic", "explanatory", "thesaurus"]},
            "language": {"enum": ["uk", "ru"]},
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["headword", "definition"],
                    "properties": {
                        "headword": _LEMMA_KEY,
                        "definition": {"type": "string", "minLength": 1},
                        "synonyms": {"type": "array", "items": _LEMMA_KEY},
                    },
                    "additionalProperties": False,
                },
            },
        },
        "additionalProperties": False,
    },
}

SEGMENTS: tuple[str, ...] = tuple(sorted([*_SEGMENT_SCHEMAS, "indexes"]))

# Fields that search criteria may name, per segment. "key" is always allowed.
INDEXED_FIELDS: dict[str, frozenset[str]] = {
    "documents": frozenset({"id", "source", "title", "language", "ingested_at"}),
    "corpora": frozenset({"id", "name", "doc_ids", "created_at"}),
    "ontologies": frozenset({"status", "provenance", "digest"}),
    "termsets": frozenset({"id", "project_id", "corpus_id"}),
    "conceptsets": frozenset({"id", "project_id", "corpus_id"}),
    "relationsets": frozenset({"id", "project_id", "corpus_id"}),
    "projects": frozenset({"id", "name", "state", "created_at"}),
    "dictionaries": frozenset({"id", "name", "source_kind", "language"}),
    "indexes": frozenset({"corpus_id", "version"}),
}

_VALIDATORS = {
    name: Draft202012Validator(schema) for name, schema in _SEGMENT_SCHEMAS.items()
}


def check_segment(segment: str) -> None:
    if segment not in SEGMENTS:
        raise IconError(
            "UNKNOWN_SEGMENT", f"unknown segment {segment!r}", {"known": list(SEGMENTS)}
        )


def check_key(key: str) -> None:
    if not KEY_RE.match(key or ""):
        raise IconError("INVALID_KEY", f"key {key!r} is not a valid store key")


def _parse_index_header(text: str) -> dict:
    fields: dict[str, object] = {}
    for line in text.split("\n"):
        if not line or line.startswith(("doclen ", "lemma ", "p ")):
            break
        parts = line.split(" ", 1)
        if len(parts) == 2:
            fields[parts[0]] = parts[1]
    if "version" in fields:
        fields["version"] = int(str(fields["version"]))
    return fields


def validate_value(segment: str, value: bytes) -> None:
    """Raise SCHEMA_VIOLATION unless ``value`` is a valid ``segment`` record."""
    check_segment(segment)
    if segment == "indexes":
        if not value.startswith((INDEX_MAGIC + "\n").encode("utf-8")):
            raise IconError(
                "SCHEMA_VIOLATION",
                f"indexes values must start with the {INDEX_MAGIC!r} header line",
            )
        return
    try:
        doc = json.loads(value.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise IconError("SCHEMA_VIOLATION", f"{segment} values must be JSON: {exc}")
    errors = sorted(_VALIDATORS[segment].iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        first = errors[0]
        path = "/".join(str(p) for p in first.path) or "<root>"
        raise IconError(
            "SCHEMA_VIOLATION",
            f"{segment} record invalid at {path}: {first.message}",
        )


def extract_fields(segment: str, key: str, value: bytes) -> dict:
    """Pull the searchable field values out of a stored record."""
    fields: dict[str, object] = {"key": key}
    if segment == "indexes":
        try:
            head = value[:4096].decode("utf-8", errors="replace")
        except Exception:
            return fields
        parsed = _parse_index_header(head)
        for name in INDEXED_FIELDS[segment]:
            if name in parsed:
                fields[name] = parsed[name]
        return fields
    try:
        doc = json.loads(value.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        return fields
    for name in INDEXED_FIELDS[segment]:
        if isinstance(doc, dict) and name in doc:
            fields[name] = doc[name]
    return fields
