"""Small shared helpers: digests, canonical JSON, timestamps."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone

# One 256-bit hash is used project-wide for content addressing and round-trip
# checks; changing it invalidates every stored digest.
DIGEST_ALGORITHM = "sha256"


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_text(text: str) -> str:
    return digest_bytes(text.encode("utf-8"))


def canonical_json(obj: object) -> bytes:
    """Deterministic JSON encoding: sorted keys, compact separators, UTF-8."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def digest_json(obj: object) -> str:
    return digest_bytes(canonical_json(obj))


def utc_now() -> str:
    """Current UTC time as an ISO-8601 string with second precision."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%f")[:-3] + "Z"
