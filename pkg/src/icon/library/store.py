"""Record store interface and the embedded append-log backend."""

from __future__ import annotations

import json
import struct
import threading
from dataclasses import dataclass
from pathlib import Path

from . import criteria, schemas
from ..common import digest_bytes, utc_now
from ..errors import IconError

_LEN = struct.Struct(">I")


@dataclass(frozen=True)
class StoredRecord:
    """A stored value plus its bookkeeping metadata."""

    segment: str
    key: str
    value: bytes
    content_digest: str
    created_at: str
    updated_at: str

    def meta(self) -> dict:
        return {
            "segment": self.segment,
            "key": self.key,
            "size": len(self.value),
            "content_digest": self.content_digest,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


class Store:
    """Interface every storage backend implements.

    ``put`` validates the value against the segment schema and makes it
    durable; ``get`` returns the last written bytes; ``search`` returns the
    sorted keys matching a criteria document (see the criteria module).
    """

    def put(self, segment: str, key: str, value: bytes) -> StoredRecord:
        raise NotImplementedError

    def get(self, segment: str, key: str) -> bytes:
        raise NotImplementedError

    def search(self, segment: str, crit: dict) -> list[str]:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class LogStore(Store):
    """Append-log store: one log file replayed into an in-memory map.

    Every put appends a framed entry (metadata line + raw value) and is
    flushed before acknowledgement, so acknowledged writes survive a clean
    process exit. A torn final entry from a crashed writer is ignored on
    replay. One lock serializes writes; reads share it briefly.
    """

    def __init__(self, root: str | Path):
        self._root = Path(root)
        self._root.mkdir(parents=True, exist_ok=True)
        self._path = self._root / "store.log"
        self._lock = threading.RLock()
        self._records: dict[tuple[str, str], StoredRecord] = {}
        self._replay()
        self._log = open(self._path, "ab")

    def _replay(self) -> None:
        if not self._path.exists():
            return
        raw = self._path.read_bytes()
        offset = 0
        while offset + _LEN.size <= len(raw):
            (length,) = _LEN.unpack_from(raw, offset)
            start = offset + _LEN.size
            if start + length > len(raw):
                break
            entry = raw[start : start + length]
            offset = start + length
            head, _, value = entry.partition(b"\n")
            meta = json.loads(head.decode("utf-8"))
            record = StoredRecord(
                segment=meta["segment"],
                key=meta["key"],
                value=value,
                content_digest=meta["content_digest"],
                created_at=meta["created_at"],
                updated_at=meta["updated_at"],
            )
            self._records[(record.segment, record.key)] = record
        if offset < len(raw):
            # A crashed writer left a torn entry; cut it off so that entries
            # appended from here on replay next time.
            with open(self._path, "r+b") as handle:
                handle.truncate(offset)

    def _append(self, record: StoredRecord) -> None:
        head = json.dumps(
            {
                "segment": record.segment,
                "key": record.key,
                "content_digest": record.content_digest,
                "created_at": record.created_at,
                "updated_at": record.updated_at,
            },
            ensure_ascii=False,
        ).encode("utf-8")
        entry = head + b"\n" + record.value
        self._log.write(_LEN.pack(len(entry)) + entry)
        self._log.flush()

    def put(self, segment: str, key: str, value: bytes) -> StoredRecord:
        schemas.check_segment(segment)
        schemas.check_key(key)
        schemas.validate_value(segment, value)
        now = utc_now()
        with self._lock:
            prior = self._records.get((segment, key))
            record = StoredRecord(
                segment=segment,
                key=key,
                value=bytes(value),
                content_digest=digest_bytes(value),
                created_at=prior.created_at if prior else now,
                updated_at=now,
            )
            self._append(record)
            self._records[(segment, key)] = record
            return record

    def get(self, segment: str, key: str) -> bytes:
        schemas.check_segment(segment)
        with self._lock:
            record = self._records.get((segment, key))
        if record is None:
            raise IconError("NOT_FOUND", f"{segment}/{key} not found")
        return record.value

    def record(self, segment: str, key: str) -> StoredRecord:
        schemas.check_segment(segment)
        with self._lock:
            record = self._records.get((segment, key))
        if record is None:
            raise IconError("NOT_FOUND", f"{segment}/{key} not found")
        return record

    def search(self, segment: str, crit: dict) -> list[str]:
        normalized = criteria.validate_criteria(segment, crit)
        with self._lock:
            snapshot = [r for (seg, _), r in self._records.items() if seg == segment]
        hits = []
        for record in snapshot:
            fields = schemas.extract_fields(segment, record.key, record.value)
            if criteria.matches(fields, normalized):
                hits.append(record.key)
        return sorted(hits)

    def close(self) -> None:
        with self._lock:
            if not self._log.closed:
                self._log.flush()
                self._log.close()
