"""Store backend for an external RESP-dialect key-value server.

Records live under ``icon:<segment>:<key>``; record metadata (digest,
timestamps) is kept alongside under the internal ``icon.meta:`` namespace so
values stay byte-identical. Schema validation runs client-side because the
external server treats values as opaque strings. Search fetches the
segment's keys by prefix and filters locally.
"""

from __future__ import annotations

import json
import socket
import threading

from . import criteria, schemas
from .store import Store, StoredRecord
from ..common import digest_bytes, utc_now
from ..errors import IconError

VALUE_PREFIX = "icon"
META_PREFIX = "icon.meta"


def value_key(segment: str, key: str) -> str:
    return f"{VALUE_PREFIX}:{segment}:{key}"


def meta_key(segment: str, key: str) -> str:
    return f"{META_PREFIX}:{segment}:{key}"


class RespStore(Store):
    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self._addr = (host, port)
        self._timeout = timeout
        self._lock = threading.Lock()
        self._sock: socket.socket | None = None
        self._reader = None

    def _connect(self) -> None:
        if self._sock is None:
            try:
                self._sock = socket.create_connection(self._addr, self._timeout)
            except OSError as exc:
                raise IconError(
                    "STORAGE_UNAVAILABLE",
                    f"cannot reach key-value server {self._addr}: {exc}",
                )
            self._reader = self._sock.makefile("rb")

    def close(self) -> None:
        with self._lock:
            for closable in (self._reader, self._sock):
                if closable is not None:
                    try:
                        closable.close()
                    except OSError:
                        pass
            self._sock = None
            self._reader = None

    # RESP encoding: an array of bulk strings per command.
    def _command(self, *args: bytes | str):
        parts = [b"*%d\r\n" % len(args)]
        for arg in args:
            data = arg.encode("utf-8") if isinstance(arg, str) else arg
            parts.append(b"$%d\r\n%s\r\n" % (len(data), data))
        with self._lock:
            self._connect()
            try:
                self._sock.sendall(b"".join(parts))
                return self._read_reply()
            except OSError as exc:
                self.close()
                raise IconError("STORAGE_UNAVAILABLE", f"key-value server lost: {exc}")

    def _read_line(self) -> bytes:
        line = self._reader.readline()
        if not line.endswith(b"\r\n"):
            raise IconError("STORAGE_UNAVAILABLE", "key-value server closed connection")
        return line[:-2]

    def _read_reply(self):
        line = self._read_line()
        marker, rest = line[:1], line[1:]
        if marker == b"+":
            return rest.decode("utf-8")
        if marker == b"-":
            raise IconError("STORAGE_ERROR", rest.decode("utf-8", errors="replace"))
        if marker == b":":
            return int(rest)
        if marker == b"$":
            length = int(rest)
            if length < 0:
                return None
            data = self._reader.read(length + 2)
            if len(data) < length + 2:
                raise IconError("STORAGE_UNAVAILABLE", "truncated bulk reply")
            return data[:length]
        if marker == b"*":
            count = int(rest)
            if count < 0:
                return None
            return [self._read_reply() for _ in range(count)]
        raise IconError("STORAGE_ERROR", f"unexpected reply marker {marker!r}")

    def put(self, segment: str, key: str, value: bytes) -> StoredRecord:
        schemas.check_segment(segment)
        schemas.check_key(key)
        schemas.validate_value(segment, value)
        now = utc_now()
        created = now
        prior = self._command("GET", meta_key(segment, key))
        if prior is not None:
            try:
                created = json.loads(prior.decode("utf-8"))["created_at"]
            except (UnicodeDecodeError, json.JSONDecodeError, KeyError):
                pass
        record = StoredRecord(
            segment=segment,
            key=key,
            value=bytes(value),
            content_digest=digest_bytes(value),
            created_at=created,
            updated_at=now,
        )
        self._command("SET", value_key(segment, key), value)
        self._command(
            "SET",
            meta_key(segment, key),
            json.dumps(record.meta(), ensure_ascii=False),
        )
        return record

    def get(self, segment: str, key: str) -> bytes:
        schemas.check_segment(segment)
        value = self._command("GET", value_key(segment, key))
        if value is None:
            raise IconError("NOT_FOUND", f"{segment}/{key} not found")
        return value

    def search(self, segment: str, crit: dict) -> list[str]:
        normalized = criteria.validate_criteria(segment, crit)
        prefix = f"{VALUE_PREFIX}:{segment}:"
        raw_keys = self._command("KEYS", prefix + "*") or []
        hits = []
        for raw in raw_keys:
            full = raw.decode("utf-8")
            key = full[len(prefix) :]
            value = self._command("GET", full)
            if value is None:
                continue
            fields = schemas.extract_fields(segment, key, value)
            if criteria.matches(fields, normalized):
                hits.append(key)
        return sorted(hits)
