"""Store backend that talks to a remote frame-protocol server."""

from __future__ import annotations

import json
import socket
import threading

from . import wire
from .store import Store, StoredRecord
from ..errors import IconError


class WireStore(Store):
    """Client for the TCP data-tier server.

    One connection, requests serialized by a lock (the protocol is strictly
    request/response per connection). Reconnects once on a broken pipe.
    """

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
                    "STORAGE_UNAVAILABLE", f"cannot reach datastore {self._addr}: {exc}"
                )
            self._reader = self._sock.makefile("rb")

    def _drop(self) -> None:
        for closable in (self._reader, self._sock):
            if closable is not None:
                try:
                    closable.close()
                except OSError:
                    pass
        self._sock = None
        self._reader = None

    def _roundtrip(self, request: bytes) -> bytes:
        with self._lock:
            for attempt in (0, 1):
                self._connect()
                try:
                    self._sock.sendall(wire.pack_frame(request))
                    payload = wire.read_frame(self._reader)
                except OSError:
                    payload = None
                except IconError as exc:
                    # A torn frame means the server went away mid-response.
                    if exc.code != "PROTOCOL_ERROR":
                        raise
                    payload = None
                if payload is not None:
                    return payload
                self._drop()
                if attempt == 1:
                    raise IconError("STORAGE_UNAVAILABLE", "datastore connection lost")
        raise AssertionError("unreachable")

    def put(self, segment: str, key: str, value: bytes) -> StoredRecord:
        payload = self._roundtrip(wire.encode_request("PUT", segment, key, value))
        meta = json.loads(wire.decode_response(payload).decode("utf-8"))
        return StoredRecord(
            segment=meta["segment"],
            key=meta["key"],
            value=bytes(value),
            content_digest=meta["content_digest"],
            created_at=meta["created_at"],
            updated_at=meta["updated_at"],
        )

    def get(self, segment: str, key: str) -> bytes:
        payload = self._roundtrip(wire.encode_request("GET", segment, key))
        return wire.decode_response(payload)

    def search(self, segment: str, crit: dict) -> list[str]:
        body = json.dumps(crit, ensure_ascii=False).encode("utf-8")
        payload = self._roundtrip(wire.encode_request("SEARCH", segment, body=body))
        return json.loads(wire.decode_response(payload).decode("utf-8"))

    def ping(self) -> bool:
        payload = self._roundtrip(wire.encode_request("PING"))
        return wire.decode_response(payload) == b"pong"

    def close(self) -> None:
        with self._lock:
            self._drop()
