"""Standalone data-tier server speaking the frame protocol over TCP."""

from __future__ import annotations

import argparse
import json
import logging
import socketserver
import sys
import threading

from . import wire
from .store import LogStore, Store
from ..common import canonical_json
from ..errors import IconError

log = logging.getLogger(__name__)


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        store: Store = self.server.store  # type: ignore[attr-defined]
        while True:
            try:
                payload = wire.read_frame(self.rfile)
            except IconError:
                return
            if payload is None:
                return
            try:
                response = self._dispatch(store, payload)
            except IconError as exc:
                response = wire.encode_err(exc.code, exc.message, exc.detail)
            except Exception:
                log.exception("request failed")
                response = wire.encode_err("INTERNAL", "internal error")
            try:
                self.wfile.write(wire.pack_frame(response))
            except OSError:
                return

    @staticmethod
    def _dispatch(store: Store, payload: bytes) -> bytes:
        op, segment, key, body = wire.decode_request(payload)
        if op == "PING":
            return wire.encode_ok(b"pong")
        if op == "PUT":
            record = store.put(segment, key, body)
            return wire.encode_ok(canonical_json(record.meta()))
        if op == "GET":
            return wire.encode_ok(store.get(segment, key))
        try:
            crit = json.loads(body.decode("utf-8")) if body else {}
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise IconError("INVALID_QUERY", "criteria body must be JSON")
        keys = store.search(segment, crit)
        return wire.encode_ok(json.dumps(keys, ensure_ascii=False).encode("utf-8"))


class LibraryServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], store: Store):
        try:
            super().__init__(address, _Handler)
        except OSError as exc:
            raise IconError("BIND_FAILURE", f"cannot bind {address}: {exc}")
        self.store = store

    @property
    def address(self) -> tuple[str, int]:
        return self.server_address[0], self.server_address[1]


def serve(address: tuple[str, int], store: Store) -> LibraryServer:
    """Start serving in a background thread; caller owns shutdown()."""
    server = LibraryServer(address, store)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="icon-datastore", description="Record store server (data tier)."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=7600)
    parser.add_argument("--data-dir", default="./icon-data")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    store = LogStore(args.data_dir)
    try:
        server = LibraryServer((args.host, args.port), store)
    except IconError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    log.info("datastore listening on %s:%d", *server.address)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
