"""Data tier: segmented record store with embedded and remote backends."""

from __future__ import annotations

from .schemas import INDEX_MAGIC, INDEXED_FIELDS, SEGMENTS, validate_value
from .store import LogStore, Store, StoredRecord

__all__ = [
    "INDEX_MAGIC",
    "INDEXED_FIELDS",
    "LogStore",
    "SEGMENTS",
    "Store",
    "StoredRecord",
    "open_store",
    "validate_value",
]


def _parse_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    return host or "127.0.0.1", int(port)


def open_store(config) -> Store:
    """Open the backend selected by a ServerConfig."""
    if config.storage == "embedded":
        return LogStore(config.data_dir)
    host, port = _parse_addr(config.data_addr)
    if config.storage == "wire":
        from .client import WireStore

        return WireStore(host, port)
    from .resp import RespStore

    return RespStore(host, port)
