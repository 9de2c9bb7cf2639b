"""Frame and message layer of the data-tier wire protocol.

Every message travels as one frame: a 4-byte big-endian unsigned length
followed by that many payload bytes. A request payload is a UTF-8 header
line ended by ``\\n``, then the body:

    PUT <segment> <key>\\n<value bytes>
    GET <segment> <key>\\n
    SEARCH <segment>\\n<criteria JSON>
    PING\\n

A response payload is ``OK\\n<body>`` (PUT: record metadata JSON, GET: the
raw value, SEARCH: JSON array of keys) or ``ERR <CODE>\\n<detail JSON>``.
"""

from __future__ import annotations

import json
import struct
from typing import BinaryIO

from ..errors import IconError

MAX_FRAME = 64 * 1024 * 1024

_LEN = struct.Struct(">I")


def pack_frame(payload: bytes) -> bytes:
    if len(payload) > MAX_FRAME:
        raise IconError("FRAME_TOO_LARGE", f"{len(payload)} bytes exceeds {MAX_FRAME}")
    return _LEN.pack(len(payload)) + payload


def read_frame(stream: BinaryIO) -> bytes | None:
    """Read one frame; None on clean EOF before any byte."""
    header = stream.read(_LEN.size)
    if not header:
        return None
    if len(header) < _LEN.size:
        raise IconError("PROTOCOL_ERROR", "truncated frame length")
    (length,) = _LEN.unpack(header)
    if length > MAX_FRAME:
        raise IconError("FRAME_TOO_LARGE", f"{length} bytes exceeds {MAX_FRAME}")
    payload = b""
    while len(payload) < length:
        chunk = stream.read(length - len(payload))
        if not chunk:
            raise IconError("PROTOCOL_ERROR", "truncated frame payload")
        payload += chunk
    return payload


def encode_request(op: str, segment: str = "", key: str = "", body: bytes = b"") -> bytes:
    if op == "PING":
        return b"PING\n"
    if op == "SEARCH":
        head = f"SEARCH {segment}"
    else:
        head = f"{op} {segment} {key}"
    return head.encode("utf-8") + b"\n" + body


def decode_request(payload: bytes) -> tuple[str, str, str, bytes]:
    head, sep, body = payload.partition(b"\n")
    if not sep:
        raise IconError("PROTOCOL_ERROR", "request has no header line")
    try:
        parts = head.decode("utf-8").split(" ")
    except UnicodeDecodeError:
        raise IconError("PROTOCOL_ERROR", "request header is not UTF-8")
    op = parts[0]
    if op == "PING" and len(parts) == 1:
        return "PING", "", "", b""
    if op == "SEARCH" and len(parts) == 2:
        return "SEARCH", parts[1], "", body
    if op in ("PUT", "GET") and len(parts) == 3:
        return op, parts[1], parts[2], body
    raise IconError("PROTOCOL_ERROR", f"malformed request header {head[:80]!r}")


def encode_ok(body: bytes = b"") -> bytes:
    return b"OK\n" + body


def encode_err(code: str, message: str, detail: object = None) -> bytes:
    doc = {"message": message}
    if detail is not None:
        doc["detail"] = detail
    return f"ERR {code}\n".encode("utf-8") + json.dumps(doc, ensure_ascii=False).encode(
        "utf-8"
    )


def decode_response(payload: bytes) -> bytes:
    """Return the OK body, or raise the transported IconError."""
    head, sep, body = payload.partition(b"\n")
    if not sep:
        raise IconError("PROTOCOL_ERROR", "response has no header line")
    text = head.decode("utf-8", errors="replace")
    if text == "OK":
        return body
    if text.startswith("ERR "):
        code = text[4:].strip() or "INTERNAL"
        try:
            doc = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            doc = {"message": body.decode("utf-8", errors="replace")}
        raise IconError(code, doc.get("message", ""), doc.get("detail"))
    raise IconError("PROTOCOL_ERROR", f"malformed response header {text[:80]!r}")
