"""Credential file verification and expiring bearer tokens."""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import threading
import time

from ..errors import IconError


def hash_password(password: str, salt: str) -> str:
    return hashlib.sha256((salt + password).encode("utf-8")).hexdigest()


def credential_entry(password: str) -> dict:
    salt = secrets.token_hex(16)
    return {"salt": salt, "hash": hash_password(password, salt)}


def load_credentials(path: str | None) -> dict[str, dict]:
    """Read the {username: {salt, hash}} file; default dev user without one."""
    if path is None:
        return {"admin": credential_entry("admin")}
    try:
        with open(path, encoding="utf-8") as handle:
            users = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise IconError("INVALID_CONFIG", f"cannot read credentials file {path}: {exc}")
    if not isinstance(users, dict) or not all(
        isinstance(v, dict) and {"salt", "hash"} <= set(v) for v in users.values()
    ):
        raise IconError(
            "INVALID_CONFIG", f"credentials file {path} must map users to salt/hash"
        )
    return users


class TokenBroker:
    """Issues opaque bearer tokens and checks them until they expire."""

    def __init__(self, credentials: dict[str, dict], ttl_s: float = 3600.0):
        self._credentials = credentials
        self._ttl_s = ttl_s
        self._tokens: dict[str, tuple[str, float]] = {}
        self._lock = threading.Lock()

    def authenticate(self, username: str, password: str) -> dict:
        entry = self._credentials.get(username)
        if entry is None or not hmac.compare_digest(
            hash_password(password, entry["salt"]), entry["hash"]
        ):
            raise IconError("AUTH_FAILED", "unknown user or wrong password")
        token = secrets.token_urlsafe(32)
        expires_at = time.monotonic() + self._ttl_s
        with self._lock:
            self._tokens[token] = (username, expires_at)
        return {"token": token, "expires_in_s": self._ttl_s, "user": username}

    def resolve(self, token: str | None) -> str:
        """Username behind a live token; AUTH_FAILED otherwise."""
        if not token:
            raise IconError("AUTH_FAILED", "missing bearer token")
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise IconError("AUTH_FAILED", "unknown token")
            username, expires_at = entry
            if time.monotonic() >= expires_at:
                del self._tokens[token]
                raise IconError("AUTH_FAILED", "token expired")
        return username
