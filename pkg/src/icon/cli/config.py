"""Client-side configuration and the cached login session.

The terminal client knows the logic-tier address and nothing else; the
data-tier address never appears here (the composition check enforces the
same rule on the manifest level).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

DEFAULT_SERVER = "http://127.0.0.1:7700"
DEFAULT_TOKEN_CACHE = "~/.icon/session.json"


@dataclass
class ClientConfig:
    """Where the client talks to and how it prints."""

    server: str = DEFAULT_SERVER
    token_cache: str = DEFAULT_TOKEN_CACHE
    output: str = "table"  # "table" or "json"

    @classmethod
    def from_env(cls) -> "ClientConfig":
        return cls(
            server=os.environ.get("ICON_SERVER", DEFAULT_SERVER),
            token_cache=os.environ.get("ICON_TOKEN_CACHE", DEFAULT_TOKEN_CACHE),
        )

    @property
    def cache_path(self) -> Path:
        return Path(self.token_cache).expanduser()


def load_session(config: ClientConfig) -> dict | None:
    """The cached token for this server, or None when absent or unreadable."""
    try:
        session = json.loads(config.cache_path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None
    if not isinstance(session, dict) or session.get("server") != config.server:
        return None
    return session


def save_session(config: ClientConfig, session: dict) -> None:
    path = config.cache_path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(session, indent=2) + "\n", encoding="utf-8")
    try:
        path.chmod(0o600)
    except OSError:
        pass
