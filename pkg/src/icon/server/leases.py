"""Per-project exclusive stage leases: acquire-or-fail with expiry."""

from __future__ import annotations

import secrets
import threading
import time

from ..errors import IconError


class LeaseTable:
    def __init__(self, ttl_s: float = 300.0):
        self._ttl_s = ttl_s
        self._held: dict[str, tuple[str, float]] = {}
        self._lock = threading.Lock()

    def acquire(self, project_id: str) -> str:
        """Take the project's lease or raise PROJECT_BUSY; never blocks."""
        now = time.monotonic()
        token = secrets.token_hex(8)
        with self._lock:
            held = self._held.get(project_id)
            if held is not None and held[1] > now:
                raise IconError(
                    "PROJECT_BUSY",
                    f"a stage is already running on project {project_id}",
                )
            self._held[project_id] = (token, now + self._ttl_s)
        return token

    def release(self, project_id: str, token: str) -> None:
        with self._lock:
            held = self._held.get(project_id)
            if held is not None and held[0] == token:
                del self._held[project_id]
