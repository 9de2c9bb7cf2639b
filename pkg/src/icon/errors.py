"""Shared error type. Every failure carries a stable machine-readable code."""

from __future__ import annotations


class IconError(Exception):
    """Error with a stable ``code`` string, usable across process boundaries.

    ``detail`` carries structured context (offending key, expected state, ...)
    and must stay JSON-serializable so servers can forward it to clients.
    """

    def __init__(self, code: str, message: str = "", detail: object = None):
        super().__init__(message or code)
        self.code = code
        self.message = message or code
        self.detail = detail

    def to_json(self) -> dict:
        out: dict = {"code": self.code, "message": self.message}
        if self.detail is not None:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "IconError":
        return cls(obj.get("code", "INTERNAL"), obj.get("message", ""), obj.get("detail"))
