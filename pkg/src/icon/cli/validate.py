"""Input validation done before any network call.

Rejections raise USAGE_ERROR naming the offending argument, so the shell
exit code can distinguish user mistakes from server failures.
"""

from __future__ import annotations

import re

from ..errors import IconError

LANGUAGES = ("ru", "uk")
MODES = ("any", "all", "phrase")
SLOTS = ("initial", "draft")
VERDICTS = ("approve", "reject")

_PROJECT_ID = re.compile(r"^p-[0-9a-f]{12}$")
_CORPUS_ID = re.compile(r"^c-[0-9a-f]{16}$")
_DOC_ID = re.compile(r"^[0-9a-f]{64}$")


def usage_error(message: str, argument: str) -> IconError:
    return IconError("USAGE_ERROR", message, {"argument": argument})


def validate_language(value: str | None) -> str | None:
    if value is None:
        return None
    if value not in LANGUAGES:
        raise usage_error(
            f"unsupported language {value!r} (allowed: {', '.join(LANGUAGES)})",
            "language",
        )
    return value


def validate_choice(value: str, allowed: tuple[str, ...], argument: str) -> str:
    if value not in allowed:
        raise usage_error(
            f"invalid {argument} {value!r} (allowed: {', '.join(allowed)})", argument
        )
    return value


def validate_project_id(value: str) -> str:
    if not _PROJECT_ID.match(value):
        raise usage_error(f"malformed project id {value!r}", "project")
    return value


def validate_corpus_id(value: str) -> str:
    if not _CORPUS_ID.match(value):
        raise usage_error(f"malformed corpus id {value!r}", "corpus")
    return value


def validate_doc_ids(values: list[str]) -> list[str]:
    for value in values:
        if not _DOC_ID.match(value):
            raise usage_error(f"malformed document id {value!r}", "docs")
    return values


def validate_thresholds(**named: float | int | None) -> dict:
    """Keep the non-None thresholds after range checks; reject negatives."""
    params: dict = {}
    for name, value in named.items():
        if value is None:
            continue
        if name == "max_ngram":
            if not 1 <= int(value) <= 8:
                raise usage_error("max_ngram must be in 1..8", name)
            params[name] = int(value)
            continue
        if value < 0:
            raise usage_error(f"{name} must be >= 0, got {value}", name)
        params[name] = float(value)
    return params
