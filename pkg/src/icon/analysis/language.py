"""Language detection by stopword frequency over the built-in stoplists."""

from __future__ import annotations

from .text import tokenize

RATIO = 1.5


def detect_language(
    text: str, stop_ru: frozenset[str], stop_uk: frozenset[str]
) -> tuple[str, str | None]:
    """Return (language, warning). Ties and empty evidence fall back to ru."""
    words = [t.surface for t in tokenize(text) if t.kind == "word"]
    ru_hits = sum(1 for w in words if w in stop_ru)
    uk_hits = sum(1 for w in words if w in stop_uk)
    if ru_hits >= RATIO * uk_hits and ru_hits > 0:
        return "ru", None
    if uk_hits >= RATIO * ru_hits and uk_hits > 0:
        return "uk", None
    return "ru", (
        f"language ambiguous (ru stopwords: {ru_hits}, uk stopwords: {uk_hits}); "
        "defaulting to ru"
    )
