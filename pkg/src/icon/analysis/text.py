"""Tokenization and sentence segmentation for Cyrillic and Latin text."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

_TOKEN_RE = re.compile(r"(?P<word>\w+(?:-\w+)*)|(?P<punct>[^\w\s]+)")

# A sentence ends at [.!?]+ followed by whitespace and an uppercase letter,
# or at end of text.
_BOUNDARY_RE = re.compile(r"([.!?]+)(\s+)(?=[A-ZА-ЯЁІЇЄҐ])")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    position: int
    kind: str  # word | number | punct

    def with_lemma(self, lemma: str) -> "Token":
        return replace(self, lemma=lemma)


def tokenize(text: str, position_offset: int = 0) -> list[Token]:
    """Split text into word/number/punct tokens.

    Word and number tokens are numbered consecutively starting at
    ``position_offset``; a punct token carries the position the next
    word/number token will receive, so positions never decrease. Words are
    lowercased and keep internal hyphens; a token of digits only is a number.
    The lemma starts as the lowercased surface until a lemmatizer refines it.
    """
    tokens: list[Token] = []
    position = position_offset
    for match in _TOKEN_RE.finditer(text):
        if match.lastgroup == "word":
            surface = match.group("word").lower()
            kind = "number" if surface.isdigit() else "word"
            tokens.append(Token(surface=surface, lemma=surface, position=position, kind=kind))
            position += 1
        else:
            tokens.append(
                Token(match.group("punct"), match.group("punct"), position, "punct")
            )
    return tokens


def split_sentences(text: str) -> list[str]:
    """Split text into sentences; never returns empty strings."""
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        sentences.append(text[start : match.end(1)])
        start = match.end()
    sentences.append(text[start:])
    return [s.strip() for s in sentences if s.strip()]


def sentence_tokens(text: str) -> list[list[Token]]:
    """Tokenize per sentence with document-wide continuous positions."""
    result: list[list[Token]] = []
    offset = 0
    for sentence in split_sentences(text):
        tokens = tokenize(sentence, position_offset=offset)
        countable = sum(1 for t in tokens if t.kind != "punct")
        offset += countable
        if tokens:
            result.append(tokens)
    return result
