"""Linguistic analysis: tokens, lemmas, terms, concepts and relations."""

from __future__ import annotations

from importlib import resources

from .language import detect_language
from .lemmas import Lemmatizer
from .model import (
    Concept,
    Dictionary,
    DictionaryEntry,
    Evidence,
    Interpretation,
    Relation,
    Term,
    concept_kind,
)
from .text import Token, sentence_tokens, split_sentences, tokenize
from ..common import digest_text

__all__ = [
    "Analyzer",
    "Concept",
    "Dictionary",
    "DictionaryEntry",
    "Evidence",
    "Interpretation",
    "Lemmatizer",
    "Relation",
    "Term",
    "Token",
    "concept_kind",
    "detect_language",
    "sentence_tokens",
    "split_sentences",
    "tokenize",
]


def _load_stoplist(name: str) -> frozenset[str]:
    text = (resources.files(__package__) / "resources" / name).read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


class Analyzer:
    """Bundles the tokenizer, lemmatizer and stoplists behind one digest.

    The digest fingerprints everything that affects analysis output, so
    index files carry it and consumers can detect a configuration change.
    """

    def __init__(self, lemmatizer: Lemmatizer | None = None):
        self.lemmatizer = lemmatizer or Lemmatizer()
        self.stop_ru = _load_stoplist("stopwords_ru.txt")
        self.stop_uk = _load_stoplist("stopwords_uk.txt")
        self.stopwords = self.stop_ru | self.stop_uk
        self._digest = digest_text(
            "tokenizer-1\n"
            + self.lemmatizer.digest()
            + "\n"
            + digest_text("\n".join(sorted(self.stopwords)))
        )

    def digest(self) -> str:
        return self._digest

    def _lemmatized(self, tokens: list[Token]) -> list[Token]:
        return [
            t.with_lemma(self.lemmatizer.lemma(t.surface)) if t.kind == "word" else t
            for t in tokens
        ]

    def tokens(self, text: str) -> list[Token]:
        return self._lemmatized(tokenize(text))

    def sentences(self, text: str) -> list[list[Token]]:
        return [self._lemmatized(sent) for sent in sentence_tokens(text)]

    def is_stopword(self, token: Token) -> bool:
        return token.surface in self.stopwords or token.lemma in self.stopwords

    def detect_language(self, text: str) -> tuple[str, str | None]:
        return detect_language(text, self.stop_ru, self.stop_uk)
