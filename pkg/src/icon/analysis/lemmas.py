"""Lite lemmatizer: exception dictionary, then suffix rules, then identity.

This is deliberately not a morphological analyzer. The exception dictionary
carries irregular and ambiguous forms, the rule table only covers inflection
families whose suffix determines the lemma unambiguously, and anything else
is returned unchanged. Good enough for desk-scale corpora and fully
deterministic, which the index digest contract depends on.
"""

from __future__ import annotations

from importlib import resources

from ..common import digest_text

MIN_STEM = 3


def _read_resource(name: str) -> str:
    return (resources.files(__package__) / "resources" / name).read_text("utf-8")


def _parse_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        form, _, lemma = line.partition(" ")
        pairs.append((form, lemma))
    return pairs


class Lemmatizer:
    def __init__(
        self,
        exceptions: dict[str, str] | None = None,
        rules: list[tuple[str, str]] | None = None,
    ):
        self._exceptions = dict(_parse_pairs(_read_resource("lemma_exceptions.txt")))
        if exceptions:
            self._exceptions.update(exceptions)
        # Every lemma is its own fixpoint, so headwords survive the rules.
        for lemma in list(self._exceptions.values()):
            self._exceptions.setdefault(lemma, lemma)
        if rules is None:
            rules = [
                (suffix, "" if repl == "-" else repl)
                for suffix, repl in _parse_pairs(_read_resource("suffix_rules.txt"))
            ]
        self._rules = sorted(rules, key=lambda r: (-len(r[0]), r[0]))
        self._digest = digest_text(
            "\n".join(
                [f"{f}>{l}" for f, l in sorted(self._exceptions.items())]
                + [f"{s}>{r}" for s, r in self._rules]
            )
        )

    def lemma(self, word: str) -> str:
        word = word.lower()
        hit = self._exceptions.get(word)
        if hit is not None:
            return hit
        for suffix, replacement in self._rules:
            if word.endswith(suffix) and len(word) - len(suffix) >= MIN_STEM:
                return word[: -len(suffix)] + replacement
        return word

    def digest(self) -> str:
        """Fingerprint of the loaded tables; part of the analyzer digest."""
        return self._digest
