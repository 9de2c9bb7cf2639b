"""Tokenizer, sentence splitter, lemmatizer, and language detection."""

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from icon.analysis import Analyzer, Lemmatizer, sentence_tokens, split_sentences, tokenize

WORD_CHARS = "абвгдежзиклмнопрстуфхцчшщыьэюяіїєґabcdefgh"

# One shared instance for hypothesis properties; construction reads resources.
_ANALYZER = Analyzer()

words = st.text(alphabet=WORD_CHARS, min_size=1, max_size=10)
pieces = st.one_of(words, st.sampled_from([",", ".", "!", "?", ":", ";", "42", "2013"]))
texts = st.lists(pieces, max_size=30).map(" ".join)


class TestTokenize:
    def test_words_numbered_consecutively(self):
        tokens = tokenize("Онтология предметной области.")
        assert [(t.surface, t.position, t.kind) for t in tokens] == [
            ("онтология", 0, "word"),
            ("предметной", 1, "word"),
            ("области", 2, "word"),
            (".", 3, "punct"),
        ]

    def test_empty_text(self):
        assert tokenize("") == []
        assert tokenize("   \n\t ") == []

    def test_numbers_and_hyphenated_words(self):
        tokens = tokenize("UML-диаграмма 2013")
        assert [(t.surface, t.kind) for t in tokens] == [
            ("uml-диаграмма", "word"),
            ("2013", "number"),
        ]
        assert [t.position for t in tokens] == [0, 1]

    def test_punct_carries_next_word_position(self):
        tokens = tokenize("а, б")
        assert [(t.surface, t.position) for t in tokens] == [("а", 0), (",", 1), ("б", 1)]

    def test_position_offset(self):
        tokens = tokenize("раз два", position_offset=7)
        assert [t.position for t in tokens] == [7, 8]

    @given(texts)
    def test_non_punct_positions_are_consecutive(self, text):
        tokens = tokenize(text)
        countable = [t.position for t in tokens if t.kind != "punct"]
        assert countable == list(range(len(countable)))

    @given(texts)
    def test_punct_position_equals_the_following_words(self, text):
        tokens = tokenize(text)
        upcoming = sum(1 for t in tokens if t.kind != "punct")
        for token in reversed(tokens):
            if token.kind == "punct":
                assert token.position == upcoming
            else:
                upcoming -= 1

    @given(texts)
    def test_word_surfaces_are_lowercase(self, text):
        for token in tokenize(text.upper()):
            if token.kind == "word":
                assert token.surface == token.surface.lower()


class TestSentences:
    def test_boundary_needs_uppercase_continuation(self):
        assert split_sentences("Первое предложение. Второе! Третье?") == [
            "Первое предложение.",
            "Второе!",
            "Третье?",
        ]
        # An abbreviation dot followed by lowercase does not split.
        assert split_sentences("Сокращение т.е. не рвёт. Вторая фраза.") == [
            "Сокращение т.е. не рвёт.",
            "Вторая фраза.",
        ]

    def test_no_empty_sentences(self):
        assert split_sentences("") == []
        assert split_sentences("... ") == ["..."]

    def test_positions_continue_across_sentences(self):
        sentences = sentence_tokens("Один два. Три четыре!")
        flat = [(t.surface, t.position) for s in sentences for t in s if t.kind != "punct"]
        assert flat == [("один", 0), ("два", 1), ("три", 2), ("четыре", 3)]

    @given(texts)
    def test_sentence_tokens_cover_the_document(self, text):
        per_sentence = [t for s in sentence_tokens(text) for t in s]
        whole = tokenize(text)
        assert [t.surface for t in per_sentence] == [t.surface for t in whole]
        countable = [t.position for t in per_sentence if t.kind != "punct"]
        assert countable == list(range(len(countable)))


class TestLemmatizer:
    def test_exception_dictionary_first(self):
        lem = Lemmatizer()
        assert lem.lemma("алгоритмы") == "алгоритм"
        assert lem.lemma("базы") == "база"
        assert lem.lemma("знаниями") == "знание"

    def test_suffix_rules(self):
        lem = Lemmatizer()
        assert lem.lemma("информацией") == "информация"
        assert lem.lemma("возможностью") == "возможность"

    def test_identity_fallback(self):
        lem = Lemmatizer()
        assert lem.lemma("сервер") == "сервер"
        assert lem.lemma("xyz") == "xyz"

    def test_min_stem_guard(self):
        # Too short to strip a suffix from: stays as-is.
        assert Lemmatizer().lemma("ии") == "ии"

    def test_case_insensitive(self):
        lem = Lemmatizer()
        assert lem.lemma("АЛГОРИТМЫ") == "алгоритм"

    def test_headwords_are_fixpoints(self):
        lem = Lemmatizer()
        for word in ("алгоритм", "база", "верификация", "знание"):
            assert lem.lemma(word) == word

    def test_custom_exceptions_change_the_digest(self):
        assert Lemmatizer().digest() == Lemmatizer().digest()
        patched = Lemmatizer(exceptions={"котики": "котик"})
        assert patched.lemma("котики") == "котик"
        assert patched.digest() != Lemmatizer().digest()

    @given(words)
    def test_lemma_is_lowercase_and_nonempty(self, word):
        lemma = Lemmatizer().lemma(word)
        assert lemma
        assert lemma == lemma.lower()


class TestAnalyzer:
    def test_digest_is_stable_and_config_sensitive(self):
        assert Analyzer().digest() == Analyzer().digest()
        patched = Analyzer(Lemmatizer(exceptions={"х": "у"}))
        assert patched.digest() != Analyzer().digest()

    def test_tokens_lemmatize_only_words(self, analyzer):
        tokens = analyzer.tokens("Онтологии 2013.")
        assert [(t.lemma, t.kind) for t in tokens] == [
            ("онтология", "word"),
            ("2013", "number"),
            (".", "punct"),
        ]

    def test_stopwords_cover_both_languages(self, analyzer):
        ru = tokenize("и")[0]
        uk = tokenize("є")[0]
        assert analyzer.is_stopword(ru)
        assert analyzer.is_stopword(uk)
        assert not analyzer.is_stopword(tokenize("онтология")[0])


class TestLanguageDetection:
    def test_russian(self, analyzer):
        language, warning = analyzer.detect_language(
            "Это не просто текст, он был написан для теста."
        )
        assert (language, warning) == ("ru", None)

    def test_ukrainian(self, analyzer):
        language, warning = analyzer.detect_language(
            "Це не просто текст, він був написаний для тесту."
        )
        assert (language, warning) == ("uk", None)

    def test_no_evidence_defaults_to_russian_with_warning(self, analyzer):
        language, warning = analyzer.detect_language("компьютер процессор память")
        assert language == "ru"
        assert warning is not None and "ambiguous" in warning

    def test_balanced_evidence_warns(self, analyzer):
        ru_only = sorted(analyzer.stop_ru - analyzer.stop_uk)[0]
        uk_only = sorted(analyzer.stop_uk - analyzer.stop_ru)[0]
        language, warning = analyzer.detect_language(f"{ru_only} {uk_only}")
        assert language == "ru"
        assert warning is not None

    @settings(max_examples=30)
    @given(st.lists(words, min_size=1, max_size=20).map(" ".join))
    def test_always_returns_a_supported_language(self, text):
        language, _ = _ANALYZER.detect_language(text)
        assert language in ("ru", "uk")
