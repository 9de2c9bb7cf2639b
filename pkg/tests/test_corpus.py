"""Document ingestion, corpus formation, and external source scanning."""

from __future__ import annotations

import json

import pytest

from icon.corpus import (
    Corpus,
    build_corpus,
    corpus_documents,
    corpus_texts,
    fetch,
    ingest_document,
    load_corpus,
    normalize_text,
    search_external,
)
from icon.errors import IconError
from icon.library.store import LogStore


@pytest.fixture()
def store(tmp_path):
    log = LogStore(tmp_path / "data")
    yield log
    log.close()


class TestNormalize:
    def test_nfc_lf_and_strip(self):
        # "й" as base letter plus combining breve normalizes to one codepoint.
        assert normalize_text("йод\r\nдва\r") == "йод\nдва"
        assert normalize_text("  текст  ") == "текст"
        assert normalize_text("﻿текст") == "текст"

    def test_idempotent(self):
        once = normalize_text("йод\r\n")
        assert normalize_text(once) == once


class TestIngest:
    def test_ingestion_is_idempotent(self, store, analyzer):
        raw = "Это текст о больших онтологиях.".encode("utf-8")
        first, _ = ingest_document(store, raw, "a.txt", analyzer)
        second, _ = ingest_document(store, raw, "b.txt", analyzer)
        assert first.id == second.id
        assert second.source == "a.txt"  # the stored document wins
        assert store.search("documents", {"key": {"prefix": ""}}) == [first.id]

    def test_title_defaults_to_first_line(self, store, analyzer):
        raw = "Первая строка этого документа.\nВторая строка.".encode("utf-8")
        document, _ = ingest_document(store, raw, "x.txt", analyzer)
        assert document.title == "Первая строка этого документа."

    def test_explicit_title_and_language(self, store, analyzer):
        document, warnings = ingest_document(
            store, "Текст.".encode("utf-8"), "x.txt", analyzer,
            title="Заголовок", language="uk",
        )
        assert document.title == "Заголовок"
        assert document.language == "uk"
        assert warnings == []

    def test_detected_language_and_warning(self, store, analyzer):
        document, warnings = ingest_document(
            store, "Это был хороший текст для теста.".encode("utf-8"), "ru.txt", analyzer
        )
        assert document.language == "ru"
        assert warnings == []
        ambiguous, warnings = ingest_document(
            store, "компьютер процессор".encode("utf-8"), "amb.txt", analyzer
        )
        assert ambiguous.language == "ru"
        assert len(warnings) == 1

    def test_bad_explicit_language(self, store, analyzer):
        with pytest.raises(IconError) as err:
            ingest_document(store, b"Text.", "x.txt", analyzer, language="de")
        assert err.value.code == "USAGE_ERROR"

    def test_empty_document(self, store, analyzer):
        for raw in (b"", b"   \n  ", "﻿".encode("utf-8")):
            with pytest.raises(IconError) as err:
                ingest_document(store, raw, "x.txt", analyzer)
            assert err.value.code == "EMPTY_DOCUMENT"

    def test_encoding_error(self, store, analyzer):
        with pytest.raises(IconError) as err:
            ingest_document(store, b"\xff\xfe\x00 broken", "x.txt", analyzer)
        assert err.value.code == "ENCODING_ERROR"

    def test_round_trips_through_the_store(self, store, analyzer):
        document, _ = ingest_document(store, "Текст примера.".encode("utf-8"), "x.txt", analyzer)
        stored = json.loads(store.get("documents", document.id).decode("utf-8"))
        assert stored["text"] == "Текст примера."
        assert stored["id"] == document.id


class TestBuildCorpus:
    def make_docs(self, store, analyzer, count=3):
        ids = []
        for i in range(count):
            document, _ = ingest_document(
                store, f"Документ номер {i} о системах.".encode("utf-8"), f"{i}.txt", analyzer
            )
            ids.append(document.id)
        return ids

    def test_duplicates_collapse_in_order(self, store, analyzer):
        d1, d2, _ = self.make_docs(store, analyzer)
        corpus = build_corpus(store, "demo", [d1, d2, d1])
        assert corpus.doc_ids == (d1, d2)
        assert corpus.id.startswith("c-") and len(corpus.id) == 18

    def test_corpus_id_depends_on_name_and_members(self, store, analyzer):
        d1, d2, _ = self.make_docs(store, analyzer)
        a = build_corpus(store, "one", [d1, d2])
        b = build_corpus(store, "two", [d1, d2])
        c = build_corpus(store, "one", [d2, d1])
        assert len({a.id, b.id, c.id}) == 3
        assert build_corpus(store, "one", [d1, d2]).id == a.id

    def test_unknown_document(self, store, analyzer):
        d1, _, _ = self.make_docs(store, analyzer)
        with pytest.raises(IconError) as err:
            build_corpus(store, "demo", [d1, "missing"])
        assert err.value.code == "UNKNOWN_DOCUMENT"

    def test_empty_selection_and_name(self, store, analyzer):
        with pytest.raises(IconError) as err:
            build_corpus(store, "demo", [])
        assert err.value.code == "EMPTY_SELECTION"
        with pytest.raises(IconError) as err:
            build_corpus(store, "  ", ["d"])
        assert err.value.code == "USAGE_ERROR"

    def test_load_and_resolve(self, store, analyzer):
        ids = self.make_docs(store, analyzer)
        corpus = build_corpus(store, "demo", ids)
        loaded = load_corpus(store, corpus.id)
        assert loaded.doc_ids == tuple(ids)
        documents = corpus_documents(store, loaded)
        assert sorted(documents) == sorted(ids)
        texts = corpus_texts(store, loaded)
        assert all(text.startswith("Документ номер") for text in texts.values())

    def test_load_unknown_corpus(self, store):
        with pytest.raises(IconError) as err:
            load_corpus(store, "c-nope")
        assert err.value.code == "UNKNOWN_CORPUS"

    def test_broken_reference_detected(self, store):
        corpus = Corpus(id="c-x", name="x", doc_ids=("ghost",), created_at="t")
        with pytest.raises(IconError) as err:
            corpus_documents(store, corpus)
        assert err.value.code == "UNKNOWN_DOCUMENT"


class TestExternalSources:
    @pytest.fixture()
    def source_dir(self, tmp_path):
        root = tmp_path / "sources"
        root.mkdir()
        (root / "ontology.txt").write_text("Текст про онтологии.", encoding="utf-8")
        (root / "corpus.txt").write_text("Текст про корпуса.", encoding="utf-8")
        (root / "nested").mkdir()
        (root / "nested" / "deep.txt").write_text("Про онтологии глубже.", encoding="utf-8")
        (root / "ignored.md").write_text("не txt", encoding="utf-8")
        return root

    def test_wildcard_lists_all_txt_files(self, source_dir):
        found = search_external({"sources": [{"kind": "directory", "root": str(source_dir)}]}, "*")
        assert sorted(d.title for d in found) == ["corpus", "deep", "ontology"]
        assert all(d.size > 0 for d in found)

    def test_substring_matches_name_and_content(self, source_dir):
        config = {"sources": [{"kind": "directory", "root": str(source_dir)}]}
        by_content = search_external(config, "ОНТОЛОГИИ")
        assert sorted(d.title for d in by_content) == ["deep", "ontology"]
        by_name = search_external(config, "corpus")
        assert [d.title for d in by_name] == ["corpus"]

    def test_matches_equal_a_plain_scan(self, source_dir):
        config = {"sources": [{"kind": "directory", "root": str(source_dir)}]}
        query = "про"
        expected = sorted(
            str(path)
            for path in source_dir.rglob("*.txt")
            if query in path.name.casefold()
            or query in path.read_text("utf-8").casefold()
        )
        assert sorted(d.uri for d in search_external(config, query)) == expected

    def test_url_list_sources(self):
        config = {"sources": [{"kind": "url_list", "urls": [
            "https://example.org/ontology.txt",
            "https://example.org/other.txt",
        ]}]}
        assert len(search_external(config, "*")) == 2
        hits = search_external(config, "ontology")
        assert [d.uri for d in hits] == ["https://example.org/ontology.txt"]

    def test_missing_directory(self, tmp_path):
        config = {"sources": [{"kind": "directory", "root": str(tmp_path / "ghost")}]}
        with pytest.raises(IconError) as err:
            search_external(config, "*")
        assert err.value.code == "SOURCE_UNAVAILABLE"

    def test_unsupported_kind(self):
        with pytest.raises(IconError) as err:
            search_external({"sources": [{"kind": "ftp"}]}, "*")
        assert err.value.code == "UNSUPPORTED_SOURCE"

    def test_fetch_local_file(self, source_dir):
        found = search_external(
            {"sources": [{"kind": "directory", "root": str(source_dir)}]}, "corpus"
        )
        assert fetch(found[0]) == "Текст про корпуса.".encode("utf-8")

    def test_fetch_missing_file(self, tmp_path):
        from icon.corpus import SourceDescriptor

        with pytest.raises(IconError) as err:
            fetch(SourceDescriptor(uri=str(tmp_path / "none.txt"), title="x", size=0))
        assert err.value.code == "SOURCE_UNAVAILABLE"
