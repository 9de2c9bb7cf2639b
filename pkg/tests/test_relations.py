"""Relation extraction: lexico-syntactic patterns and PMI co-occurrence."""

from __future__ import annotations

import math

import pytest

from icon.analysis import Analyzer
from icon.analysis.model import Concept, Evidence, Relation
from icon.analysis.relations import (
    PATTERN_CONFIDENCE,
    PhraseMatcher,
    extract_relations,
    sentence_span,
)
from icon.config import AnalysisConfig
from icon.errors import IconError

import oracles

_ANALYZER = Analyzer()

NO_PMI = AnalysisConfig(pmi_min=1000.0)


def concept(label, *synonyms):
    names = (label, *synonyms)
    return Concept(id=label, label=label, synonyms=tuple(sorted(names)), kind="object")


CONCEPTS = [
    concept("компьютер", "эвм"),
    concept("вычислительный машина"),
    concept("процессор"),
    concept("память"),
    concept("информационный система"),
    concept("база данные"),
]


def relations_for(texts, concepts=CONCEPTS, config=NO_PMI):
    doc_sentences = {
        doc_id: _ANALYZER.sentences(text) for doc_id, text in texts.items()
    }
    return extract_relations(doc_sentences, concepts, config)


def triples(relations):
    return {(r.source, r.target, r.rtype) for r in relations}


class TestPatterns:
    def test_isa_dash(self):
        found = relations_for({"d": "Компьютер — это вычислительная машина."})
        assert triples(found) == {("компьютер", "вычислительный машина", "is_a")}
        (rel,) = found
        assert rel.confidence == PATTERN_CONFIDENCE
        assert rel.evidence[0].via == "isa_dash"

    def test_isa_dash_requires_eto(self):
        assert relations_for({"d": "Компьютер — вычислительная машина."}) == []

    def test_isa_verb(self):
        found = relations_for({"d": "Компьютер является вычислительной машиной."})
        assert triples(found) == {("компьютер", "вычислительный машина", "is_a")}
        assert found[0].evidence[0].via == "isa_verb"

    def test_isa_verb_plural(self):
        found = relations_for({"d": "Процессоры являются памятью."})
        assert triples(found) == {("процессор", "память", "is_a")}

    def test_isa_such_as_reverses_arguments(self):
        found = relations_for(
            {"d": "Вычислительные машины, такие как компьютер, распространены."}
        )
        assert triples(found) == {("компьютер", "вычислительный машина", "is_a")}
        assert found[0].evidence[0].via == "isa_such_as"

    def test_part_of_consists_reverses_arguments(self):
        found = relations_for({"d": "Компьютер состоит из процессора."})
        assert triples(found) == {("процессор", "компьютер", "part_of")}
        assert found[0].evidence[0].via == "part_of_consists"

    def test_part_of_includes(self):
        found = relations_for({"d": "Компьютер включает память."})
        assert triples(found) == {("память", "компьютер", "part_of")}
        assert found[0].evidence[0].via == "part_of_includes"

    def test_includes_v_sebya_skips_the_filler(self):
        found = relations_for({"d": "Компьютер включает в себя память."})
        assert triples(found) == {("память", "компьютер", "part_of")}

    def test_synonym_mentions_resolve_to_the_concept(self):
        found = relations_for({"d": "ЭВМ является вычислительной машиной."})
        assert triples(found) == {("компьютер", "вычислительный машина", "is_a")}

    def test_unknown_slot_yields_nothing(self):
        assert relations_for({"d": "Компьютер является изобретением."}) == []
        assert relations_for({"d": "Нечто является компьютером."}) == []

    def test_self_relation_skipped(self):
        assert relations_for({"d": "ЭВМ является компьютером."}) == []

    def test_multiword_slots_match(self):
        found = relations_for({"d": "База данных является информационной системой."})
        assert triples(found) == {("база данные", "информационный система", "is_a")}

    def test_pattern_confined_to_one_sentence(self):
        found = relations_for({"d": "Компьютер работает. Является машиной процессор."})
        assert ("компьютер", "процессор", "is_a") not in triples(found)

    def test_evidence_records_sentence_span(self):
        text = "Процессор работает быстро. Компьютер включает память."
        found = relations_for({"d": text})
        (rel,) = found
        sentences = _ANALYZER.sentences(text)
        assert rel.evidence[0].span == sentence_span(sentences[1])
        assert rel.evidence[0].doc_id == "d"

    def test_duplicate_hits_union_evidence(self):
        found = relations_for(
            {
                "a": "Компьютер включает память.",
                "b": "Компьютер включает в себя память.",
            }
        )
        (rel,) = found
        assert {e.doc_id for e in rel.evidence} == {"a", "b"}
        assert rel.confidence == PATTERN_CONFIDENCE

    def test_output_sorted(self):
        found = relations_for(
            {
                "d": "Компьютер включает память. Компьютер включает процессор. "
                "Компьютер является вычислительной машиной."
            }
        )
        keys = [(r.source, r.target, r.rtype) for r in found]
        assert keys == sorted(keys)


class TestPhraseMatcher:
    def test_longest_match_wins(self):
        concepts = [concept("база"), concept("база данные")]
        matcher = PhraseMatcher(concepts)
        tokens = _ANALYZER.tokens("база данных")
        assert matcher.match_forward(tokens, 0) == "база данные"
        assert matcher.match_backward(tokens, len(tokens) - 1) == "база данные"

    def test_contested_phrase_goes_to_first_concept_by_id(self):
        first = Concept(id="а", label="а", synonyms=("а", "эвм"), kind="object")
        second = Concept(id="б", label="б", synonyms=("б", "эвм"), kind="object")
        matcher = PhraseMatcher([second, first])
        tokens = _ANALYZER.tokens("эвм")
        assert matcher.match_forward(tokens, 0) == "а"

    def test_windows_with_punctuation_rejected(self):
        matcher = PhraseMatcher([concept("база данные")])
        tokens = _ANALYZER.tokens("база, данных")
        assert matcher.match_forward(tokens, 0) is None

    def test_present_lists_each_concept_once(self):
        matcher = PhraseMatcher(CONCEPTS)
        tokens = _ANALYZER.tokens("компьютер и эвм и память")
        assert matcher.present(tokens) == {"компьютер", "память"}

    def test_sentence_span_covers_word_positions(self):
        tokens = _ANALYZER.tokens("Компьютер работает, быстро.")
        assert sentence_span(tokens) == (0, 3)
        assert sentence_span(_ANALYZER.tokens("...")) is None


class TestPMI:
    def both_sentences(self):
        # Two concepts share one sentence out of several filler sentences.
        filler = "Погода стояла ясная весь день."
        return {
            "d": " ".join(
                [
                    "Процессор и память работают вместе.",
                    "Процессор выполняет команды.",
                    filler,
                    filler,
                ]
            )
        }

    def test_association_found_with_formula_confidence(self):
        config = AnalysisConfig(pmi_min=0.1, pmi_cap=8.0)
        found = relations_for(self.both_sentences(), config=config)
        (rel,) = [r for r in found if r.rtype == "associated_with"]
        # Pairs are emitted in sorted order.
        assert (rel.source, rel.target) == ("память", "процессор")
        pmi = oracles.pmi_reference(1, 2, 1, 4)
        assert rel.confidence == pytest.approx(min(1.0, pmi / config.pmi_cap))
        assert all(e.via == "pmi" for e in rel.evidence)

    def test_threshold_is_inclusive_lower_bound(self):
        pmi = oracles.pmi_reference(1, 2, 1, 4)
        at = AnalysisConfig(pmi_min=pmi, pmi_cap=8.0)
        above = AnalysisConfig(pmi_min=pmi + 1e-6, pmi_cap=8.0)
        assert any(
            r.rtype == "associated_with"
            for r in relations_for(self.both_sentences(), config=at)
        )
        assert not any(
            r.rtype == "associated_with"
            for r in relations_for(self.both_sentences(), config=above)
        )

    def test_confidence_caps_at_one(self):
        config = AnalysisConfig(pmi_min=0.1, pmi_cap=0.2)
        found = relations_for(self.both_sentences(), config=config)
        (rel,) = [r for r in found if r.rtype == "associated_with"]
        assert rel.confidence == 1.0

    def test_each_cooccurring_sentence_contributes_evidence(self):
        texts = {
            "d": "Процессор и память работают. Процессор и память спят. "
            + "Погода ясная. " * 6
        }
        config = AnalysisConfig(pmi_min=0.1, pmi_cap=8.0)
        found = relations_for(texts, config=config)
        (rel,) = [r for r in found if r.rtype == "associated_with"]
        assert len(rel.evidence) == 2

    def test_no_association_without_cooccurrence(self):
        texts = {"d": "Процессор выполняет команды. Память хранит данные."}
        config = AnalysisConfig(pmi_min=0.0, pmi_cap=8.0)
        assert not any(
            r.rtype == "associated_with" for r in relations_for(texts, config=config)
        )


class TestFixtureCorpus:
    def test_designed_pattern_edges_present(self, corpus_texts, analyzer,
                                            dictionaries, analysis_config):
        from icon.analysis.concepts import form_concepts
        from icon.analysis.terms import extract_terms
        from icon.index import build_index

        index = build_index("c", corpus_texts, analyzer)
        terms = extract_terms(corpus_texts, index, analyzer, analysis_config)
        concepts = form_concepts(terms, dictionaries)
        doc_sentences = {
            doc_id: analyzer.sentences(text) for doc_id, text in corpus_texts.items()
        }
        relations = extract_relations(doc_sentences, concepts, analysis_config)
        designed = {
            ("компьютер", "вычислительный машина", "is_a"),
            ("база данные", "информационный система", "is_a"),
            ("тезаурус", "словарь", "is_a"),
            ("процессор", "компьютер", "part_of"),
            ("понятие", "онтология", "part_of"),
            ("термин", "онтология", "part_of"),
            ("документ", "корпус", "part_of"),
            ("уровень", "информационный система", "part_of"),
        }
        found = triples(relations)
        assert designed <= found
        assert {t for t in found if t[2] in ("is_a", "part_of")} == designed
        for rel in relations:
            assert rel.evidence, (rel.source, rel.target)
            for ev in rel.evidence:
                assert ev.doc_id in corpus_texts
                assert ev.span[0] < ev.span[1]


class TestRelationValidation:
    def test_self_relation_rejected(self):
        with pytest.raises(IconError) as err:
            Relation(source="x", target="x", rtype="is_a", confidence=0.5)
        assert err.value.code == "INVALID_RELATION"

    def test_unknown_rtype_rejected(self):
        with pytest.raises(IconError):
            Relation(source="x", target="y", rtype="related", confidence=0.5)

    def test_confidence_bounds(self):
        with pytest.raises(IconError):
            Relation(source="x", target="y", rtype="is_a", confidence=1.5)
        with pytest.raises(IconError):
            Relation(source="x", target="y", rtype="is_a", confidence=-0.1)

    def test_edge_round_trip(self):
        rel = Relation(
            source="x",
            target="y",
            rtype="part_of",
            confidence=0.75,
            evidence=(Evidence("d", (0, 4), "pmi"),),
            flags=("manual",),
        )
        assert Relation.from_edge(rel.to_edge()) == rel
