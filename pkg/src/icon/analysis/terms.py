"""Term extraction: tf-idf unigrams plus C-value multiword candidates.

Unigram statistics come straight from the inverted index. Multiword
candidates (2 to max_ngram lemmas) are collected from runs of consecutive
word tokens inside one sentence; a run breaks at punctuation, numbers and
sentence ends. A candidate's head and tail must not be stopwords.

C-value of candidate a with frequency f(a):

    c(a) = 0:  log2(|a|) * f(a)
    c(a) > 0:  log2(|a|) * (f(a) - t(a) / c(a))

where c(a) counts the distinct longer candidates containing a and t(a)
accumulates their frequencies corrected for their own nesting, filled in
while walking candidates longest first.
"""

from __future__ import annotations

import math
from collections import defaultdict

from . import Analyzer
from .model import Term
from ..config import AnalysisConfig
from ..errors import IconError
from ..index import InvertedIndex, corpus_content_digest


def extract_terms(
    doc_texts: dict[str, str],
    index: InvertedIndex,
    analyzer: Analyzer,
    config: AnalysisConfig,
) -> list[Term]:
    """Extract scored terms, sorted by score descending then lemma_key."""
    if index.corpus_digest != corpus_content_digest(doc_texts):
        raise IconError(
            "STALE_INDEX",
            "index was built from different corpus contents; rebuild it",
        )
    if index.analyzer_digest != analyzer.digest():
        raise IconError(
            "STALE_INDEX", "index was built with a different analyzer configuration"
        )

    terms = _unigram_terms(index, analyzer, config)
    terms.extend(_multiword_terms(doc_texts, index, analyzer, config))
    terms.sort(key=lambda t: (-t.score, t.lemma_key))
    return terms


def _unigram_terms(
    index: InvertedIndex, analyzer: Analyzer, config: AnalysisConfig
) -> list[Term]:
    results = []
    for lemma, postings in index.entries.items():
        if lemma.isdigit() or lemma in analyzer.stopwords:
            continue
        tf = sum(len(p.positions) for p in postings)
        df = len(postings)
        tfidf = tf * index.idf(lemma)
        if tfidf < config.tfidf_min:
            continue
        occurrences = tuple(
            (p.doc_id, pos) for p in postings for pos in p.positions
        )
        results.append(
            Term(
                lemma_key=lemma,
                tf=tf,
                df=df,
                tfidf=tfidf,
                cvalue=None,
                occurrences=occurrences,
            )
        )
    return results


def collect_ngram_candidates(
    doc_texts: dict[str, str], analyzer: Analyzer, max_ngram: int
) -> dict[tuple[str, ...], list[tuple[str, int]]]:
    """Map candidate lemma tuples to their (doc_id, position) occurrences."""
    occurrences: dict[tuple[str, ...], list[tuple[str, int]]] = defaultdict(list)
    for doc_id in sorted(doc_texts):
        for sentence in analyzer.sentences(doc_texts[doc_id]):
            run: list = []
            for token in [*sentence, None]:
                if token is not None and token.kind == "word":
                    run.append(token)
                    continue
                for n in range(2, max_ngram + 1):
                    for start in range(0, len(run) - n + 1):
                        window = run[start : start + n]
                        if analyzer.is_stopword(window[0]) or analyzer.is_stopword(
                            window[-1]
                        ):
                            continue
                        key = tuple(t.lemma for t in window)
                        occurrences[key].append((doc_id, window[0].position))
                run = []
    return dict(occurrences)


def _subgrams(key: tuple[str, ...]) -> set[tuple[str, ...]]:
    return {
        key[start : start + n]
        for n in range(2, len(key))
        for start in range(0, len(key) - n + 1)
    }


def compute_cvalues(
    frequencies: dict[tuple[str, ...], int]
) -> dict[tuple[str, ...], float]:
    """C-value for every candidate, walking longest candidates first."""
    nested_freq: dict[tuple[str, ...], float] = defaultdict(float)
    containers: dict[tuple[str, ...], int] = defaultdict(int)
    cvalues: dict[tuple[str, ...], float] = {}
    for key in sorted(frequencies, key=lambda k: (-len(k), k)):
        freq = frequencies[key]
        t_a, c_a = nested_freq[key], containers[key]
        base = math.log2(len(key))
        cvalues[key] = base * (freq if c_a == 0 else freq - t_a / c_a)
        for sub in _subgrams(key):
            if sub in frequencies:
                nested_freq[sub] += freq - t_a
                containers[sub] += 1
    return cvalues


def _multiword_terms(
    doc_texts: dict[str, str],
    index: InvertedIndex,
    analyzer: Analyzer,
    config: AnalysisConfig,
) -> list[Term]:
    candidates = collect_ngram_candidates(doc_texts, analyzer, config.max_ngram)
    frequencies = {key: len(occ) for key, occ in candidates.items()}
    cvalues = compute_cvalues(frequencies)
    results = []
    for key, occ in candidates.items():
        cvalue = cvalues[key]
        if cvalue < config.cvalue_min:
            continue
        tf = len(occ)
        df = len({doc_id for doc_id, _ in occ})
        idf = math.log(index.doc_count / df) if df else 0.0
        results.append(
            Term(
                lemma_key=" ".join(key),
                tf=tf,
                df=df,
                tfidf=tf * idf,
                cvalue=cvalue,
                occurrences=tuple(sorted(occ)),
            )
        )
    return results
