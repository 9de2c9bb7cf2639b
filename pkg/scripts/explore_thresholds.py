#!/usr/bin/env python3
"""Sweep analysis thresholds over a corpus and tabulate the outcome.

For each tunable knob the script holds the others at their defaults, varies
the knob over a small range, and reruns term extraction, concept formation
and relation extraction on the same prebuilt index. The table shows how the
candidate flood responds to each cutoff, which is the quickest way to pick
sensible settings for a new corpus:

    python3 scripts/explore_thresholds.py
    python3 scripts/explore_thresholds.py --corpus-dir ~/texts --knob pmi_min
"""

from __future__ import annotations

import argparse
import collections
import dataclasses
import json
import pathlib
import sys

REPO = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from icon.analysis import Analyzer, Dictionary
from icon.analysis.concepts import form_concepts
from icon.analysis.relations import extract_relations
from icon.analysis.terms import extract_terms
from icon.config import AnalysisConfig
from icon.index import build_index

SWEEPS: dict[str, list] = {
    "tfidf_min": [0.0, 0.5, 1.0, 2.0, 4.0, 8.0],
    "cvalue_min": [0.5, 1.0, 2.0, 4.0, 8.0],
    "pmi_min": [0.5, 1.0, 2.0, 3.0, 4.0],
    "max_ngram": [1, 2, 3, 4, 6],
}

COLUMNS = ("value", "terms", "multi", "concepts", "relations", "is_a", "part_of", "assoc")


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--corpus-dir",
        type=pathlib.Path,
        default=REPO / "tests" / "fixtures" / "corpus",
        help="folder of *.txt documents",
    )
    parser.add_argument(
        "--dictionaries-dir",
        type=pathlib.Path,
        default=REPO / "tests" / "fixtures" / "dictionaries",
        help="folder of *.json dictionary files",
    )
    parser.add_argument(
        "--knob",
        choices=sorted(SWEEPS),
        default=None,
        help="sweep only this parameter (default: all of them)",
    )
    return parser.parse_args()


def measure(texts, index, analyzer, sentences, dictionaries, config) -> dict:
    terms = extract_terms(texts, index, analyzer, config)
    concepts = form_concepts(terms, dictionaries)
    relations = extract_relations(sentences, concepts, config)
    rtypes = collections.Counter(r.rtype for r in relations)
    return {
        "terms": len(terms),
        "multi": sum(1 for t in terms if " " in t.lemma_key),
        "concepts": len(concepts),
        "relations": len(relations),
        "is_a": rtypes["is_a"],
        "part_of": rtypes["part_of"],
        "assoc": rtypes["associated_with"],
    }


def print_table(rows: list[dict]) -> None:
    widths = {
        col: max(len(col), *(len(str(row[col])) for row in rows)) for col in COLUMNS
    }
    header = "  ".join(col.ljust(widths[col]) for col in COLUMNS)
    print(header)
    print("  ".join("-" * widths[col] for col in COLUMNS))
    for row in rows:
        print("  ".join(str(row[col]).ljust(widths[col]) for col in COLUMNS))


def main() -> None:
    args = parse_args()
    files = sorted(args.corpus_dir.glob("*.txt"))
    if not files:
        raise SystemExit(f"no *.txt files in {args.corpus_dir}")
    texts = {path.stem: path.read_text(encoding="utf-8") for path in files}
    dictionaries = [
        Dictionary.from_dict(json.loads(path.read_text(encoding="utf-8")))
        for path in sorted(args.dictionaries_dir.glob("*.json"))
    ]

    analyzer = Analyzer()
    index = build_index("c-" + "0" * 16, texts, analyzer)
    sentences = {doc_id: analyzer.sentences(text) for doc_id, text in texts.items()}
    print(f"{len(texts)} documents, {index.doc_count} indexed, "
          f"{len(dictionaries)} dictionaries, defaults {AnalysisConfig()}")

    knobs = [args.knob] if args.knob else sorted(SWEEPS)
    for knob in knobs:
        print(f"\nsweep {knob} (others at defaults)")
        rows = []
        for value in SWEEPS[knob]:
            config = dataclasses.replace(AnalysisConfig(), **{knob: value})
            config.validate()
            row = {"value": value}
            row.update(measure(texts, index, analyzer, sentences, dictionaries, config))
            rows.append(row)
        print_table(rows)


if __name__ == "__main__":
    main()
