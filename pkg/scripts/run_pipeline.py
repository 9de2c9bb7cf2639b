#!/usr/bin/env python3
"""Run the full pipeline on a document folder and inspect the draft.

Drives the service layer end to end without the HTTP server: ingest every
``*.txt`` file, create a project, run the corpus/index/analyze/build stages,
then print stage timings, counters and a tour of the draft ontology. By
default it works on the bundled fixture corpus in a temporary directory, so

    python3 scripts/run_pipeline.py

is a self-contained demo. Point --corpus-dir at any folder of Russian or
Ukrainian plain-text files to try your own material.
"""

from __future__ import annotations

import argparse
import collections
import dataclasses
import pathlib
import sys
import tempfile
import time

REPO = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from icon.config import AnalysisConfig, ServerConfig
from icon.library.store import LogStore
from icon.ontology.model import import_ontology
from icon.server.service import AppService

STAGES = ("corpus", "index", "analyze", "build")


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--corpus-dir",
        type=pathlib.Path,
        default=REPO / "tests" / "fixtures" / "corpus",
        help="folder of *.txt documents to ingest",
    )
    parser.add_argument(
        "--dictionaries-dir",
        type=pathlib.Path,
        default=REPO / "tests" / "fixtures" / "dictionaries",
        help="folder of *.json dictionary files",
    )
    parser.add_argument(
        "--data-dir",
        type=pathlib.Path,
        default=None,
        help="store location (default: fresh temporary directory)",
    )
    parser.add_argument("--name", default="демонстрация", help="project name")
    parser.add_argument("--query", default="онтология", help="search demo query")
    parser.add_argument("--tfidf-min", type=float, default=None)
    parser.add_argument("--cvalue-min", type=float, default=None)
    parser.add_argument("--pmi-min", type=float, default=None)
    parser.add_argument("--max-ngram", type=int, default=None)
    return parser.parse_args()


def make_service(args: argparse.Namespace, data_dir: pathlib.Path) -> AppService:
    overrides = {
        name: value
        for name, value in (
            ("tfidf_min", args.tfidf_min),
            ("cvalue_min", args.cvalue_min),
            ("pmi_min", args.pmi_min),
            ("max_ngram", args.max_ngram),
        )
        if value is not None
    }
    analysis = dataclasses.replace(AnalysisConfig(), **overrides)
    config = ServerConfig(
        data_dir=str(data_dir),
        dictionaries=sorted(str(p) for p in args.dictionaries_dir.glob("*.json")),
        analysis=analysis,
    )
    return AppService(LogStore(config.data_dir), config)


def run(args: argparse.Namespace, data_dir: pathlib.Path) -> None:
    svc = make_service(args, data_dir)

    files = sorted(args.corpus_dir.glob("*.txt"))
    if not files:
        raise SystemExit(f"no *.txt files in {args.corpus_dir}")
    doc_ids = []
    for path in files:
        doc = svc.ingest(path.read_text(encoding="utf-8"), source=path.name, actor="demo")
        doc_ids.append(doc["id"])
    print(f"ingested {len(doc_ids)} documents from {args.corpus_dir}")

    project = svc.create_project(args.name, actor="demo")
    pid = project["id"]
    print(f"project {pid} ({args.name!r})")

    for stage in STAGES:
        params = {"doc_ids": doc_ids, "name": f"{args.name}: корпус"} if stage == "corpus" else None
        started = time.perf_counter()
        progress = svc.run_stage(pid, stage, actor="demo", params=params)
        elapsed = time.perf_counter() - started
        counters = ", ".join(f"{k}={v}" for k, v in progress["counters"].items() if v)
        print(f"  {stage:<8} {elapsed:6.2f}s  state={progress['state']}  {counters}")

    corpus_id = next(
        event["detail"]["corpus_id"]
        for event in svc.event_log(pid)
        if event["event"] == "stage_completed" and "corpus_id" in event.get("detail", {})
    )

    doc = svc.get_ontology(pid, slot="draft")
    ontology = import_ontology(doc)
    graph = ontology.graph
    print(f"\ndraft digest {doc['digest'][:16]}… "
          f"({len(graph.nodes)} nodes, {len(graph.edges)} edges, status {ontology.status})")

    by_rtype = collections.Counter(edge.rtype for edge in graph.edges)
    for rtype, count in by_rtype.most_common():
        print(f"  {rtype:<12} {count}")

    labelled = sorted(graph.edges, key=lambda e: -e.confidence)
    print("\nhighest-confidence relations:")
    for edge in labelled[:8]:
        source = graph.nodes[edge.source].label
        target = graph.nodes[edge.target].label
        print(f"  {source} --{edge.rtype}/{edge.confidence:.2f}--> {target}")

    interpreted = [nid for nid, entries in ontology.interpretations.items() if entries]
    print(f"\n{len(interpreted)} concepts carry dictionary interpretations")
    for nid in interpreted[:3]:
        entry = ontology.interpretations[nid][0]
        print(f"  {graph.nodes[nid].label}: {entry.definition} [{entry.dictionary_id}]")

    results = svc.search(corpus_id, args.query, mode="any")
    print(f"\nsearch {args.query!r} → {len(results['results'])} documents")
    for row in results["results"][:5]:
        title = row.get("title") or row["doc_id"][:12]
        print(f"  {row['score']:7.3f}  {title}")


def main() -> None:
    args = parse_args()
    if args.data_dir is not None:
        args.data_dir.mkdir(parents=True, exist_ok=True)
        run(args, args.data_dir)
        print(f"\nstore kept at {args.data_dir}")
    else:
        with tempfile.TemporaryDirectory(prefix="icon-demo-") as tmp:
            run(args, pathlib.Path(tmp))


if __name__ == "__main__":
    main()
