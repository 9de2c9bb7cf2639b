"""Application service: pipeline orchestration over the segmented store."""

from __future__ import annotations

import json
import queue
import threading
import uuid
from dataclasses import replace

from .auth import TokenBroker, load_credentials
from .leases import LeaseTable
from .statemachine import VERDICT_STATES, check_stage, legal_stages
from ..analysis import Analyzer
from ..analysis.concepts import form_concepts, synonym_groups
from ..analysis.model import Concept, Dictionary, Relation, Term
from ..analysis.relations import extract_relations
from ..analysis.terms import extract_terms
from ..common import canonical_json, digest_json, utc_now
from ..config import ServerConfig
from ..corpus import build_corpus, corpus_texts, load_corpus, ingest_document
from ..errors import IconError
from ..index import analyze_query, build_index, parse_index, query_index, serialize_index
from ..library.store import Store
from ..ontology import (
    Ontograph,
    Ontology,
    analyze_interpretation_completeness,
    bind_to_initial,
    build_document_ontograph,
    export_ontology,
    import_ontology,
    merge_ontographs,
)
from ..ontology.build import verify_ontograph

THRESHOLD_PARAMS = ("tfidf_min", "cvalue_min", "pmi_min", "pmi_cap", "max_ngram")
ONTOLOGY_SLOTS = ("initial", "draft")

# Draft edits are only legal while the draft is still in play; the status the
# saved document carries follows the project state.
_DRAFT_STATUS = {
    "DRAFT_ONTOLOGY": "draft",
    "UNDER_VERIFICATION": "under_verification",
}


class AppService:
    """All pipeline operations behind the HTTP API, testable without it."""

    def __init__(self, store: Store, config: ServerConfig | None = None):
        self.store = store
        self.config = config or ServerConfig()
        self.analyzer = Analyzer()
        self.tokens = TokenBroker(
            load_credentials(self.config.credentials_file), self.config.token_ttl_s
        )
        self.leases = LeaseTable(self.config.lease_ttl_s)
        self._subscribers: dict[str, list[queue.SimpleQueue]] = {}
        self._sub_lock = threading.Lock()
        self.dictionaries = self._load_dictionaries()

    # ------------------------------------------------------------------ setup

    def _load_dictionaries(self) -> list[Dictionary]:
        """Read configured dictionary files into the store, keep config order."""
        loaded = []
        for path in self.config.dictionaries:
            try:
                with open(path, encoding="utf-8") as handle:
                    doc = json.load(handle)
            except (OSError, json.JSONDecodeError) as exc:
                raise IconError("INVALID_CONFIG", f"cannot read dictionary {path}: {exc}")
            dictionary = Dictionary.from_dict(doc)
            self.store.put(
                "dictionaries", dictionary.id, canonical_json(dictionary.to_dict())
            )
            loaded.append(dictionary)
        return loaded

    # ------------------------------------------------------------ persistence

    def _load_project(self, project_id: str) -> dict:
        try:
            raw = self.store.get("projects", project_id)
        except IconError as exc:
            if exc.code == "NOT_FOUND":
                raise IconError("UNKNOWN_PROJECT", f"no project {project_id!r}")
            raise
        return json.loads(raw.decode("utf-8"))

    def _commit(self, record: dict, events: list[tuple[str, dict]], actor: str) -> None:
        """Append events, persist the record, then notify live subscribers."""
        appended = []
        for event, detail in events:
            entry = {"ts": utc_now(), "actor": actor, "event": event, "detail": detail}
            record["event_log"].append(entry)
            appended.append(entry)
        self.store.put("projects", record["id"], canonical_json(record))
        for entry in appended:
            self._publish(record["id"], entry)

    # ---------------------------------------------------------------- events

    def subscribe(self, project_id: str) -> queue.SimpleQueue:
        q: queue.SimpleQueue = queue.SimpleQueue()
        with self._sub_lock:
            self._subscribers.setdefault(project_id, []).append(q)
        return q

    def unsubscribe(self, project_id: str, q: queue.SimpleQueue) -> None:
        with self._sub_lock:
            listeners = self._subscribers.get(project_id, [])
            if q in listeners:
                listeners.remove(q)

    def _publish(self, project_id: str, entry: dict) -> None:
        with self._sub_lock:
            listeners = list(self._subscribers.get(project_id, ()))
        for q in listeners:
            q.put(entry)

    # -------------------------------------------------------------- projects

    def create_project(self, name: str, actor: str) -> dict:
        if not name or not name.strip():
            raise IconError("USAGE_ERROR", "project name must be non-empty")
        record = {
            "id": "p-" + uuid.uuid4().hex[:12],
            "name": name.strip(),
            "state": "NEW",
            "corpus_id": None,
            "artifacts": {},
            "event_log": [],
            "created_at": utc_now(),
        }
        self._commit(record, [("project_created", {"name": record["name"]})], actor)
        return record

    def list_projects(self) -> list[dict]:
        keys = self.store.search("projects", {"key": {"prefix": ""}})
        summaries = []
        for key in keys:
            record = self._load_project(key)
            summaries.append(
                {
                    "id": record["id"],
                    "name": record["name"],
                    "state": record["state"],
                    "created_at": record["created_at"],
                }
            )
        return summaries

    def get_progress(self, project_id: str) -> dict:
        record = self._load_project(project_id)
        counters = {
            "docs": 0,
            "terms": 0,
            "concepts": 0,
            "relations": 0,
            "nodes": 0,
            "edges": 0,
        }
        if record.get("corpus_id"):
            corpus = load_corpus(self.store, record["corpus_id"])
            counters["docs"] = len(corpus.doc_ids)
        for ref in record["artifacts"].get("analyze", ()):
            segment, key = ref.split("/", 1)
            doc = json.loads(self.store.get(segment, key).decode("utf-8"))
            field = {"termsets": "terms", "conceptsets": "concepts", "relationsets": "relations"}[segment]
            counters[field] = len(doc[field])
        for ref in record["artifacts"].get("build", ()):
            segment, key = ref.split("/", 1)
            doc = json.loads(self.store.get(segment, key).decode("utf-8"))
            counters["nodes"] = len(doc["nodes"])
            counters["edges"] = len(doc["edges"])
        return {
            "id": record["id"],
            "name": record["name"],
            "state": record["state"],
            "counters": counters,
            "last_event": record["event_log"][-1] if record["event_log"] else None,
            "legal_stages": legal_stages(record["state"]),
        }

    def event_log(self, project_id: str) -> list[dict]:
        return self._load_project(project_id)["event_log"]

    # ---------------------------------------------------------------- stages

    def run_stage(
        self, project_id: str, stage: str, actor: str, params: dict | None = None
    ) -> dict:
        params = params or {}
        record = self._load_project(project_id)
        check_stage(record["state"], stage)
        lease = self.leases.acquire(project_id)
        try:
            record = self._load_project(project_id)
            target = check_stage(record["state"], stage)
            handler = getattr(self, f"_stage_{stage}")
            try:
                detail = handler(record, params)
            except IconError as exc:
                fresh = self._load_project(project_id)
                self._commit(
                    fresh,
                    [("stage_failed", {"stage": stage, "error": exc.code, "message": exc.message})],
                    actor,
                )
                raise IconError(exc.code, f"stage {stage}: {exc.message}", exc.detail)
            record["state"] = target
            self._commit(record, [("stage_completed", {"stage": stage, **detail})], actor)
        finally:
            self.leases.release(project_id, lease)
        return self.get_progress(project_id)

    def _stage_corpus(self, record: dict, params: dict) -> dict:
        doc_ids = params.get("doc_ids")
        if doc_ids is None:
            doc_ids = self.store.search("documents", {"key": {"prefix": ""}})
        corpus = build_corpus(self.store, params.get("name") or record["name"], doc_ids)
        record["corpus_id"] = corpus.id
        record["artifacts"]["corpus"] = [f"corpora/{corpus.id}"]
        return {"corpus_id": corpus.id, "docs": len(corpus.doc_ids)}

    def _stage_index(self, record: dict, params: dict) -> dict:
        corpus = load_corpus(self.store, record["corpus_id"])
        texts = corpus_texts(self.store, corpus)
        try:
            prior = parse_index(self.store.get("indexes", corpus.id))
        except IconError as exc:
            if exc.code != "NOT_FOUND":
                raise
            prior = None
        index = build_index(corpus.id, texts, self.analyzer, prior)
        self.store.put("indexes", corpus.id, serialize_index(index))
        record["artifacts"]["index"] = [f"indexes/{corpus.id}"]
        return {"index_version": index.version, "lemmas": len(index.entries)}

    def _analysis_config(self, params: dict):
        overrides = {}
        for key, value in params.items():
            if key not in THRESHOLD_PARAMS:
                raise IconError("USAGE_ERROR", f"unknown analysis parameter {key!r}")
            overrides[key] = value
        config = replace(self.config.analysis, **overrides)
        config.validate()
        return config

    def _stage_analyze(self, record: dict, params: dict) -> dict:
        config = self._analysis_config(params)
        corpus = load_corpus(self.store, record["corpus_id"])
        texts = corpus_texts(self.store, corpus)
        index = parse_index(self.store.get("indexes", corpus.id))
        terms = extract_terms(texts, index, self.analyzer, config)
        concepts = form_concepts(terms, self.dictionaries)
        sentences = {doc_id: self.analyzer.sentences(text) for doc_id, text in texts.items()}
        relations = extract_relations(sentences, concepts, config)

        refs = []
        for segment, field, items in (
            ("termsets", "terms", [t.to_dict() for t in terms]),
            ("conceptsets", "concepts", [c.to_node() for c in concepts]),
            ("relationsets", "relations", [r.to_edge() for r in relations]),
        ):
            set_id = digest_json(items)[:16]
            doc = {
                "id": set_id,
                "project_id": record["id"],
                "corpus_id": corpus.id,
                field: items,
            }
            key = f"{record['id']}:{set_id}"
            self.store.put(segment, key, canonical_json(doc))
            refs.append(f"{segment}/{key}")
        record["artifacts"]["analyze"] = refs
        return {
            "terms": len(terms),
            "concepts": len(concepts),
            "relations": len(relations),
        }

    def _load_analysis_sets(
        self, record: dict
    ) -> tuple[list[Term], list[Concept], list[Relation]]:
        by_segment = {}
        for ref in record["artifacts"].get("analyze", ()):
            segment, key = ref.split("/", 1)
            by_segment[segment] = json.loads(self.store.get(segment, key).decode("utf-8"))
        terms = [Term.from_dict(t) for t in by_segment["termsets"]["terms"]]
        concepts = [Concept.from_node(c) for c in by_segment["conceptsets"]["concepts"]]
        relations = [Relation.from_edge(r) for r in by_segment["relationsets"]["relations"]]
        return terms, concepts, relations

    def _stage_build(self, record: dict, params: dict) -> dict:
        corpus = load_corpus(self.store, record["corpus_id"])
        terms, concepts, relations = self._load_analysis_sets(record)
        known = set(corpus.doc_ids)
        graphs = [
            build_document_ontograph(doc_id, concepts, relations, terms, known)
            for doc_id in corpus.doc_ids
        ]
        groups = synonym_groups(self.dictionaries)
        lemmatizer = self.analyzer.lemmatizer
        merged = merge_ontographs(graphs, groups=groups, lemmatizer=lemmatizer)
        initial = self._load_initial(record["id"])
        bound = bind_to_initial(merged, initial, None, groups, lemmatizer)
        # Definitions attach here: every node is looked up across the
        # configured dictionaries by its label and synonyms.
        completeness = analyze_interpretation_completeness(bound, self.dictionaries)

        doc = export_ontology(bound)
        key = f"{record['id']}:draft"
        self.store.put("ontologies", key, canonical_json(doc))
        record["artifacts"]["build"] = [f"ontologies/{key}"]
        return {
            "nodes": len(bound.graph.nodes),
            "edges": len(bound.graph.edges),
            "digest": doc["digest"],
            "interpretations_filled": len(completeness.filled),
            "interpretations_missing": len(completeness.missing),
        }

    def _load_initial(self, project_id: str) -> Ontology:
        try:
            raw = self.store.get("ontologies", f"{project_id}:initial")
        except IconError as exc:
            if exc.code != "NOT_FOUND":
                raise
            return Ontology(graph=Ontograph(provenance="initial"))
        return import_ontology(json.loads(raw.decode("utf-8")))

    def _stage_submit_verification(self, record: dict, params: dict) -> dict:
        ontology, key = self._load_slot(record["id"], "draft")
        ontology.status = "under_verification"
        doc = export_ontology(ontology)
        self.store.put("ontologies", key, canonical_json(doc))
        return {"digest": doc["digest"]}

    # -------------------------------------------------------------- ontology

    def _load_slot(self, project_id: str, slot: str) -> tuple[Ontology, str]:
        key = f"{project_id}:{slot}"
        raw = self.store.get("ontologies", key)
        return import_ontology(json.loads(raw.decode("utf-8"))), key

    def get_ontology(self, project_id: str, slot: str = "draft") -> dict:
        if slot not in ONTOLOGY_SLOTS:
            raise IconError("USAGE_ERROR", f"slot must be one of {ONTOLOGY_SLOTS}")
        self._load_project(project_id)
        try:
            raw = self.store.get("ontologies", f"{project_id}:{slot}")
        except IconError as exc:
            if exc.code == "NOT_FOUND":
                raise IconError(
                    "NOT_FOUND", f"project {project_id} has no {slot} ontology"
                )
            raise
        return json.loads(raw.decode("utf-8"))

    def put_ontology(
        self,
        project_id: str,
        doc: dict,
        actor: str,
        slot: str = "draft",
        if_match: str | None = None,
    ) -> dict:
        if slot not in ONTOLOGY_SLOTS:
            raise IconError("USAGE_ERROR", f"slot must be one of {ONTOLOGY_SLOTS}")
        record = self._load_project(project_id)
        key = f"{project_id}:{slot}"
        stored_digest = None
        try:
            stored_digest = json.loads(
                self.store.get("ontologies", key).decode("utf-8")
            ).get("digest")
        except IconError as exc:
            if exc.code != "NOT_FOUND":
                raise
        if if_match is not None and if_match != stored_digest:
            raise IconError(
                "DIGEST_MISMATCH",
                "stored ontology changed since it was read",
                {"stored": stored_digest, "expected": if_match},
            )
        ontology = import_ontology(doc)
        if slot == "initial":
            ontology.graph.provenance = "initial"
            ontology.status = "draft"
        else:
            status = _DRAFT_STATUS.get(record["state"])
            if status is None:
                raise IconError(
                    "INVALID_STATE",
                    f"cannot save a draft ontology while project is {record['state']}",
                    {"actual": record["state"]},
                )
            ontology.status = status
        exported = export_ontology(ontology)
        self.store.put("ontologies", key, canonical_json(exported))
        self._commit(
            record, [("ontology_saved", {"slot": slot, "digest": exported["digest"]})], actor
        )
        return {"slot": slot, "digest": exported["digest"]}

    def verify(self, project_id: str, verdict: str, actor: str, comment: str = "") -> dict:
        record = self._load_project(project_id)
        if record["state"] != "UNDER_VERIFICATION":
            raise IconError(
                "INVALID_STATE",
                f"verification requires UNDER_VERIFICATION, project is {record['state']}",
                {"expected": ["UNDER_VERIFICATION"], "actual": record["state"]},
            )
        lease = self.leases.acquire(project_id)
        try:
            record = self._load_project(project_id)
            if record["state"] != "UNDER_VERIFICATION":
                raise IconError(
                    "INVALID_STATE",
                    f"verification requires UNDER_VERIFICATION, project is {record['state']}",
                    {"expected": ["UNDER_VERIFICATION"], "actual": record["state"]},
                )
            ontology, key = self._load_slot(project_id, "draft")
            try:
                ontology, audit = verify_ontograph(ontology, verdict, actor, comment)
            except IconError as exc:
                if exc.code == "VERIFICATION_BLOCKED":
                    self._commit(
                        record,
                        [("verification_blocked", {"findings": exc.detail.get("findings", [])})],
                        actor,
                    )
                raise
            self.store.put("ontologies", key, canonical_json(export_ontology(ontology)))
            record["state"] = VERDICT_STATES[verdict]
            self._commit(record, [("verification", audit)], actor)
        finally:
            self.leases.release(project_id, lease)
        return self.get_progress(project_id)

    # ------------------------------------------------------------- documents

    def ingest(
        self,
        text: str,
        source: str,
        actor: str,
        title: str | None = None,
        language: str | None = None,
    ) -> dict:
        if not isinstance(text, str) or not text.strip():
            raise IconError("EMPTY_DOCUMENT", "document text must be non-empty")
        document, warnings = ingest_document(
            self.store, text.encode("utf-8"), source, self.analyzer, title, language
        )
        return {
            "id": document.id,
            "title": document.title,
            "language": document.language,
            "warnings": warnings,
        }

    def list_dictionaries(self) -> list[dict]:
        keys = self.store.search("dictionaries", {"key": {"prefix": ""}})
        out = []
        for key in keys:
            doc = json.loads(self.store.get("dictionaries", key).decode("utf-8"))
            out.append(
                {
                    "id": doc["id"],
                    "name": doc["name"],
                    "source_kind": doc["source_kind"],
                    "language": doc.get("language"),
                    "entries": len(doc["entries"]),
                }
            )
        return out

    def search(self, corpus_id: str, query: str, mode: str = "any") -> dict:
        if not corpus_id:
            raise IconError("USAGE_ERROR", "corpus id is required")
        try:
            index = parse_index(self.store.get("indexes", corpus_id))
        except IconError as exc:
            if exc.code == "NOT_FOUND":
                raise IconError("NOT_FOUND", f"no index for corpus {corpus_id!r}")
            raise
        lemmas = analyze_query(query, self.analyzer, mode)
        ranked = query_index(index, lemmas, mode)
        results = []
        for doc_id, score in ranked:
            title = None
            try:
                stored = json.loads(self.store.get("documents", doc_id).decode("utf-8"))
                title = stored.get("title")
            except IconError as exc:
                if exc.code != "NOT_FOUND":
                    raise
            results.append({"doc_id": doc_id, "score": score, "title": title})
        return {
            "corpus_id": corpus_id,
            "query": query,
            "mode": mode,
            "lemmas": lemmas,
            "results": results,
        }
