"""Ontology assembly steps around the merge core, plus verification."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .consistency import check_consistency
from .model import Ontograph, Ontology, ontology_digest
from ..analysis.concepts import lookup_interpretations
from ..analysis.model import Concept, Dictionary, Relation, Term
from ..common import utc_now
from ..errors import IconError


def build_document_ontograph(
    doc_id: str,
    concepts: list[Concept],
    relations: list[Relation],
    terms: list[Term],
    known_doc_ids: set[str] | None = None,
) -> Ontograph:
    """Restrict corpus-level concepts and relations to one document.

    A concept stays when any of its source terms occurs in the document; a
    relation stays when it has evidence there and both endpoints stayed, and
    it keeps only that document's evidence.
    """
    if known_doc_ids is not None and doc_id not in known_doc_ids:
        raise IconError("UNKNOWN_DOCUMENT", f"document {doc_id!r} is not in the corpus")
    docs_by_term: dict[str, set[str]] = {}
    for term in terms:
        docs_by_term[term.lemma_key] = {occ_doc for occ_doc, _ in term.occurrences}

    nodes: dict[str, Concept] = {}
    for concept in concepts:
        source_keys = concept.provenance or concept.synonyms
        if any(doc_id in docs_by_term.get(key, ()) for key in source_keys):
            nodes[concept.id] = concept

    edges = []
    notes: list[str] = []
    for relation in relations:
        local = tuple(e for e in relation.evidence if e.doc_id == doc_id)
        if not local:
            continue
        if relation.source not in nodes or relation.target not in nodes:
            notes.append(
                f"relation {relation.source}->{relation.target}:{relation.rtype} "
                f"evidenced in {doc_id} but an endpoint concept does not occur there"
            )
            continue
        edges.append(replace(relation, evidence=local))
    return Ontograph(nodes=nodes, edges=edges, provenance="document", notes=notes)


def fill_interpretations(
    ontology: Ontology, dictionaries: list[Dictionary]
) -> list[tuple[str, str]]:
    """Look up definitions for nodes lacking any; returns (node, dict) fills."""
    filled: list[tuple[str, str]] = []
    for node_id in sorted(ontology.graph.nodes):
        if ontology.interpretations.get(node_id):
            continue
        node = ontology.graph.nodes[node_id]
        lookup_order = [node.label] + [s for s in sorted(node.synonyms) if s != node.label]
        hits = lookup_interpretations(lookup_order, dictionaries)
        if hits:
            ontology.interpretations[node_id] = list(hits)
            filled.extend((node_id, dictionary_id) for dictionary_id in sorted({h.dictionary_id for h in hits}))
    return filled


def load_initial_ontology(
    store, project_id: str, dictionaries: list[Dictionary]
) -> Ontology:
    """Load the project's initial ontograph and attach dictionary definitions."""
    from .model import import_ontology

    try:
        raw = store.get("ontologies", f"{project_id}:initial")
    except IconError as exc:
        if exc.code == "NOT_FOUND":
            raise IconError(
                "NO_INITIAL_ONTOLOGY",
                f"project {project_id} has no stored initial ontology",
            )
        raise
    import json

    ontology = import_ontology(json.loads(raw.decode("utf-8")))
    ontology.graph.provenance = "initial"
    ontology.status = "draft"
    fill_interpretations(ontology, dictionaries)
    ontology.prune_interpretations()
    return ontology


@dataclass
class CompletenessReport:
    missing: list[str] = field(default_factory=list)
    filled: list[tuple[str, str]] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "missing": list(self.missing),
            "filled": [list(pair) for pair in self.filled],
            "unresolved": list(self.unresolved),
        }


def analyze_interpretation_completeness(
    ontology: Ontology, dictionaries: list[Dictionary]
) -> CompletenessReport:
    """Fill interpretation gaps from the dictionaries, reporting the outcome.

    ``filled`` lists this run's additions; ``unresolved`` the nodes found in
    no dictionary; ``missing`` the nodes still lacking a definition after the
    pass (so it never overlaps with ``filled``).
    """
    report = CompletenessReport()
    report.filled = fill_interpretations(ontology, dictionaries)
    filled_ids = {node_id for node_id, _ in report.filled}
    for node_id in sorted(ontology.graph.nodes):
        if not ontology.interpretations.get(node_id):
            report.missing.append(node_id)
            if node_id not in filled_ids:
                report.unresolved.append(node_id)
    return report


def verify_ontograph(
    ontology: Ontology, verdict: str, actor: str, comment: str = ""
) -> tuple[Ontology, dict]:
    """Apply a human verification verdict; returns the audit record to log."""
    if verdict not in ("approve", "reject"):
        raise IconError("USAGE_ERROR", f"verdict must be approve or reject, got {verdict!r}")
    if ontology.status != "under_verification":
        raise IconError(
            "INVALID_STATE",
            f"ontology status is {ontology.status!r}, expected under_verification",
        )
    if verdict == "approve":
        report = check_consistency(ontology.graph)
        if not report.consistent:
            raise IconError(
                "VERIFICATION_BLOCKED",
                "cannot approve an inconsistent ontograph",
                {"findings": [f.to_dict() for f in report.findings]},
            )
        ontology.status = "verified"
    else:
        ontology.status = "rejected"
    audit = {
        "ts": utc_now(),
        "actor": actor,
        "verdict": verdict,
        "comment": comment,
        "digest": ontology_digest(ontology),
    }
    return ontology, audit
