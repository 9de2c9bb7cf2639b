"""Ontograph and ontology containers plus the JSON exchange document."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..analysis.model import Concept, Interpretation, Relation
from ..common import canonical_json, digest_json
from ..errors import IconError

PROVENANCES = ("initial", "document", "merged", "bound")
STATUSES = ("draft", "under_verification", "verified", "rejected")


@dataclass
class Ontograph:
    nodes: dict[str, Concept] = field(default_factory=dict)
    edges: list[Relation] = field(default_factory=list)
    provenance: str = "document"
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise IconError("INVALID_GRAPH", f"unknown provenance {self.provenance!r}")

    def edge_index(self) -> dict[tuple[str, str, str], Relation]:
        return {(e.source, e.target, e.rtype): e for e in self.edges}


@dataclass
class Ontology:
    graph: Ontograph
    interpretations: dict[str, list[Interpretation]] = field(default_factory=dict)
    status: str = "draft"

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise IconError("INVALID_GRAPH", f"unknown status {self.status!r}")

    def prune_interpretations(self) -> None:
        """Drop interpretation keys that no longer name a node."""
        for key in [k for k in self.interpretations if k not in self.graph.nodes]:
            del self.interpretations[key]


def graph_payload(ontology: Ontology) -> dict:
    """The digest-covered portion of the exchange document."""
    return {
        "nodes": {
            node_id: node.to_node()
            for node_id, node in sorted(ontology.graph.nodes.items())
        },
        "edges": [
            e.to_edge()
            for e in sorted(
                ontology.graph.edges, key=lambda e: (e.source, e.target, e.rtype)
            )
        ],
        "interpretations": {
            node_id: [i.to_dict() for i in interps]
            for node_id, interps in sorted(ontology.interpretations.items())
            if interps
        },
    }


def ontology_digest(ontology: Ontology) -> str:
    return digest_json(graph_payload(ontology))


def export_ontology(ontology: Ontology) -> dict:
    """Serialize to the exchange document, digest included."""
    payload = graph_payload(ontology)
    return {
        "digest": digest_json(payload),
        **payload,
        "status": ontology.status,
        "provenance": ontology.graph.provenance,
        "notes": list(ontology.graph.notes),
    }


def export_bytes(ontology: Ontology) -> bytes:
    return canonical_json(export_ontology(ontology))


def import_ontology(doc: dict, verify_digest: bool = True) -> Ontology:
    """Parse an exchange document back into an Ontology.

    The digest is recomputed and must match unless ``verify_digest`` is off;
    edges referencing unknown nodes are rejected here so stored documents can
    be trusted downstream.
    """
    try:
        nodes = {
            node_id: Concept.from_node(node) for node_id, node in doc["nodes"].items()
        }
        edges = [Relation.from_edge(edge) for edge in doc["edges"]]
        interpretations = {
            node_id: [Interpretation(**i) for i in interps]
            for node_id, interps in doc.get("interpretations", {}).items()
        }
        ontology = Ontology(
            graph=Ontograph(
                nodes=nodes,
                edges=edges,
                provenance=doc.get("provenance", "document"),
                notes=list(doc.get("notes", [])),
            ),
            interpretations=interpretations,
            status=doc.get("status", "draft"),
        )
    except (KeyError, TypeError) as exc:
        raise IconError("SCHEMA_VIOLATION", f"malformed ontology document: {exc}")
    for key in interpretations:
        if key not in nodes:
            raise IconError(
                "SCHEMA_VIOLATION", f"interpretations reference unknown node {key!r}"
            )
    if verify_digest and doc.get("digest") != ontology_digest(ontology):
        raise IconError(
            "DIGEST_MISMATCH",
            "ontology document digest does not match its contents",
        )
    return ontology
