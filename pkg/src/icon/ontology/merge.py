"""Ontograph merging: left fold with deterministic conflict handling.

Node identity is the lemmatized label, folded through thesaurus synonym
groups when provided. Earlier graphs win label and kind conflicts; duplicate
edges keep the maximum confidence and the union of evidence; any edge that
would introduce an is_a cycle, pair is_a with synonym_of, or loop onto a
unified node is dropped and recorded in the result's notes, so merge output
always passes the consistency check.
"""

from __future__ import annotations

from dataclasses import replace

from .consistency import check_consistency
from .model import Ontograph, Ontology
from ..analysis.concepts import UnionFind
from ..analysis.lemmas import Lemmatizer
from ..analysis.model import Concept, Relation
from ..errors import IconError


def node_identity(label: str, lemmatizer: Lemmatizer | None) -> str:
    if lemmatizer is None:
        return label
    return " ".join(lemmatizer.lemma(word) for word in label.split(" "))


class GraphMerger:
    def __init__(
        self,
        groups: UnionFind | None = None,
        lemmatizer: Lemmatizer | None = None,
    ):
        self._groups = groups
        self._lemmatizer = lemmatizer
        self.nodes: dict[str, Concept] = {}
        self.edges: dict[tuple[str, str, str], Relation] = {}
        self.notes: list[str] = []
        self._isa: dict[str, set[str]] = {}

    def key_for(self, node: Concept) -> str:
        key = node_identity(node.label, self._lemmatizer)
        if self._groups is not None:
            key = self._groups.find(key)
        return key

    def _isa_reaches(self, start: str, goal: str) -> bool:
        frontier = [start]
        seen = {start}
        while frontier:
            node = frontier.pop()
            if node == goal:
                return True
            for nxt in self._isa.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False

    def _absorb_node(self, node: Concept, key: str) -> None:
        if key not in self.nodes:
            self.nodes[key] = replace(
                node,
                id=key,
                synonyms=tuple(sorted(set(node.synonyms) | {node.label})),
            )
            return
        kept = self.nodes[key]
        flags = set(kept.flags) | set(node.flags)
        if node.kind != kept.kind:
            # First graph's kind wins; record that the other was seen.
            flags.add(f"kind_conflict:{node.kind}")
            self.notes.append(
                f"node {key}: kind {node.kind!r} from a later graph ignored"
            )
        self.nodes[key] = replace(
            kept,
            synonyms=tuple(
                sorted(set(kept.synonyms) | set(node.synonyms) | {node.label})
            ),
            provenance=tuple(sorted(set(kept.provenance) | set(node.provenance))),
            flags=tuple(sorted(flags)),
        )

    def _pair_rtypes(self, a: str, b: str) -> set[str]:
        return {
            rtype
            for (source, target, rtype) in self.edges
            if {source, target} == {a, b}
        }

    def _absorb_edge(self, edge: Relation) -> None:
        slot = (edge.source, edge.target, edge.rtype)
        if slot in self.edges:
            kept = self.edges[slot]
            evidence = list(kept.evidence)
            evidence.extend(e for e in edge.evidence if e not in evidence)
            self.edges[slot] = replace(
                kept,
                confidence=max(kept.confidence, edge.confidence),
                evidence=tuple(evidence),
                flags=tuple(sorted(set(kept.flags) | set(edge.flags))),
            )
            return
        pair_rtypes = self._pair_rtypes(edge.source, edge.target)
        if edge.rtype == "is_a":
            if "synonym_of" in pair_rtypes:
                self.notes.append(
                    f"edge {edge.source}->{edge.target}:is_a conflicts with "
                    "synonym_of, dropped"
                )
                return
            if self._isa_reaches(edge.target, edge.source):
                self.notes.append(
                    f"edge {edge.source}->{edge.target}:is_a would close a "
                    "cycle, dropped"
                )
                return
        if edge.rtype == "synonym_of" and "is_a" in pair_rtypes:
            self.notes.append(
                f"edge {edge.source}->{edge.target}:synonym_of conflicts with "
                "is_a, dropped"
            )
            return
        self.edges[slot] = edge
        if edge.rtype == "is_a":
            self._isa.setdefault(edge.source, set()).add(edge.target)

    def absorb(self, graph: Ontograph) -> dict[str, str]:
        """Fold one graph in; returns the input-id to merged-key mapping."""
        keymap: dict[str, str] = {}
        for node_id in sorted(graph.nodes):
            node = graph.nodes[node_id]
            key = self.key_for(node)
            keymap[node_id] = key
            self._absorb_node(node, key)
        for edge in sorted(graph.edges, key=lambda e: (e.source, e.target, e.rtype)):
            source, target = keymap[edge.source], keymap[edge.target]
            if source == target:
                # Relation forbids self-loops, so this must be caught before
                # the remapped edge is even constructed.
                self.notes.append(
                    f"edge {edge.rtype} on {source}: self-loop after "
                    "synonym unification, dropped"
                )
                continue
            self._absorb_edge(replace(edge, source=source, target=target))
        self.notes.extend(graph.notes)
        return keymap

    def result(self, provenance: str) -> Ontograph:
        return Ontograph(
            nodes=dict(sorted(self.nodes.items())),
            edges=[self.edges[slot] for slot in sorted(self.edges)],
            provenance=provenance,
            notes=list(self.notes),
        )


def _require_consistent(graph: Ontograph, name: str) -> None:
    report = check_consistency(graph)
    if not report.consistent:
        raise IconError(
            "INCONSISTENT_INPUT",
            f"{name} fails the consistency check",
            {"findings": [f.to_dict() for f in report.findings]},
        )


def merge_ontographs(
    graphs: list[Ontograph],
    groups: UnionFind | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> Ontograph:
    """Left fold of individually consistent graphs into one merged graph."""
    for position, graph in enumerate(graphs):
        _require_consistent(graph, f"input graph {position}")
    merger = GraphMerger(groups=groups, lemmatizer=lemmatizer)
    for graph in graphs:
        merger.absorb(graph)
    return merger.result("merged")


def _component_count(graph: Ontograph) -> int:
    neighbours: dict[str, set[str]] = {node: set() for node in graph.nodes}
    for edge in graph.edges:
        neighbours[edge.source].add(edge.target)
        neighbours[edge.target].add(edge.source)
    seen: set[str] = set()
    components = 0
    for start in graph.nodes:
        if start in seen:
            continue
        components += 1
        frontier = [start]
        seen.add(start)
        while frontier:
            node = frontier.pop()
            for nxt in neighbours[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return components


def bind_to_initial(
    merged: Ontograph,
    initial: Ontology,
    merged_interpretations: dict | None = None,
    groups: UnionFind | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> Ontology:
    """Bind the merged document graph to the initial ontology.

    The initial ontology is absorbed first, so on any conflict its edges,
    labels and kinds win and the merged graph's contribution is dropped with
    a note. Interpretation lists are unioned without duplicates.
    """
    _require_consistent(initial.graph, "initial ontology graph")
    _require_consistent(merged, "merged graph")
    merger = GraphMerger(groups=groups, lemmatizer=lemmatizer)
    initial_map = merger.absorb(initial.graph)
    merged_map = merger.absorb(merged)
    graph = merger.result("bound")

    interpretations: dict[str, list] = {}
    for keymap, source in (
        (initial_map, initial.interpretations),
        (merged_map, merged_interpretations or {}),
    ):
        for node_id, items in sorted(source.items()):
            key = keymap.get(node_id)
            if key is None or key not in graph.nodes:
                continue
            bucket = interpretations.setdefault(key, [])
            bucket.extend(i for i in items if i not in bucket)

    components = _component_count(graph)
    if components > 1:
        graph.notes.append(f"bound graph has {components} disconnected components")
    return Ontology(graph=graph, interpretations=interpretations, status="draft")
