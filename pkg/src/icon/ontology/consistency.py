"""Ontograph consistency: cycles in is_a, dangling edges, synonym conflicts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Ontograph


@dataclass(frozen=True)
class Finding:
    kind: str  # ISA_CYCLE | MUTUAL_ISA | DANGLING_EDGE | SYNONYM_ISA_CONFLICT
    refs: tuple[str, ...]
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "refs": list(self.refs), "detail": self.detail}


@dataclass
class ConsistencyReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.findings

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "findings": [f.to_dict() for f in self.findings],
        }


def _edge_ref(edge) -> str:
    return f"{edge.source}->{edge.target}:{edge.rtype}"


def strongly_connected_components(adjacency: dict[str, list[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative so deep chains cannot overflow."""
    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in sorted(adjacency):
        if root in index_of:
            continue
        work = [(root, iter(adjacency[root]))]
        index_of[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, successors = work[-1]
            advanced = False
            for successor in successors:
                if successor not in index_of:
                    index_of[successor] = low[successor] = counter
                    counter += 1
                    stack.append(successor)
                    on_stack.add(successor)
                    work.append((successor, iter(adjacency.get(successor, []))))
                    advanced = True
                    break
                if successor in on_stack:
                    low[node] = min(low[node], index_of[successor])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))
    return components


def check_consistency(graph: Ontograph) -> ConsistencyReport:
    report = ConsistencyReport()

    for edge in graph.edges:
        missing = [n for n in (edge.source, edge.target) if n not in graph.nodes]
        if missing:
            report.findings.append(
                Finding(
                    kind="DANGLING_EDGE",
                    refs=(_edge_ref(edge),),
                    detail=f"endpoint(s) {missing} not in graph",
                )
            )

    adjacency: dict[str, list[str]] = {node: [] for node in graph.nodes}
    for edge in graph.edges:
        if edge.rtype == "is_a" and edge.source in graph.nodes and edge.target in graph.nodes:
            adjacency[edge.source].append(edge.target)
    for component in strongly_connected_components(adjacency):
        if len(component) == 2:
            report.findings.append(
                Finding(
                    kind="MUTUAL_ISA",
                    refs=tuple(component),
                    detail="two concepts subsume each other",
                )
            )
        elif len(component) > 2:
            report.findings.append(
                Finding(
                    kind="ISA_CYCLE",
                    refs=tuple(component),
                    detail=f"is_a cycle through {len(component)} concepts",
                )
            )

    by_pair: dict[tuple[str, str], set[str]] = {}
    for edge in graph.edges:
        pair = tuple(sorted((edge.source, edge.target)))
        by_pair.setdefault(pair, set()).add(edge.rtype)
    for pair, rtypes in sorted(by_pair.items()):
        if "synonym_of" in rtypes and "is_a" in rtypes:
            report.findings.append(
                Finding(
                    kind="SYNONYM_ISA_CONFLICT",
                    refs=pair,
                    detail="pair related by both synonym_of and is_a",
                )
            )

    report.findings.sort(key=lambda f: (f.kind, f.refs))
    return report
