"""Independent reference implementations used to cross-check the package.

Everything here is written from the documented behavior, not from the
package internals: linear-scan search, direct tf-idf and recursive C-value
formulas, brute-force cycle enumeration, and a plain predicate evaluator for
store criteria. Test modules compare package output against these.

Also hosts the randomized input builders (corpora, ontographs) shared by the
unit tests and the acceptance suite.
"""

from __future__ import annotations

import math
import random

from icon.analysis.model import Concept, Relation
from icon.ontology.model import Ontograph

# --------------------------------------------------------------- index search

Positions = dict[str, list[tuple[str, int]]]  # doc_id -> [(lemma, position)]


def scan_search(docs: Positions, lemmas: list[str], mode: str) -> list[tuple[str, float]]:
    """Linear-scan search over tokenized documents, scored like the index.

    Score is the sum over distinct query lemmas of tf * ln(N / df); ranking
    is score descending with ties broken by ascending doc id.
    """
    doc_count = len(docs)
    distinct = sorted(set(lemmas))

    def tf(doc_id: str, lemma: str) -> int:
        return sum(1 for lem, _ in docs[doc_id] if lem == lemma)

    df = {
        lemma: sum(1 for doc_id in docs if tf(doc_id, lemma) > 0)
        for lemma in distinct
    }

    matched = []
    for doc_id in docs:
        present = [lemma for lemma in distinct if tf(doc_id, lemma) > 0]
        if mode == "any":
            hit = bool(present)
        elif mode == "all":
            hit = len(present) == len(distinct)
        else:
            hit = _scan_phrase(docs[doc_id], lemmas)
        if hit:
            matched.append(doc_id)

    scored = []
    for doc_id in matched:
        score = 0.0
        for lemma in distinct:
            if df[lemma]:
                score += tf(doc_id, lemma) * math.log(doc_count / df[lemma])
        scored.append((doc_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def _scan_phrase(tokens: list[tuple[str, int]], lemmas: list[str]) -> bool:
    at = {pos: lem for lem, pos in tokens}
    for lem, pos in tokens:
        if lem != lemmas[0]:
            continue
        if all(at.get(pos + o) == lemmas[o] for o in range(1, len(lemmas))):
            return True
    return False


# ------------------------------------------------------------------- term math


def tfidf_reference(tf: int, df: int, doc_count: int) -> float:
    return tf * math.log(doc_count / df)


def cvalue_reference(frequencies: dict[tuple[str, ...], int]) -> dict[tuple[str, ...], float]:
    """C-values by the direct recursive definition.

    t(a) sums f(b) - t(b) over the distinct longer candidates b containing a;
    maximal candidates have t = 0. C-value is log2(|a|) * f(a) when nothing
    contains a, otherwise log2(|a|) * (f(a) - t(a) / count of containers).
    """

    def contains(big: tuple[str, ...], small: tuple[str, ...]) -> bool:
        return any(
            big[i : i + len(small)] == small
            for i in range(len(big) - len(small) + 1)
        )

    containers = {
        a: [b for b in frequencies if len(b) > len(a) and contains(b, a)]
        for a in frequencies
    }

    nested: dict[tuple[str, ...], float] = {}

    def t(a: tuple[str, ...]) -> float:
        if a not in nested:
            nested[a] = sum(frequencies[b] - t(b) for b in containers[a])
        return nested[a]

    out = {}
    for a, freq in frequencies.items():
        base = math.log2(len(a))
        if containers[a]:
            out[a] = base * (freq - t(a) / len(containers[a]))
        else:
            out[a] = base * freq
    return out


def count_ngram(runs: list[list[str]], ngram: tuple[str, ...]) -> int:
    """Occurrences of the lemma tuple as a contiguous window in word runs."""
    n = len(ngram)
    return sum(
        1
        for run in runs
        for start in range(len(run) - n + 1)
        if tuple(run[start : start + n]) == ngram
    )


def word_runs(sentences) -> list[list[str]]:
    """Lemma runs of consecutive word tokens; broken by anything else."""
    runs: list[list[str]] = []
    for sentence in sentences:
        current: list[str] = []
        for token in sentence:
            if token.kind == "word":
                current.append(token.lemma)
            elif current:
                runs.append(current)
                current = []
        if current:
            runs.append(current)
    return runs


# ------------------------------------------------------------------ PMI


def pmi_reference(n_ab: int, n_a: int, n_b: int, sentence_count: int) -> float:
    return math.log((n_ab * sentence_count) / (n_a * n_b))


# --------------------------------------------------------------------- cycles


def cycle_nodes(nodes: set[str], isa_edges: list[tuple[str, str]]) -> set[str]:
    """Every node lying on some is_a cycle, by per-node depth-first search."""
    adjacency: dict[str, list[str]] = {node: [] for node in nodes}
    for source, target in isa_edges:
        if source in nodes and target in nodes:
            adjacency[source].append(target)

    def reaches(start: str, goal: str) -> bool:
        frontier, seen = list(adjacency[start]), set()
        while frontier:
            node = frontier.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            frontier.extend(adjacency[node])
        return False

    return {node for node in nodes if reaches(node, node)}


# ----------------------------------------------------------- store criteria


def criteria_match(fields: dict, crit: dict) -> bool:
    """Plain evaluation of a criteria document against a record's fields."""
    for name, predicate in crit.items():
        if not isinstance(predicate, dict):
            predicate = {"eq": predicate}
        value = fields.get(name)
        if value is None:
            return False
        for op, operand in predicate.items():
            if op == "eq":
                ok = type(value) is type(operand) and value == operand or (
                    isinstance(value, (int, float))
                    and isinstance(operand, (int, float))
                    and not isinstance(value, bool)
                    and not isinstance(operand, bool)
                    and value == operand
                )
            elif op == "contains":
                if isinstance(value, list):
                    ok = operand in value
                else:
                    ok = (
                        isinstance(value, str)
                        and isinstance(operand, str)
                        and operand.casefold() in value.casefold()
                    )
            elif op == "prefix":
                ok = (
                    isinstance(value, str)
                    and isinstance(operand, str)
                    and value.casefold().startswith(operand.casefold())
                )
            elif op in ("gte", "lte"):
                comparable = (
                    isinstance(value, (int, float))
                    and isinstance(operand, (int, float))
                    and not isinstance(value, bool)
                    and not isinstance(operand, bool)
                ) or (isinstance(value, str) and isinstance(operand, str))
                ok = comparable and (value >= operand if op == "gte" else value <= operand)
            else:
                raise ValueError(f"oracle cannot evaluate operator {op!r}")
            if not ok:
                return False
    return True


# ------------------------------------------------------------------ builders

TITLE_WORDS = ["онтология", "корпус", "граф", "индекс", "словарь", "анализ", "поиск"]
SOURCES = ["upload", "crawler", "mail", "feed"]


def random_document_record(rng: random.Random, i: int) -> dict:
    """A valid record for the documents segment, with varied field values."""
    return {
        "id": f"d{i:04d}",
        "source": rng.choice(SOURCES) + f"-{rng.randint(0, 9)}",
        "title": " ".join(rng.choice(TITLE_WORDS) for _ in range(rng.randint(1, 4))),
        "language": rng.choice(["ru", "uk"]),
        "text": " ".join(random_words(rng, rng.randint(1, 12))),
        "ingested_at": f"2026-0{rng.randint(1, 8)}-{rng.randint(10, 28)}T00:00:00.000Z",
    }


def random_criteria(rng: random.Random, records: dict[str, dict]) -> dict:
    """A valid criteria document for the documents segment.

    Operands are drawn from stored values (sliced for substring operators) or
    invented, so queries land on a mix of hits and misses.
    """
    crit: dict = {}
    for _ in range(rng.randint(1, 3)):
        field = rng.choice(["key", "id", "source", "title", "language", "ingested_at"])
        record = rng.choice(list(records.values()))
        value = record["id"] if field == "key" else record[field]
        op = rng.choice(["eq", "contains", "prefix", "gte", "lte"])
        if op in ("contains", "prefix") and rng.random() < 0.7:
            cut = rng.randint(1, len(value))
            operand = value[:cut] if op == "prefix" else value[cut - 1 :]
        elif rng.random() < 0.6:
            operand = value
        else:
            operand = rng.choice(["онто", "zzz", "upload", "2026", "d0"])
        crit[field] = {op: operand}
    return crit


CYRILLIC_STEMS = [
    "граф", "узел", "связь", "поиск", "индекс", "корпус", "текст", "слово",
    "модель", "схема", "запрос", "ответ", "сервер", "клиент", "поток",
    "массив", "список", "журнал", "проект", "раздел",
]


def random_words(rng: random.Random, count: int) -> list[str]:
    return [rng.choice(CYRILLIC_STEMS) for _ in range(count)]


def random_corpus(rng: random.Random, max_docs: int = 50, max_tokens: int = 200) -> dict[str, str]:
    """Random document texts with punctuation and the odd numeric token."""
    docs = {}
    for i in range(rng.randint(1, max_docs)):
        words = []
        for _ in range(rng.randint(1, max_tokens)):
            roll = rng.random()
            if roll < 0.04:
                words.append(str(rng.randint(0, 2013)))
            elif roll < 0.10 and words:
                words[-1] += rng.choice([",", "."])
                continue
            words.append(rng.choice(CYRILLIC_STEMS))
        docs[f"doc{i:03d}"] = " ".join(words)
    return docs


def random_ontograph(
    rng: random.Random,
    labels: list[str],
    max_nodes: int = 12,
    acyclic: bool = True,
    provenance: str = "document",
) -> Ontograph:
    """A random ontograph over the given label pool.

    With ``acyclic`` the is_a edges follow a random topological order and no
    pair carries both is_a and synonym_of, so the graph always passes the
    consistency check. Without it, edges point anywhere.
    """
    chosen = rng.sample(labels, rng.randint(2, min(max_nodes, len(labels))))
    order = {label: i for i, label in enumerate(chosen)}
    nodes = {
        label: Concept(
            id=label,
            label=label,
            synonyms=(label,),
            kind=rng.choice(("object", "process")),
            provenance=(label,),
        )
        for label in chosen
    }
    edges = []
    seen: set[tuple[str, str, str]] = set()
    pair_rtypes: dict[tuple[str, str], set[str]] = {}
    conflicts = {"is_a": "synonym_of", "synonym_of": "is_a"}
    for _ in range(rng.randint(0, 2 * len(chosen))):
        source, target = rng.sample(chosen, 2)
        rtype = rng.choice(("is_a", "part_of", "synonym_of", "associated_with"))
        if acyclic and rtype == "is_a" and order[source] > order[target]:
            source, target = target, source
        if (source, target, rtype) in seen:
            continue
        taken = pair_rtypes.setdefault(tuple(sorted((source, target))), set())
        if acyclic and conflicts.get(rtype) in taken:
            continue
        seen.add((source, target, rtype))
        taken.add(rtype)
        edges.append(
            Relation(
                source=source,
                target=target,
                rtype=rtype,
                confidence=round(rng.uniform(0.1, 1.0), 3),
            )
        )
    return Ontograph(nodes=nodes, edges=edges, provenance=provenance)


def graphs_equivalent(a: Ontograph, b: Ontograph) -> bool:
    """Same nodes (by content) and same edges (by content); notes ignored."""
    if sorted(a.nodes) != sorted(b.nodes):
        return False
    for key in a.nodes:
        if a.nodes[key].to_node() != b.nodes[key].to_node():
            return False
    index_a = {k: e.to_edge() for k, e in a.edge_index().items()}
    index_b = {k: e.to_edge() for k, e in b.edge_index().items()}
    return index_a == index_b
