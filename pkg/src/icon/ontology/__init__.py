"""Ontograph model, consistency checking, merging and verification."""

from .build import (
    CompletenessReport,
    analyze_interpretation_completeness,
    build_document_ontograph,
    fill_interpretations,
    load_initial_ontology,
    verify_ontograph,
)
from .consistency import ConsistencyReport, Finding, check_consistency
from .merge import bind_to_initial, merge_ontographs, node_identity
from .model import (
    Ontograph,
    Ontology,
    export_bytes,
    export_ontology,
    import_ontology,
    ontology_digest,
)

__all__ = [
    "CompletenessReport",
    "ConsistencyReport",
    "Finding",
    "Ontograph",
    "Ontology",
    "analyze_interpretation_completeness",
    "bind_to_initial",
    "build_document_ontograph",
    "check_consistency",
    "export_bytes",
    "export_ontology",
    "fill_interpretations",
    "import_ontology",
    "load_initial_ontology",
    "merge_ontographs",
    "node_identity",
    "ontology_digest",
    "verify_ontograph",
]
