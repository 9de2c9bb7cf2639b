"""Component registry and system integrity checks.

Every module of the workbench is described by a declarative manifest: its
tier, the interfaces it provides, the interfaces it requires and the
catalogue functions it claims. The integrity predicate holds when all
required interfaces resolve, no dependency skips a tier, and the shipped
function catalogue is covered exactly once. Services refuse to start when
the predicate fails.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import IconError

CATALOGUE_SIZE = 31


class Tier(enum.Enum):
    PRESENTATION = "presentation"
    LOGIC = "logic"
    DATA = "data"

    @property
    def depth(self) -> int:
        return _TIER_DEPTH[self]


_TIER_DEPTH = {Tier.PRESENTATION: 0, Tier.LOGIC: 1, Tier.DATA: 2}


@dataclass(frozen=True)
class ComponentManifest:
    """Declared shape of one system component."""

    name: str
    tier: Tier
    provided: frozenset[str]
    required: frozenset[str]
    functions: frozenset[str]

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise IconError("MALFORMED_MANIFEST", "component name must be non-empty")
        overlap = self.provided & self.required
        if overlap:
            raise IconError(
                "MALFORMED_MANIFEST",
                f"{self.name}: interfaces both provided and required",
                {"interfaces": sorted(overlap)},
            )

    @classmethod
    def from_dict(cls, doc: dict) -> "ComponentManifest":
        try:
            tier = Tier(doc["tier"])
        except (KeyError, ValueError):
            raise IconError(
                "MALFORMED_MANIFEST",
                f"tier must be one of {[t.value for t in Tier]}",
                {"doc": doc},
            )
        missing = {"name", "provided", "required", "functions"} - set(doc)
        if missing:
            raise IconError(
                "MALFORMED_MANIFEST", f"missing fields: {sorted(missing)}", {"doc": doc}
            )
        return cls(
            name=doc["name"],
            tier=tier,
            provided=frozenset(doc["provided"]),
            required=frozenset(doc["required"]),
            functions=frozenset(doc["functions"]),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tier": self.tier.value,
            "provided": sorted(self.provided),
            "required": sorted(self.required),
            "functions": sorted(self.functions, key=_function_order),
        }


def _function_order(fid: str) -> tuple:
    # Sort S2 before S10; fall back to plain string order for foreign ids.
    if fid.startswith("S") and fid[1:].isdigit():
        return (0, int(fid[1:]))
    return (1, fid)


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "subject": self.subject, "detail": self.detail}


@dataclass
class IntegrityReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": list(self.warnings),
        }

    def merged_with(self, other: "IntegrityReport") -> "IntegrityReport":
        return IntegrityReport(
            violations=self.violations + other.violations,
            warnings=self.warnings + other.warnings,
        )


class ComponentRegistry:
    """Name-keyed collection of component manifests.

    Built once at startup and treated as immutable afterwards, so concurrent
    readers need no locking.
    """

    def __init__(self, manifests: list[ComponentManifest] | None = None):
        self._by_name: dict[str, ComponentManifest] = {}
        for manifest in manifests or []:
            self.register(manifest)

    def register(self, manifest: ComponentManifest) -> "ComponentRegistry":
        # Replace-by-name: re-registering updates the prior entry.
        self._by_name[manifest.name] = manifest
        return self

    def remove(self, name: str) -> "ComponentRegistry":
        self._by_name.pop(name, None)
        return self

    def get(self, name: str) -> ComponentManifest:
        try:
            return self._by_name[name]
        except KeyError:
            raise IconError("NOT_FOUND", f"no component named {name!r}")

    def components(self) -> list[ComponentManifest]:
        return [self._by_name[name] for name in sorted(self._by_name)]

    def __len__(self) -> int:
        return len(self._by_name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name


@dataclass
class CatalogueEntry:
    description: str
    module: str


@dataclass
class FunctionCatalogue:
    """The fixed list of system functions that components claim."""

    entries: dict[str, CatalogueEntry]

    def __post_init__(self) -> None:
        for fid, entry in self.entries.items():
            if not entry.module.strip():
                raise IconError(
                    "MALFORMED_MANIFEST", f"catalogue entry {fid} has no owning module"
                )

    @classmethod
    def from_dict(cls, doc: dict) -> "FunctionCatalogue":
        return cls(
            entries={
                fid: CatalogueEntry(description=e["description"], module=e["module"])
                for fid, e in doc["functions"].items()
            }
        )

    def ids(self) -> list[str]:
        return sorted(self.entries, key=_function_order)


def validate_integrity(registry: ComponentRegistry) -> IntegrityReport:
    """Check interface resolution and tier layering across the registry.

    Adjacent tiers may depend on each other in either direction; a dependency
    that would skip the logic tier entirely (presentation on data or the
    reverse) is a violation even when the interface itself resolves.
    """
    report = IntegrityReport()
    components = registry.components()
    if not components:
        report.warnings.append("empty registry")
        return report

    providers: dict[str, list[ComponentManifest]] = {}
    for component in components:
        for iface in component.provided:
            providers.setdefault(iface, []).append(component)

    for component in components:
        for iface in sorted(component.required):
            offering = providers.get(iface, [])
            if not offering:
                report.violations.append(
                    Violation(
                        kind="UNRESOLVED_REQUIREMENT",
                        subject=component.name,
                        detail=f"interface {iface} has no provider",
                    )
                )
                continue
            reachable = [
                p for p in offering if abs(p.tier.depth - component.tier.depth) <= 1
            ]
            if not reachable:
                tiers = sorted({p.tier.value for p in offering})
                report.violations.append(
                    Violation(
                        kind="LAYERING_VIOLATION",
                        subject=component.name,
                        detail=(
                            f"interface {iface} is only provided at non-adjacent "
                            f"tier(s) {tiers}"
                        ),
                    )
                )
    report.violations.sort(key=lambda v: (v.kind, v.subject, v.detail))
    return report


def compose_function_map(
    registry: ComponentRegistry, catalogue: FunctionCatalogue
) -> IntegrityReport:
    """Check that components cover the catalogue exactly once each."""
    report = IntegrityReport()
    claims: dict[str, list[str]] = {}
    for component in registry.components():
        for fid in component.functions:
            claims.setdefault(fid, []).append(component.name)

    for fid in catalogue.ids():
        owners = claims.get(fid, [])
        if not owners:
            report.violations.append(
                Violation(
                    kind="UNMAPPED_FUNCTION",
                    subject=fid,
                    detail="no component claims this function",
                )
            )
        elif len(owners) > 1:
            report.violations.append(
                Violation(
                    kind="DUPLICATE_FUNCTION",
                    subject=fid,
                    detail=f"claimed by {sorted(owners)}",
                )
            )
    foreign = sorted(set(claims) - set(catalogue.entries), key=_function_order)
    for fid in foreign:
        report.warnings.append(f"function {fid} is claimed but not in the catalogue")
    report.violations.sort(key=lambda v: (v.kind, _function_order(v.subject)))
    return report


def verify_system(
    registry: ComponentRegistry, catalogue: FunctionCatalogue
) -> IntegrityReport:
    """The full startup integrity predicate."""
    return validate_integrity(registry).merged_with(
        compose_function_map(registry, catalogue)
    )


def _data_dir():
    return resources.files(__package__) / "data"


def load_component_manifests(path: str | Path | None = None) -> list[ComponentManifest]:
    """Load the shipped component manifests, or all *.json under ``path``."""
    manifests = []
    if path is not None:
        files = sorted(Path(path).glob("*.json"))
        docs = [json.loads(p.read_text(encoding="utf-8")) for p in files]
    else:
        docs = []
        for entry in sorted(_data_dir().iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".json") and entry.name != "catalogue.json":
                docs.append(json.loads(entry.read_text(encoding="utf-8")))
    for doc in docs:
        if "functions" in doc and "tier" in doc:
            manifests.append(ComponentManifest.from_dict(doc))
    return manifests


def load_registry() -> ComponentRegistry:
    return ComponentRegistry(load_component_manifests())


def load_catalogue() -> FunctionCatalogue:
    doc = json.loads((_data_dir() / "catalogue.json").read_text(encoding="utf-8"))
    catalogue = FunctionCatalogue.from_dict(doc)
    if len(catalogue.entries) != CATALOGUE_SIZE:
        raise IconError(
            "MALFORMED_MANIFEST",
            f"shipped catalogue must have exactly {CATALOGUE_SIZE} entries, "
            f"found {len(catalogue.entries)}",
        )
    return catalogue
