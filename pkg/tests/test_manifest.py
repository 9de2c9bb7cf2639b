"""Component registry, tier layering, and function coverage checks."""

from __future__ import annotations

import dataclasses
import json

import pytest

from icon.errors import IconError
from icon.manifest import (
    CATALOGUE_SIZE,
    ComponentManifest,
    ComponentRegistry,
    FunctionCatalogue,
    Tier,
    compose_function_map,
    load_catalogue,
    load_component_manifests,
    load_registry,
    validate_integrity,
    verify_system,
)

EXPECTED_COMPONENTS = {
    "control-shell": Tier.PRESENTATION,
    "datastore": Tier.DATA,
    "doc-acquisition": Tier.LOGIC,
    "indexing": Tier.LOGIC,
    "library-manager": Tier.LOGIC,
    "ling-analysis": Tier.LOGIC,
    "ontology-builder": Tier.LOGIC,
    "visual-design": Tier.LOGIC,
}


def manifest(name, tier, provided=(), required=(), functions=()):
    return ComponentManifest(
        name=name,
        tier=tier,
        provided=frozenset(provided),
        required=frozenset(required),
        functions=frozenset(functions),
    )


class TestShippedRegistry:
    def test_eight_components_with_expected_tiers(self):
        registry = load_registry()
        by_name = {m.name: m.tier for m in registry.components()}
        assert by_name == EXPECTED_COMPONENTS

    def test_shipped_set_is_valid(self):
        report = verify_system(load_registry(), load_catalogue())
        assert report.valid
        assert report.violations == []

    def test_catalogue_has_exactly_31_sequential_functions(self):
        catalogue = load_catalogue()
        assert catalogue.ids() == [f"S{i}" for i in range(1, CATALOGUE_SIZE + 1)]

    def test_manifest_functions_partition_the_catalogue(self):
        claimed: list[str] = []
        for component in load_registry().components():
            claimed.extend(component.functions)
        assert sorted(claimed, key=lambda f: int(f[1:])) == load_catalogue().ids()
        assert len(claimed) == len(set(claimed))


class TestRemovedDatastore:
    """Dropping the data-tier component must surface both failure kinds."""

    @pytest.fixture()
    def report(self):
        registry = load_registry()
        registry.remove("datastore")
        return verify_system(registry, load_catalogue())

    def test_requirement_no_longer_resolves(self, report):
        unresolved = [v for v in report.violations if v.kind == "UNRESOLVED_REQUIREMENT"]
        assert [(v.subject, v.detail) for v in unresolved] == [
            ("library-manager", "interface kv.store has no provider")
        ]

    def test_datastore_functions_become_unmapped(self, report):
        unmapped = sorted(
            v.subject for v in report.violations if v.kind == "UNMAPPED_FUNCTION"
        )
        assert unmapped == ["S25", "S26", "S27", "S28", "S29", "S30", "S31"]

    def test_no_other_violation_kinds(self, report):
        kinds = {v.kind for v in report.violations}
        assert kinds == {"UNRESOLVED_REQUIREMENT", "UNMAPPED_FUNCTION"}


class TestLayering:
    def test_presentation_requiring_data_interface_is_flagged(self):
        registry = load_registry()
        shell = registry.get("control-shell")
        registry.register(
            dataclasses.replace(shell, required=shell.required | {"kv.store"})
        )
        report = validate_integrity(registry)
        assert [v.kind for v in report.violations] == ["LAYERING_VIOLATION"]
        assert report.violations[0].subject == "control-shell"
        assert "kv.store" in report.violations[0].detail

    def test_data_requiring_presentation_interface_is_flagged(self):
        registry = load_registry()
        store = registry.get("datastore")
        registry.register(
            dataclasses.replace(store, required=store.required | {"ui.shell"})
        )
        report = validate_integrity(registry)
        assert [v.kind for v in report.violations] == ["LAYERING_VIOLATION"]
        assert report.violations[0].subject == "datastore"

    def test_adjacent_tiers_may_depend_both_ways(self):
        registry = ComponentRegistry(
            [
                manifest("ui", Tier.PRESENTATION, provided=["ui"], required=["svc"]),
                manifest("svc", Tier.LOGIC, provided=["svc"], required=["ui", "kv"]),
                manifest("kv", Tier.DATA, provided=["kv"], required=["svc"]),
            ]
        )
        assert validate_integrity(registry).valid

    def test_layering_reported_even_when_interface_resolves(self):
        # A data-tier provider exists, so the requirement resolves, but
        # presentation still may not reach across the logic tier.
        registry = ComponentRegistry(
            [
                manifest("ui", Tier.PRESENTATION, provided=["ui"], required=["kv"]),
                manifest("kv", Tier.DATA, provided=["kv"]),
            ]
        )
        report = validate_integrity(registry)
        assert [v.kind for v in report.violations] == ["LAYERING_VIOLATION"]


class TestFunctionMap:
    def test_duplicate_claim_is_flagged(self):
        registry = load_registry()
        indexing = registry.get("indexing")
        registry.register(
            dataclasses.replace(indexing, functions=indexing.functions | {"S10"})
        )
        report = compose_function_map(registry, load_catalogue())
        assert [(v.kind, v.subject) for v in report.violations] == [
            ("DUPLICATE_FUNCTION", "S10")
        ]
        assert "indexing" in report.violations[0].detail
        assert "ling-analysis" in report.violations[0].detail

    def test_foreign_function_is_a_warning_not_a_violation(self):
        registry = load_registry()
        indexing = registry.get("indexing")
        registry.register(
            dataclasses.replace(indexing, functions=indexing.functions | {"S99"})
        )
        report = compose_function_map(registry, load_catalogue())
        assert report.valid
        assert any("S99" in w for w in report.warnings)

    def test_violations_sorted_by_function_number(self):
        registry = load_registry()
        registry.remove("datastore")
        report = compose_function_map(registry, load_catalogue())
        subjects = [v.subject for v in report.violations]
        assert subjects == sorted(subjects, key=lambda f: int(f[1:]))


class TestManifestShape:
    def test_empty_name_rejected(self):
        with pytest.raises(IconError) as err:
            manifest("  ", Tier.LOGIC)
        assert err.value.code == "MALFORMED_MANIFEST"

    def test_provided_required_overlap_rejected(self):
        with pytest.raises(IconError) as err:
            manifest("x", Tier.LOGIC, provided=["a"], required=["a"])
        assert err.value.code == "MALFORMED_MANIFEST"

    def test_from_dict_rejects_unknown_tier(self):
        with pytest.raises(IconError) as err:
            ComponentManifest.from_dict(
                {"name": "x", "tier": "middleware", "provided": [], "required": [], "functions": []}
            )
        assert err.value.code == "MALFORMED_MANIFEST"

    def test_from_dict_rejects_missing_fields(self):
        with pytest.raises(IconError) as err:
            ComponentManifest.from_dict({"name": "x", "tier": "logic"})
        assert err.value.code == "MALFORMED_MANIFEST"

    def test_round_trip_through_dict(self):
        original = load_registry().get("ontology-builder")
        assert ComponentManifest.from_dict(original.to_dict()) == original

    def test_catalogue_entry_requires_owner(self):
        with pytest.raises(IconError) as err:
            FunctionCatalogue.from_dict(
                {"functions": {"S1": {"description": "x", "module": "  "}}}
            )
        assert err.value.code == "MALFORMED_MANIFEST"


class TestRegistryOps:
    def test_register_replaces_by_name(self):
        registry = ComponentRegistry()
        registry.register(manifest("a", Tier.LOGIC, provided=["x"]))
        registry.register(manifest("a", Tier.DATA, provided=["y"]))
        assert len(registry) == 1
        assert registry.get("a").tier is Tier.DATA

    def test_get_unknown_component(self):
        with pytest.raises(IconError) as err:
            ComponentRegistry().get("ghost")
        assert err.value.code == "NOT_FOUND"

    def test_contains_and_remove(self):
        registry = ComponentRegistry([manifest("a", Tier.LOGIC)])
        assert "a" in registry
        registry.remove("a")
        assert "a" not in registry
        registry.remove("a")  # removing twice is harmless

    def test_empty_registry_warns_instead_of_failing(self):
        report = validate_integrity(ComponentRegistry())
        assert report.valid
        assert report.warnings == ["empty registry"]

    def test_load_component_manifests_from_directory(self, tmp_path):
        source = load_registry().get("indexing").to_dict()
        (tmp_path / "indexing.json").write_text(json.dumps(source), encoding="utf-8")
        loaded = load_component_manifests(tmp_path)
        assert [m.name for m in loaded] == ["indexing"]
        assert loaded[0] == load_registry().get("indexing")
