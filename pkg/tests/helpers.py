"""Builders shared across the test suite."""

from __future__ import annotations

import json

from optdeps import Registry, RootManifest, load_manifest, load_registry

DepSpec = tuple[str, str]


def registry_doc(packages: dict[str, dict[str, list[DepSpec]]]) -> str:
    return json.dumps(
        {
            "packages": {
                name: {
                    version: {"dependencies": [list(dep) for dep in deps]}
                    for version, deps in versions.items()
                }
                for name, versions in packages.items()
            }
        }
    )


def manifest_doc(deps: list[DepSpec], name: str = "app") -> str:
    return json.dumps({"name": name, "dependencies": [list(dep) for dep in deps]})


def make_registry(packages: dict[str, dict[str, list[DepSpec]]]) -> Registry:
    return load_registry(registry_doc(packages))


def make_manifest(deps: list[DepSpec], name: str = "app") -> RootManifest:
    return load_manifest(manifest_doc(deps, name))


def advisory_doc(entries: list[dict]) -> str:
    return json.dumps({"advisories": entries})
