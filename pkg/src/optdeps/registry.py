"""Package universe loaded from local JSON documents.

The registry document maps package names to version-indexed metadata; the
manifest document declares the root project's direct dependencies; the
advisory document lists known vulnerabilities.  All loading is offline and
schema errors carry a path into the offending document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Mapping, Sequence

from .semver import (
    Constraint,
    ParseError,
    Version,
    compare_versions,
    format_constraint,
    parse_constraint,
    parse_version,
)

__all__ = [
    "Advisory",
    "Dependency",
    "LoadError",
    "PackageNotFound",
    "Registry",
    "RootManifest",
    "dump_registry",
    "load_advisories",
    "load_json",
    "load_manifest",
    "load_registry",
    "reachable_packages",
]


class LoadError(ValueError):
    """Schema or content violation in an input document."""


class PackageNotFound(KeyError):
    def __str__(self) -> str:
        return f"package not in registry: {self.args[0]!r}"


@dataclass(frozen=True)
class Dependency:
    name: str
    constraint: Constraint


@dataclass(frozen=True)
class RootManifest:
    name: str
    dependencies: tuple[Dependency, ...] = ()


@dataclass(frozen=True)
class Advisory:
    id: str
    package: str
    affected: Constraint
    cvss: Fraction


class Registry:
    """Immutable package universe.

    Versions are held newest-first (full version order, not insertion order);
    dependency lists preserve declaration order, duplicate names included.
    """

    def __init__(
        self,
        packages: Mapping[str, Iterable[Version]],
        dependencies: Mapping[tuple[str, Version], Sequence[Dependency]] = {},
    ) -> None:
        newest_first = cmp_to_key(compare_versions)
        self._versions: dict[str, tuple[Version, ...]] = {
            name: tuple(sorted(versions, key=newest_first, reverse=True))
            for name, versions in packages.items()
        }
        for name, versions in self._versions.items():
            if not versions:
                raise ValueError(f"package {name!r} has no versions")
        self._dependencies: dict[tuple[str, Version], tuple[Dependency, ...]] = {
            key: tuple(deps) for key, deps in dependencies.items()
        }
        for name, version in self._dependencies:
            if not self.has_version(name, version):
                raise ValueError(f"dependency metadata for absent version {name}@{version}")

    def __contains__(self, name: str) -> bool:
        return name in self._versions

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return (
            self._versions == other._versions and self._dependencies == other._dependencies
        )

    def __repr__(self) -> str:
        return f"Registry({len(self._versions)} packages, {self.node_count()} versions)"

    def package_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._versions))

    def node_count(self) -> int:
        return sum(len(versions) for versions in self._versions.values())

    def has_version(self, name: str, version: Version) -> bool:
        return name in self._versions and version in self._versions[name]

    def sorted_versions(self, name: str) -> tuple[Version, ...]:
        """All versions of ``name``, newest first."""
        try:
            return self._versions[name]
        except KeyError:
            raise PackageNotFound(name) from None

    def dependencies(self, name: str, version: Version) -> tuple[Dependency, ...]:
        return self._dependencies.get((name, version), ())


def _checked_object(pairs: list[tuple[str, object]]) -> dict[str, object]:
    out: dict[str, object] = {}
    for key, value in pairs:
        if key in out:
            raise LoadError(f"duplicate key: {key!r}")
        out[key] = value
    return out


def load_json(text: str, **kwargs) -> object:
    """json.loads that rejects duplicate object keys and wraps syntax errors."""
    try:
        return json.loads(text, object_pairs_hook=_checked_object, **kwargs)
    except LoadError:
        raise
    except ValueError as exc:
        raise LoadError(f"invalid JSON: {exc}") from None


def _dependency_list(entries: object, where: str) -> tuple[Dependency, ...]:
    if not isinstance(entries, list):
        raise LoadError(f"{where}: dependencies must be an array")
    deps = []
    for i, entry in enumerate(entries):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(part, str) for part in entry)
        ):
            raise LoadError(f"{where}/dependencies/{i}: expected [name, range] strings")
        name, range_text = entry
        try:
            constraint = parse_constraint(range_text)
        except ParseError as exc:
            raise LoadError(f"{where}/dependencies/{i}: {exc}") from None
        deps.append(Dependency(name, constraint))
    return tuple(deps)


def load_registry(text: str) -> Registry:
    doc = load_json(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("packages"), dict):
        raise LoadError('registry document must be an object with a "packages" object')
    packages: dict[str, list[Version]] = {}
    dependencies: dict[tuple[str, Version], tuple[Dependency, ...]] = {}
    for name, version_map in doc["packages"].items():
        if not isinstance(version_map, dict):
            raise LoadError(f"packages/{name}: expected an object of versions")
        if not version_map:
            raise LoadError(f"packages/{name}: package has no versions")
        versions: list[Version] = []
        for version_text, entry in version_map.items():
            where = f"packages/{name}/{version_text}"
            try:
                version = parse_version(version_text)
            except ParseError as exc:
                raise LoadError(f"{where}: {exc}") from None
            if version in versions:
                # equal modulo build metadata counts as a collision
                raise LoadError(f"{where}: duplicate version")
            if not isinstance(entry, dict):
                raise LoadError(f"{where}: expected an object")
            dependencies[(name, version)] = _dependency_list(
                entry.get("dependencies", []), where
            )
            versions.append(version)
        packages[name] = versions
    return Registry(packages, dependencies)


def dump_registry(registry: Registry) -> str:
    """Canonical JSON for a registry; load(dump(r)) == r."""
    payload = {
        "packages": {
            name: {
                str(version): {
                    "dependencies": [
                        [dep.name, format_constraint(dep.constraint)]
                        for dep in registry.dependencies(name, version)
                    ]
                }
                for version in registry.sorted_versions(name)
            }
            for name in registry.package_names()
        }
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_manifest(text: str) -> RootManifest:
    doc = load_json(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("name"), str):
        raise LoadError('manifest document must be an object with a "name" string')
    return RootManifest(doc["name"], _dependency_list(doc.get("dependencies", []), "manifest"))


def load_advisories(text: str) -> tuple[Advisory, ...]:
    # parse_float keeps scores like 7.5 exact
    doc = load_json(text, parse_float=Fraction)
    if not isinstance(doc, dict) or not isinstance(doc.get("advisories", []), list):
        raise LoadError('advisory document must be an object with an "advisories" array')
    advisories = []
    for i, entry in enumerate(doc.get("advisories", [])):
        where = f"advisories/{i}"
        if not isinstance(entry, dict):
            raise LoadError(f"{where}: expected an object")
        ident, package = entry.get("id"), entry.get("package")
        affected_text, cvss = entry.get("affected"), entry.get("cvss")
        if not isinstance(ident, str) or not isinstance(package, str):
            raise LoadError(f'{where}: "id" and "package" must be strings')
        if not isinstance(affected_text, str):
            raise LoadError(f'{where}: "affected" must be a range string')
        if isinstance(cvss, bool) or not isinstance(cvss, (int, Fraction)):
            raise LoadError(f'{where}: "cvss" must be a number')
        score = Fraction(cvss)
        if not 0 <= score <= 10:
            raise LoadError(f"{where}: cvss {cvss} outside [0, 10]")
        try:
            affected = parse_constraint(affected_text)
        except ParseError as exc:
            raise LoadError(f"{where}: {exc}") from None
        advisories.append(Advisory(ident, package, affected, score))
    return tuple(advisories)


def reachable_packages(registry: Registry, root: RootManifest) -> frozenset[str]:
    """Names reachable from the root's dependencies through any version's
    dependencies.  Names absent from the registry are still included."""
    seen: set[str] = set()
    frontier = [dep.name for dep in root.dependencies]
    while frontier:
        name = frontier.pop()
        if name in seen:
            continue
        seen.add(name)
        if name in registry:
            for version in registry.sorted_versions(name):
                for dep in registry.dependencies(name, version):
                    if dep.name not in seen:
                        frontier.append(dep.name)
    return frozenset(seen)
