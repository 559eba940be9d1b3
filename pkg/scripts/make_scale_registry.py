#!/usr/bin/env python3
"""Generate a large synthetic registry with caret-style dependency chains.

The universe has P packages with V versions each (1.0.0 .. 1.(V-1).0).  The
packages form a chain: every version of package i depends on package i+1 with
a caret range, and every version also depends on a shared base package, so a
solve must thread the whole chain.  Any all-newest assignment is valid, which
makes the instance large but certifiable quickly.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path


def build_scale_docs(packages: int = 100, versions: int = 10) -> tuple[dict, dict]:
    names = [f"pkg{i:03d}" for i in range(packages - 1)]
    base = "base"

    def version_text(k: int) -> str:
        return f"1.{k}.0"

    registry: dict = {"packages": {}}
    for i, name in enumerate(names):
        deps = [[base, "^1.0.0"]]
        if i + 1 < len(names):
            deps = [[names[i + 1], "^1.0.0"], [base, "^1.0.0"]]
        registry["packages"][name] = {
            version_text(k): {"dependencies": deps} for k in range(versions)
        }
    registry["packages"][base] = {
        version_text(k): {"dependencies": []} for k in range(versions)
    }
    manifest = {"name": "scale-app", "dependencies": [[names[0], "^1.0.0"]]}
    return registry, manifest


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--packages", type=int, default=100)
    parser.add_argument("--versions", type=int, default=10)
    parser.add_argument("--out-registry", default="scale-registry.json")
    parser.add_argument("--out-manifest", default="scale-manifest.json")
    args = parser.parse_args()

    registry, manifest = build_scale_docs(args.packages, args.versions)
    Path(args.out_registry).write_text(json.dumps(registry, indent=2) + "\n", encoding="utf-8")
    Path(args.out_manifest).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    total = sum(len(entry) for entry in registry["packages"].values())
    print(f"wrote {args.out_registry} ({args.packages} packages, {total} versions)")
    print(f"wrote {args.out_manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
