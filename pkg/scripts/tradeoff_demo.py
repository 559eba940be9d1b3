#!/usr/bin/env python3
"""Show how the objective order trades freshness against graph size.

One small universe is solved under several prioritized objective orders and
the resulting metrics are printed side by side.  The newest release of the
library pulls in a helper package, so favoring freshness grows the graph and
favoring size picks the older, self-contained release.
"""

from __future__ import annotations

import json

from optdeps import (
    SolverSpec,
    Unsat,
    cost_vector,
    format_fraction,
    load_manifest,
    load_registry,
    mean_oldness,
    solve,
)

REGISTRY = {
    "packages": {
        "lib": {
            "2.0.0": {"dependencies": [["helper", "^1.0.0"]]},
            "1.0.0": {"dependencies": []},
        },
        "helper": {"1.0.0": {"dependencies": []}},
    }
}
MANIFEST = {"name": "demo-app", "dependencies": [["lib", "*"]]}

ORDERS = [
    ("min_oldness", "min_num_deps"),
    ("min_num_deps", "min_oldness"),
    ("min_duplicates", "min_oldness", "min_num_deps"),
]


def main() -> int:
    registry = load_registry(json.dumps(REGISTRY))
    manifest = load_manifest(json.dumps(MANIFEST))
    print(f"{'objective order':<45} {'cost':<14} {'nodes':<6} mean_oldness")
    for order in ORDERS:
        spec = SolverSpec(objectives=order)
        result = solve(registry, manifest, spec)
        if isinstance(result, Unsat):
            print(f"{', '.join(order):<45} unsat")
            continue
        cost = cost_vector(result, spec, registry)
        shown = "(" + ", ".join(format_fraction(part) for part in cost) + ")"
        nodes = ", ".join(f"{name}@{version}" for name, version in result.package_nodes())
        print(
            f"{', '.join(order):<45} {shown:<14} {len(result.package_nodes()):<6} "
            f"{format_fraction(mean_oldness(result, registry))}   [{nodes}]"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
