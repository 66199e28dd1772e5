"""Census of Davenport constants for all abelian groups up to a given order.

For each isomorphism class the script reports the exact value (depth-first
search with reachable-sum pruning), the closed form when one applies, and a
maximal zero-sum-free witness.  Disagreement between the two routes aborts
the run, so a completed sweep doubles as a cross-check of both.

Examples:
  python3 scripts/davenport_census.py --max-order 16
  python3 scripts/davenport_census.py --max-order 24 --out census.json --cache dav_cache.json
"""
from __future__ import annotations

import argparse
import sys
import time

from zsum.davenport import (
    DavenportCache,
    davenport_exact,
    davenport_formula,
    zero_sum_free_check,
)
from zsum.groups import groups_up_to_order
from zsum.serialize import atomic_write_text, dumps_stable


def run_census(max_order: int, node_budget: int, cache: DavenportCache | None) -> list[dict]:
    rows = []
    for g in groups_up_to_order(max_order):
        started = time.perf_counter()
        exact = davenport_exact(g, node_budget=node_budget)
        elapsed = time.perf_counter() - started
        closed = davenport_formula(g)
        if closed is not None and closed != exact.value:
            raise AssertionError(
                f"closed form {closed} != search {exact.value} for {g.describe()}"
            )
        if not zero_sum_free_check(g, exact.witness):
            raise AssertionError(f"witness fails zero-sum-free check for {g.describe()}")
        if cache is not None:
            cache.put(exact)
        rows.append(
            {
                "orders": list(g.invariant_factors),
                "order": g.order,
                "davenport": exact.value,
                "closed_form": closed,
                "witness": [list(e) for e in exact.witness],
                "seconds": round(elapsed, 4),
            }
        )
    return rows


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-order", type=int, default=16)
    parser.add_argument("--node-budget", type=int, default=10**8)
    parser.add_argument("--cache", help="persist exact values into this cache file")
    parser.add_argument("--out", help="write the census as JSON instead of a table")
    args = parser.parse_args(argv)

    cache = DavenportCache(args.cache) if args.cache else None
    rows = run_census(args.max_order, args.node_budget, cache)

    if args.out:
        atomic_write_text(args.out, dumps_stable({"max_order": args.max_order, "rows": rows}))
        print(f"wrote {len(rows)} groups to {args.out}", file=sys.stderr)
        return 0

    print(f"{'group':>14} {'|G|':>5} {'D(G)':>5} {'closed':>7} {'time[s]':>8}")
    for row in rows:
        name = "x".join(str(d) for d in row["orders"]) or "1"
        closed = row["closed_form"] if row["closed_form"] is not None else "-"
        print(f"{name:>14} {row['order']:>5} {row['davenport']:>5} {closed:>7} {row['seconds']:>8.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
