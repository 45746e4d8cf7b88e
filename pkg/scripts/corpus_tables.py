#!/usr/bin/env python3
"""Print the homology table and switch-site census of every bundled grid.

Usage: python scripts/corpus_tables.py [--json]
"""
import argparse
import json
import sys
import time

from gridfloer import (
    build_gc_prime,
    classify_band,
    corpus_grids,
    find_switch_sites,
    homology,
    link_topology,
)


def entry_report(name, g):
    t0 = time.monotonic()
    summary = homology(build_gc_prime(g))
    elapsed = time.monotonic() - t0
    sites = find_switch_sites(g)
    bands = sorted({classify_band(g, s).band_type for s in sites})
    free = summary.total_free()
    torsion = len(summary.torsion_multiset())
    return {
        "name": name,
        "n": g.n,
        "components": link_topology(g).component_count,
        "sites": len(sites),
        "band_types": "".join(bands) or "-",
        "free_rank": free,
        "torsion_count": torsion,
        "mod_u_dimension": free + 2 * torsion,
        "homology": summary.to_json_rows(),
        "seconds": round(elapsed, 4),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)
    reports = [entry_report(name, g) for name, g in sorted(corpus_grids().items())]
    if args.json:
        json.dump(reports, sys.stdout, indent=2)
        print()
        return 0
    header = f"{'name':<15} {'n':>2} {'comp':>4} {'sites':>5} {'bands':>5} {'free':>5} {'tors':>5} {'dim/U':>6} {'sec':>7}"
    print(header)
    print("-" * len(header))
    for r in reports:
        print(
            f"{r['name']:<15} {r['n']:>2} {r['components']:>4} {r['sites']:>5} "
            f"{r['band_types']:>5} {r['free_rank']:>5} {r['torsion_count']:>5} "
            f"{r['mod_u_dimension']:>6} {r['seconds']:>7.3f}"
        )
        for row in r["homology"]:
            counts = {}
            for k in row["torsion"]:
                counts[k] = counts.get(k, 0) + 1
            torsion = " ".join(f"{c} x U^{k}" for k, c in sorted(counts.items())) or "-"
            print(
                f"    grading {row['grading_doubled']:>3}: "
                f"free {row['free_rank']:>3}, torsion {torsion}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
