"""Command-line front end: homology reports, movie composition, site
listings, and the invariant verification suites.

Exit codes: 0 success, 1 check failed, 2 parse error, 3 state cap exceeded,
4 invalid move sequence, 5 unknown verify suite.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .algebra import (
    GradedModuleSummary,
    PolyF2U,
    U,
    chain_map_degree,
    chain_maps_equal,
    compose_chain_maps,
    homology,
    identity_chain_map,
    is_homogeneous,
    scale_chain_map,
)
from .cobordism import (
    BandMapChoice,
    Movie,
    StabModel,
    band_map,
    compose_movie,
    disk_destab_map,
    disk_stab_map,
    parse_movie,
    quasi_destab_map,
    quasi_stab_map,
    serialize_movie,
    verify_commutation,
)
from .complexes import build_gc_prime, verify_curvature
from .corpus import corpus_grids
from .errors import (
    CapExceeded,
    GridFloerError,
    MoveSequenceInvalid,
    ParseError,
    UnknownSuite,
)
from .grids import (
    GridDiagram,
    SwitchSite,
    apply_switch,
    classify_band,
    find_switch_sites,
    link_topology,
    parse_grid,
    random_grid,
    same_letter_neighbors,
    serialize_grid,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MOVE = 4
EXIT_SUITE = 5

SUITES = ("curvature", "band-relations", "stab-relations", "commutation", "grading")


@dataclass(frozen=True)
class RunConfig:
    state_cap: int = 8
    output: str = "table"  # "json" | "table"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.state_cap < 2:
            raise ValueError(f"state_cap must be at least 2, got {self.state_cap}")
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")
        if self.output not in ("json", "table"):
            raise ValueError(f"output must be json or table, got {self.output!r}")


def _poly_str(p: PolyF2U) -> str:
    return repr(p).replace(" ", "")


def _summary_rows(summary: GradedModuleSummary) -> list[dict]:
    return summary.to_json_rows()


def _print_summary_table(summary: GradedModuleSummary, out) -> None:
    print(f"{'grading':>8} {'free':>6}  torsion", file=out)
    for row in summary.to_json_rows():
        torsion = (
            " ".join(f"U^{k}" for k in row["torsion"]) if row["torsion"] else "-"
        )
        print(f"{row['grading_doubled']:>8} {row['free_rank']:>6}  {torsion}", file=out)


def _grid_json(g: GridDiagram) -> dict:
    return {"n": g.n, "o": list(g.o_col), "x": list(g.x_col)}


def cmd_homology(grid_file: str, config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    with open(grid_file) as fh:
        g = parse_grid(fh.read())
    c = build_gc_prime(g, config.state_cap, config.threads)
    summary = homology(c)
    if config.output == "json":
        json.dump(
            {"n": g.n, "generators": len(c.basis), "homology": _summary_rows(summary)},
            out,
            indent=2,
        )
        print(file=out)
    else:
        print(f"grid: n={g.n}, {len(c.basis)} generators", file=out)
        _print_summary_table(summary, out)
    return EXIT_OK


def cmd_movie(grid_file: str, movie_file: str, config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    with open(grid_file) as fh:
        g = parse_grid(fh.read())
    with open(movie_file) as fh:
        movie = parse_movie(fh.read(), g)
    result = compose_movie(movie, config.state_cap)
    degree = result.total.degree
    if degree is None:
        degree = chain_map_degree(result.total)
    matrix = [[_poly_str(p) for p in row] for row in result.induced]
    if config.output == "json":
        json.dump(
            {
                "final_grid": _grid_json(result.final_grid),
                "degree": degree,
                "source_homology": _summary_rows(result.src_summary),
                "target_homology": _summary_rows(result.tgt_summary),
                "induced": matrix,
            },
            out,
            indent=2,
        )
        print(file=out)
    else:
        print("final diagram:", file=out)
        print(serialize_grid(result.final_grid), end="", file=out)
        print(f"total map degree: {degree}", file=out)
        print("source homology:", file=out)
        _print_summary_table(result.src_summary, out)
        print("target homology:", file=out)
        _print_summary_table(result.tgt_summary, out)
        print("induced map (rows = target generators):", file=out)
        for row in matrix:
            print("  " + " ".join(f"{e:>6}" for e in row), file=out)
    return EXIT_OK


def _site_record(g: GridDiagram, site: SwitchSite) -> dict:
    band = classify_band(g, site)
    after = link_topology(apply_switch(g, site)).component_count
    return {
        "col": site.col + 1,
        "row": site.row + 1,
        "letter": site.letter,
        "oriented": band.oriented,
        "band_type": band.band_type,
        "components_after": after,
    }


def cmd_sites(grid_file: str, config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    with open(grid_file) as fh:
        g = parse_grid(fh.read())
    records = [_site_record(g, s) for s in find_switch_sites(g)]
    if config.output == "json":
        json.dump({"n": g.n, "sites": records}, out, indent=2)
        print(file=out)
    else:
        for r in records:
            oriented = "oriented" if r["oriented"] else "unoriented"
            print(
                f"col={r['col']} row={r['row']} letter={r['letter']} "
                f"{oriented} type={r['band_type']} "
                f"components_after={r['components_after']}",
                file=out,
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites


def _reproducer(g: GridDiagram, movie: Movie | None) -> str:
    text = "grid:\n" + serialize_grid(g)
    if movie is not None:
        text += "movie:\n" + serialize_movie(movie)
    return text


def _suite_curvature(config: RunConfig):
    for name, g in corpus_grids().items():
        if g.n > 5:
            continue
        yield f"curvature diagonal on {name}", g, None, verify_curvature(
            g, config.state_cap
        )


def _suite_grading(config: RunConfig):
    rng = random.Random(config.seed)
    grids = list(corpus_grids().items())
    grids += [(f"random5-{i}", random_grid(5, rng)) for i in range(5)]
    for name, g in grids:
        c = build_gc_prime(g, config.state_cap, config.threads)
        yield f"boundary homogeneity on {name}", g, None, is_homogeneous(c)


def _suite_band_relations(config: RunConfig):
    for name, g in corpus_grids().items():
        c = build_gc_prime(g, config.state_cap, config.threads)
        for site in find_switch_sites(g):
            f = band_map(c, BandMapChoice(site))  # chain property asserted
            f_back = band_map(f.tgt, BandMapChoice(site))
            u_src = scale_chain_map(identity_chain_map(c), U)
            u_mid = scale_chain_map(identity_chain_map(f.tgt), U)
            first = chain_maps_equal(compose_chain_maps(f_back, f), u_src)
            f_again = band_map(f_back.tgt, BandMapChoice(site))
            second = chain_maps_equal(compose_chain_maps(f_again, f_back), u_mid)
            label = f"col={site.col + 1} row={site.row + 1} letter={site.letter}"
            yield f"switch compositions equal U on {name} ({label})", g, None, (
                first and second
            )


def _suite_stab_relations(config: RunConfig):
    for name, g in corpus_grids().items():
        if g.n > 5:
            continue
        c = build_gc_prime(g, config.state_cap, config.threads)
        for anchor in range(2 * g.n):
            stab = quasi_stab_map(c, StabModel("quasi", anchor))
            same = compose_chain_maps(
                quasi_destab_map(stab.tgt, StabModel("quasi", anchor)), stab
            )
            zero_ok = all(not row for row in same.entries.values())
            adj = same_letter_neighbors(g, anchor)[0]
            ident = compose_chain_maps(
                quasi_destab_map(stab.tgt, StabModel("quasi", adj)), stab
            )
            id_ok = chain_maps_equal(ident, identity_chain_map(c))
            label = g.marking_name(anchor)
            yield f"destab-stab relations on {name} at {label}", g, None, (
                zero_ok and id_ok
            )
        ds = disk_stab_map(c)
        disk = compose_chain_maps(disk_destab_map(ds.tgt), ds)
        disk_ok = all(not row for row in disk.entries.values())
        yield f"disk destab-stab vanishes on {name}", g, None, disk_ok


def _suite_commutation(config: RunConfig):
    grids = corpus_grids()
    pairs = [
        ("split2x2_2x2", SwitchSite(1, 1, "O"), SwitchSite(3, 3, "O")),
        ("split2x2_2x2", SwitchSite(1, 3, "X"), SwitchSite(3, 1, "X")),
        ("unknot4_sites", SwitchSite(0, 0, "O"), SwitchSite(2, 2, "O")),
        ("unknot4_sites", SwitchSite(0, 2, "X"), SwitchSite(2, 0, "X")),
    ]
    for name, s1, s2 in pairs:
        g = grids[name]
        ok = verify_commutation(g, s1, s2, config.state_cap)
        label = (
            f"({s1.col + 1},{s1.row + 1}){s1.letter} vs "
            f"({s2.col + 1},{s2.row + 1}){s2.letter}"
        )
        yield f"disjoint switches commute on {name} {label}", g, None, ok


_SUITE_RUNNERS = {
    "curvature": _suite_curvature,
    "grading": _suite_grading,
    "band-relations": _suite_band_relations,
    "stab-relations": _suite_stab_relations,
    "commutation": _suite_commutation,
}


def cmd_verify(suite: str, config: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    if suite not in _SUITE_RUNNERS:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    checks = []
    for description, g, movie, ok in _SUITE_RUNNERS[suite](config):
        checks.append({"check": description, "passed": ok})
        if not ok:
            if config.output == "json":
                json.dump(
                    {
                        "suite": suite,
                        "passed": False,
                        "failed_check": description,
                        "reproducer": _reproducer(g, movie),
                        "checks": checks,
                    },
                    out,
                    indent=2,
                )
                print(file=out)
            else:
                print(f"FAIL {description}", file=out)
                print(_reproducer(g, movie), end="", file=out)
            return EXIT_FAIL
    if config.output == "json":
        json.dump({"suite": suite, "passed": True, "checks": checks}, out, indent=2)
        print(file=out)
    else:
        for c in checks:
            print(f"ok {c['check']}", file=out)
        print(f"{suite}: {len(checks)} checks passed", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridfloer",
        description="Unoriented grid homology and link-cobordism maps.",
    )
    parser.add_argument("--cap", type=int, default=8, help="state cap (max grid size)")
    parser.add_argument("--json", action="store_true", help="JSON output")
    parser.add_argument("--threads", type=int, default=1, help="builder threads")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)
    p_hom = sub.add_parser("homology", help="graded homology of a grid file")
    p_hom.add_argument("grid")
    p_movie = sub.add_parser("movie", help="compose a movie script over a grid file")
    p_movie.add_argument("grid")
    p_movie.add_argument("script")
    p_sites = sub.add_parser("sites", help="list switch sites of a grid file")
    p_sites.add_argument("grid")
    p_verify = sub.add_parser("verify", help="run an invariant suite")
    p_verify.add_argument("suite")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = RunConfig(
            state_cap=args.cap,
            output="json" if args.json else "table",
            threads=args.threads,
            seed=args.seed,
        )
        if args.command == "homology":
            return cmd_homology(args.grid, config)
        if args.command == "movie":
            return cmd_movie(args.grid, args.script, config)
        if args.command == "sites":
            return cmd_sites(args.grid, config)
        return cmd_verify(args.suite, config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except MoveSequenceInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MOVE
    except UnknownSuite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUITE
    except (GridFloerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
