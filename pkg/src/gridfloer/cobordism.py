"""Chain maps for elementary cobordism moves and their composition.

Band moves (switches) act between the complexes of a grid and its switched
grid, which share one generator set; the map multiplies selected generators
by U according to the distinguished-point rule.  Quasi- and disk
stabilizations act algebraically: the complex is tensored with a rank-2
free module with zero differential, and destabilizations project back.
Every constructed map is asserted to commute with the boundaries.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from .algebra import (
    SINGLE,
    ChainMap,
    GradedBasis,
    GradedModuleSummary,
    HomologyPresentation,
    MonomialComplex,
    ONE,
    PolyF2U,
    add_chain_maps,
    chain_map_degree,
    compose_chain_maps,
    homology,
    identity_chain_map,
    induced_map,
    is_chain_map,
    maps_equal_on_homology,
    present_homology,
    u_power,
)
from .complexes import DEFAULT_STATE_CAP, build_gc_prime
from .errors import (
    AnchorMismatch,
    BadPermutation,
    ChainMapViolation,
    InvalidSite,
    MoveSequenceInvalid,
    ParseError,
    SitesNotDisjoint,
)
from .grids import (
    GridDiagram,
    SwitchSite,
    apply_switch,
    same_letter_neighbors,
    site_diagonal,
    site_exists,
    validate,
)

# ---------------------------------------------------------------------------
# move descriptions


@dataclass(frozen=True)
class BandMapChoice:
    """A switch site with the flavor and direction of the band map.

    flavor selects which generators pick up the factor U: `nu` uses the
    distinguished-point rule, `nu_tilde` its complement.  direction is
    bookkeeping for movie scripts; the reverse move is simply the switch
    performed on the switched grid, whose flipped diagonal supplies the
    complementary U-placement on its own.
    """

    site: SwitchSite
    flavor: str = "nu"           # "nu" | "nu_tilde"
    direction: str = "forward"   # "forward" | "inverse"

    def __post_init__(self):
        if self.flavor not in ("nu", "nu_tilde"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.direction not in ("forward", "inverse"):
            raise ValueError(f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class StabModel:
    """A (de)stabilization: tensoring with a rank-2 free module.

    kind "quasi" attaches the new basepoint pair next to `anchor` (a marking
    id of the base grid); kind "disk" adds a split two-basepoint unknot and
    takes no anchor.  The two new generators carry doubled-grading offsets
    (0, -gap) with the gap derived from small-grid homologies.
    """

    kind: str                    # "quasi" | "disk"
    anchor: int | None = None
    side: str = "beta"           # "alpha" | "beta"
    v_basis: tuple[str, str] = ("plus", "minus")

    def __post_init__(self):
        if self.kind not in ("quasi", "disk"):
            raise ValueError(f"unknown stabilization kind {self.kind!r}")
        if self.side not in ("alpha", "beta"):
            raise ValueError(f"unknown side {self.side!r}")
        if self.kind == "quasi" and self.anchor is None:
            raise ValueError("quasi-stabilization needs an anchor marking")


@dataclass(frozen=True)
class BandSwitch:
    choice: BandMapChoice


@dataclass(frozen=True)
class QuasiStab:
    model: StabModel


@dataclass(frozen=True)
class QuasiDestab:
    model: StabModel


@dataclass(frozen=True)
class DiskStab:
    pass


@dataclass(frozen=True)
class DiskDestab:
    pass


@dataclass(frozen=True)
class Renumber:
    perm: tuple[int, ...]


@dataclass(frozen=True)
class Movie:
    start: GridDiagram
    moves: tuple = ()


# ---------------------------------------------------------------------------
# derived grading offsets


@functools.cache
def derived_stab_offsets() -> tuple[int, int]:
    """(quasi gap, disk gap) in doubled gradings, derived from grids.

    The quasi gap is the unique shift making H(2x2 unknot) + a shifted copy
    equal H(3x3 unknot); the disk gap likewise matches the split union of
    two 2x2 unknots against four shifted copies.  Configuration data, never
    hardcoded.
    """
    h2 = homology(build_gc_prime(validate((0, 1), (1, 0)))).to_dict()
    h3 = homology(build_gc_prime(validate((0, 1, 2), (1, 2, 0)))).to_dict()
    h_split = homology(
        build_gc_prime(validate((0, 1, 2, 3), (1, 0, 3, 2)))
    ).to_dict()

    def merge(parts):
        acc: dict = {}
        for part in parts:
            for g, (free, tors) in part.items():
                f0, t0 = acc.get(g, (0, ()))
                acc[g] = (f0 + free, tuple(sorted(t0 + tuple(tors))))
        return {g: (f, tuple(sorted(t))) for g, (f, t) in acc.items() if f or t}

    def shifted(h, d):
        return {g - d: (f, tuple(t)) for g, (f, t) in h.items()}

    norm2 = {g: (f, tuple(t)) for g, (f, t) in h2.items()}
    norm3 = {g: (f, tuple(t)) for g, (f, t) in h3.items()}
    norm_split = {g: (f, tuple(t)) for g, (f, t) in h_split.items()}
    quasi = [s for s in range(-6, 7) if merge([norm2, shifted(norm2, s)]) == norm3]
    assert len(quasi) == 1, f"quasi gap not unique: {quasi}"
    s_v = quasi[0]
    disk = [
        s
        for s in range(-6, 7)
        if merge(
            [norm2, shifted(norm2, s_v), shifted(norm2, s), shifted(norm2, s + s_v)]
        )
        == norm_split
    ]
    assert len(disk) == 1, f"disk gap not unique: {disk}"
    return s_v, disk[0]


# ---------------------------------------------------------------------------
# tensor bookkeeping


def _tensor_rank2(
    c: MonomialComplex, tags: tuple[str, str], gap: int, stack_entry: tuple
) -> MonomialComplex:
    """c tensored with a rank-2 free module with zero differential; the
    second generator sits `gap` doubled-grading units below the first."""
    plus, minus = tags
    elements = []
    for lab, d in c.basis.elements:
        elements.append(((lab, plus), d))
        elements.append(((lab, minus), d - gap))
    boundary: dict = {}
    for src, row in c.boundary.items():
        for tag in tags:
            boundary[(src, tag)] = {(tgt, tag): p for tgt, p in row.items()}
    return MonomialComplex(
        GradedBasis(tuple(elements)),
        boundary,
        c.marking_count + 2,
        c.ring,
        c.grid,
        c.tensor_stack + (stack_entry,),
    )


def _apply_stack(c: MonomialComplex, stack: tuple) -> MonomialComplex:
    s_v, s_w = derived_stab_offsets() if stack else (0, 0)
    for entry in stack:
        if entry[0] == "quasi":
            _, anchor, side, tags = entry
            c = _tensor_rank2(c, tags, s_v, entry)
        else:
            _, tags = entry
            c = _tensor_rank2(c, tags, s_w, entry)
    return c


def _base_state(label, depth: int):
    for _ in range(depth):
        label = label[0]
    return label


def _rewrap(label, depth: int, new_base):
    """Replace the innermost base state of a nested tensor label."""
    if depth == 0:
        return new_base
    return (_rewrap(label[0], depth - 1, new_base), label[1])


# ---------------------------------------------------------------------------
# band maps


def _chain_defect(f: ChainMap):
    """First generator where the chain condition fails, or None."""
    from .algebra import _apply_boundary

    for x in f.src.basis.labels():
        lhs = _apply_boundary(f.tgt, f.entries.get(x, {}))
        rhs: dict = {}
        for mid, p in f.src.boundary.get(x, {}).items():
            for tgt_lab, q in f.entries.get(mid, {}).items():
                v = rhs.get(tgt_lab, PolyF2U(0)) + p * q
                if v:
                    rhs[tgt_lab] = v
                else:
                    rhs.pop(tgt_lab, None)
        if lhs != rhs:
            return x, lhs, rhs
    return None


def band_map_raw(c: MonomialComplex, choice: BandMapChoice) -> ChainMap:
    """The U-placement map of a switch, without the chain-map assertion."""
    if c.ring != SINGLE or c.grid is None:
        raise InvalidSite("band maps act on single-variable grid complexes")
    g = c.grid
    site = choice.site
    if not site_exists(g, site):
        raise InvalidSite(
            f"no {site.letter} diagonal pair in block col={site.col} row={site.row}"
        )
    g2 = apply_switch(g, site)
    kind = site_diagonal(g, site)
    # U multiplies the generators containing the distinguished point exactly
    # when the markings sit on the main diagonal (flavor nu); nu_tilde flips.
    u_when_contains = (kind == "main") == (choice.flavor == "nu")
    n = g.n
    p_col, p_row = (site.col + 1) % n, (site.row + 1) % n
    tgt = _apply_stack(build_gc_prime(g2, g2.n), c.tensor_stack)
    depth = len(c.tensor_stack)
    entries: dict = {}
    for lab in c.basis.labels():
        x = _base_state(lab, depth)
        hit = x[p_col] == p_row
        entries[lab] = {lab: u_power(1 if hit == u_when_contains else 0)}
    f = ChainMap(c, tgt, entries)
    f.degree = chain_map_degree(f)
    return f


def band_map(c: MonomialComplex, choice: BandMapChoice) -> ChainMap:
    """Chain map of a band move (switch); fails loudly if the U-placement
    rule does not commute with the boundaries."""
    f = band_map_raw(c, choice)
    defect = _chain_defect(f)
    if defect is not None:
        x, lhs, rhs = defect
        raise ChainMapViolation(
            f"flavor {choice.flavor} at col={choice.site.col + 1} "
            f"row={choice.site.row + 1} letter={choice.site.letter}: boundaries "
            f"disagree at generator {x}: d(f(x))={lhs} but f(d(x))={rhs}"
        )
    return f


def band_map_sum(c: MonomialComplex, site: SwitchSite) -> ChainMap:
    """The sum of both flavors at one site: pointwise (1+U) on generators.

    Asserted to be a chain map like the individual flavors; a
    ChainMapViolation carries the first counterexample generator.
    """
    f = band_map_raw(c, BandMapChoice(site, "nu"))
    g = band_map_raw(c, BandMapChoice(site, "nu_tilde"))
    total = add_chain_maps(f, g)
    defect = _chain_defect(total)
    if defect is not None:
        x, lhs, rhs = defect
        raise ChainMapViolation(
            f"flavor sum at col={site.col + 1} row={site.row + 1} "
            f"letter={site.letter}: "
            f"boundaries disagree at generator {x}: d(f(x))={lhs} but f(d(x))={rhs}"
        )
    return total


# ---------------------------------------------------------------------------
# stabilization maps


def quasi_stab_map(c: MonomialComplex, m: StabModel) -> ChainMap:
    """x -> x tensor plus_gen into c tensor V."""
    if m.kind != "quasi":
        raise ValueError("quasi_stab_map needs a quasi StabModel")
    if c.grid is None or not 0 <= m.anchor < 2 * c.grid.n:
        raise AnchorMismatch(f"anchor {m.anchor} is not a marking of the base grid")
    s_v, _ = derived_stab_offsets()
    entry = ("quasi", m.anchor, m.side, m.v_basis)
    tgt = _tensor_rank2(c, m.v_basis, s_v, entry)
    plus = m.v_basis[0]
    entries = {lab: {(lab, plus): ONE} for lab in c.basis.labels()}
    f = ChainMap(c, tgt, entries)
    f.degree = chain_map_degree(f)
    return f


def quasi_destab_map(c: MonomialComplex, m: StabModel) -> ChainMap:
    """Project c tensor V back to c.

    At the stabilization's own anchor: plus -> 0, minus -> x.  At an anchor
    adjacent along the link (the nearest same-letter marking, two steps away
    in the alternating marking cycle), the roles swap: plus -> x, minus -> 0.
    """
    if m.kind != "quasi":
        raise ValueError("quasi_destab_map needs a quasi StabModel")
    if not c.tensor_stack or c.tensor_stack[-1][0] != "quasi":
        raise AnchorMismatch("complex is not a quasi-stabilization target")
    _, stab_anchor, _side, tags = c.tensor_stack[-1]
    if m.anchor == stab_anchor:
        kill_tag, keep_tag = tags  # plus dies, minus projects
    elif m.anchor in same_letter_neighbors(c.grid, stab_anchor):
        keep_tag, kill_tag = tags  # adjacent basepoint: roles swap
    else:
        raise AnchorMismatch(
            f"destabilization anchor {m.anchor} is neither the stabilization "
            f"anchor {stab_anchor} nor adjacent to it along the link"
        )
    tgt = _strip_top_factor(c)
    entries: dict = {}
    for lab in tgt.basis.labels():
        entries[(lab, keep_tag)] = {lab: ONE}
        entries[(lab, kill_tag)] = {}
    f = ChainMap(c, tgt, entries)
    f.degree = chain_map_degree(f)
    return f


def _strip_top_factor(c: MonomialComplex) -> MonomialComplex:
    base = build_gc_prime(c.grid, c.grid.n)
    return _apply_stack(base, c.tensor_stack[:-1])


def disk_stab_map(c: MonomialComplex, tags: tuple[str, str] = ("plus", "minus")) -> ChainMap:
    """x -> x tensor plus_gen into c tensor W (a split two-basepoint unknot)."""
    _, s_w = derived_stab_offsets()
    entry = ("disk", tags)
    tgt = _tensor_rank2(c, tags, s_w, entry)
    entries = {lab: {(lab, tags[0]): ONE} for lab in c.basis.labels()}
    f = ChainMap(c, tgt, entries)
    f.degree = chain_map_degree(f)
    return f


def disk_destab_map(c: MonomialComplex) -> ChainMap:
    """Project c tensor W back to c: plus -> 0, minus -> x."""
    if not c.tensor_stack or c.tensor_stack[-1][0] != "disk":
        raise MoveSequenceInvalid("complex is not a disk-stabilization target")
    _, tags = c.tensor_stack[-1]
    tgt = _strip_top_factor(c)
    entries: dict = {}
    for lab in tgt.basis.labels():
        entries[(lab, tags[0])] = {}
        entries[(lab, tags[1])] = {lab: ONE}
    f = ChainMap(c, tgt, entries)
    f.degree = chain_map_degree(f)
    return f


# ---------------------------------------------------------------------------
# renumbering


def renumber_map(c: MonomialComplex, perm) -> ChainMap:
    """Relabel marking variables; the identity on generators.

    On single-variable complexes all markings are already identified and the
    map is the identity matrix onto the same complex.
    """
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(c.marking_count)):
        raise BadPermutation(
            f"{perm} is not a permutation of 0..{c.marking_count - 1}"
        )
    if c.ring == SINGLE:
        f = identity_chain_map(c)
        return f
    mapping = {i: p for i, p in enumerate(perm)}
    boundary: dict = {}
    for src, row in c.boundary.items():
        boundary[src] = {
            tgt: frozenset(ev.relabel(mapping) for ev in evs)
            for tgt, evs in row.items()
        }
    tgt_c = MonomialComplex(
        c.basis, boundary, c.marking_count, c.ring, c.grid, c.tensor_stack
    )
    entries = {lab: {lab: ONE} for lab in c.basis.labels()}
    return ChainMap(c, tgt_c, entries, degree=0)


# ---------------------------------------------------------------------------
# movies


@dataclass(eq=False)
class MovieResult:
    total: ChainMap
    final: MonomialComplex
    final_grid: GridDiagram
    induced: list[list[PolyF2U]]
    src_presentation: HomologyPresentation
    tgt_presentation: HomologyPresentation

    @property
    def src_summary(self) -> GradedModuleSummary:
        return self.src_presentation.summary

    @property
    def tgt_summary(self) -> GradedModuleSummary:
        return self.tgt_presentation.summary


def move_map(c: MonomialComplex, move) -> ChainMap:
    """The chain map of one movie move applied to the running complex."""
    if isinstance(move, BandSwitch):
        return band_map(c, move.choice)
    if isinstance(move, QuasiStab):
        return quasi_stab_map(c, move.model)
    if isinstance(move, QuasiDestab):
        return quasi_destab_map(c, move.model)
    if isinstance(move, DiskStab):
        return disk_stab_map(c)
    if isinstance(move, DiskDestab):
        return disk_destab_map(c)
    if isinstance(move, Renumber):
        return renumber_map(c, move.perm)
    raise MoveSequenceInvalid(f"unknown move {move!r}")


def compose_movie(movie: Movie, cap: int = DEFAULT_STATE_CAP) -> MovieResult:
    """Compose the moves in order and compute the induced map on homology."""
    src = build_gc_prime(movie.start, cap)
    current = src
    total = identity_chain_map(src)
    for move in movie.moves:
        f = move_map(current, move)
        total = compose_chain_maps(f, total)
        current = f.tgt
    src_pres = present_homology(src)
    tgt_pres = present_homology(current)
    matrix = induced_map(total, src_pres, tgt_pres)
    return MovieResult(total, current, current.grid, matrix, src_pres, tgt_pres)


def verify_commutation(
    g: GridDiagram,
    site1: SwitchSite,
    site2: SwitchSite,
    cap: int = DEFAULT_STATE_CAP,
) -> bool:
    """True iff the band maps of two disjoint sites commute on homology."""
    n = g.n
    rows1 = {site1.row, (site1.row + 1) % n}
    cols1 = {site1.col, (site1.col + 1) % n}
    rows2 = {site2.row, (site2.row + 1) % n}
    cols2 = {site2.col, (site2.col + 1) % n}
    if rows1 & rows2 or cols1 & cols2:
        raise SitesNotDisjoint(
            f"blocks ({site1.col},{site1.row}) and ({site2.col},{site2.row}) "
            "share a row or column"
        )
    c = build_gc_prime(g, cap)
    f1 = band_map(c, BandMapChoice(site1))
    f12 = band_map(f1.tgt, BandMapChoice(site2))
    f2 = band_map(c, BandMapChoice(site2))
    f21 = band_map(f2.tgt, BandMapChoice(site1))
    assert f12.tgt.grid == f21.tgt.grid
    order_a = compose_chain_maps(f12, f1)
    order_b = compose_chain_maps(f21, f2)
    return maps_equal_on_homology(order_a, order_b)


# ---------------------------------------------------------------------------
# movie script format

_ANCHOR_RE = re.compile(r"^([OX])([0-9]+)$")


def _parse_anchor(token: str, n: int, lineno: int) -> int:
    m = _ANCHOR_RE.match(token)
    if not m or not 1 <= int(m.group(2)) <= n:
        raise ParseError(
            f"line {lineno}: anchor {token!r} is not O<row> or X<row> with row in 1..{n}"
        )
    row = int(m.group(2)) - 1
    return row if m.group(1) == "O" else n + row


def _anchor_name(anchor: int, n: int) -> str:
    return f"O{anchor + 1}" if anchor < n else f"X{anchor - n + 1}"


def _kv_fields(tokens: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"line {lineno}: expected key=value, got {tok!r}")
        k, _, v = tok.partition("=")
        if k in out:
            raise ParseError(f"line {lineno}: duplicate field {k!r}")
        out[k] = v
    return out


def parse_movie(text: str, start: GridDiagram) -> Movie:
    """Parse the line-based movie script format against a starting grid.

    Columns, rows, anchors, and renumbering entries are 1-indexed in files.
    """
    n = start.n
    moves: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        if kind == "switch":
            fields = _kv_fields(args, lineno)
            missing = {"col", "row", "letter", "flavor", "dir"} - set(fields)
            if missing:
                raise ParseError(f"line {lineno}: switch is missing {sorted(missing)}")
            try:
                col, row = int(fields["col"]) - 1, int(fields["row"]) - 1
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer col/row") from exc
            if not (0 <= col < n and 0 <= row < n):
                raise ParseError(f"line {lineno}: col/row outside 1..{n}")
            if fields["letter"] not in ("O", "X"):
                raise ParseError(f"line {lineno}: letter must be O or X")
            if fields["flavor"] not in ("nu", "nu_tilde"):
                raise ParseError(f"line {lineno}: flavor must be nu or nu_tilde")
            if fields["dir"] not in ("fwd", "inv"):
                raise ParseError(f"line {lineno}: dir must be fwd or inv")
            moves.append(
                BandSwitch(
                    BandMapChoice(
                        SwitchSite(col, row, fields["letter"]),
                        fields["flavor"],
                        "forward" if fields["dir"] == "fwd" else "inverse",
                    )
                )
            )
        elif kind == "quasistab":
            fields = _kv_fields(args, lineno)
            if "anchor" not in fields:
                raise ParseError(f"line {lineno}: quasistab needs anchor=")
            side = fields.get("side", "beta")
            if side not in ("alpha", "beta"):
                raise ParseError(f"line {lineno}: side must be alpha or beta")
            moves.append(
                QuasiStab(
                    StabModel("quasi", _parse_anchor(fields["anchor"], n, lineno), side)
                )
            )
        elif kind == "quasidestab":
            fields = _kv_fields(args, lineno)
            if "anchor" not in fields:
                raise ParseError(f"line {lineno}: quasidestab needs anchor=")
            moves.append(
                QuasiDestab(
                    StabModel("quasi", _parse_anchor(fields["anchor"], n, lineno))
                )
            )
        elif kind == "diskstab":
            if args:
                raise ParseError(f"line {lineno}: diskstab takes no arguments")
            moves.append(DiskStab())
        elif kind == "diskdestab":
            if args:
                raise ParseError(f"line {lineno}: diskdestab takes no arguments")
            moves.append(DiskDestab())
        elif kind == "renumber":
            try:
                perm = tuple(int(tok) - 1 for tok in args)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer renumber entry") from exc
            if sorted(perm) != list(range(len(perm))):
                raise ParseError(f"line {lineno}: renumber is not a permutation")
            moves.append(Renumber(perm))
        else:
            raise ParseError(f"line {lineno}: unknown move {kind!r}")
    return Movie(start, tuple(moves))


def serialize_movie(movie: Movie) -> str:
    n = movie.start.n
    lines = []
    for move in movie.moves:
        if isinstance(move, BandSwitch):
            ch = move.choice
            d = "fwd" if ch.direction == "forward" else "inv"
            lines.append(
                f"switch col={ch.site.col + 1} row={ch.site.row + 1} "
                f"letter={ch.site.letter} flavor={ch.flavor} dir={d}"
            )
        elif isinstance(move, QuasiStab):
            lines.append(
                f"quasistab anchor={_anchor_name(move.model.anchor, n)} "
                f"side={move.model.side}"
            )
        elif isinstance(move, QuasiDestab):
            lines.append(f"quasidestab anchor={_anchor_name(move.model.anchor, n)}")
        elif isinstance(move, DiskStab):
            lines.append("diskstab")
        elif isinstance(move, DiskDestab):
            lines.append("diskdestab")
        elif isinstance(move, Renumber):
            lines.append("renumber " + " ".join(str(p + 1) for p in move.perm))
        else:
            raise MoveSequenceInvalid(f"unknown move {move!r}")
    return "\n".join(lines) + ("\n" if lines else "")
