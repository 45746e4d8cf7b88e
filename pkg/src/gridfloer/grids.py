"""Toroidal grid diagrams: validation, link combinatorics, switch sites.

A grid diagram is an n x n array on the torus with one O and one X marking
in every row and column.  Markings live at cell centers; rows and columns
are indexed 0..n-1 and all block arithmetic wraps mod n.

Marking ids: the O in row r has id r, the X in row r has id n + r.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import (
    InvalidSite,
    MarkingCollision,
    NonPermutation,
    ParseError,
    SizeTooSmall,
)

MIN_GRID_SIZE = 2


@dataclass(frozen=True)
class GridDiagram:
    """o_col[r] / x_col[r] give the column of the O / X marking in row r."""

    n: int
    o_col: tuple[int, ...]
    x_col: tuple[int, ...]

    def marking_position(self, marking: int) -> tuple[int, int]:
        """(column, row) of a marking id."""
        if 0 <= marking < self.n:
            return (self.o_col[marking], marking)
        if self.n <= marking < 2 * self.n:
            r = marking - self.n
            return (self.x_col[r], r)
        raise ValueError(f"marking id {marking} out of range for n={self.n}")

    def marking_name(self, marking: int) -> str:
        """Human-readable 1-indexed name, O<row> or X<row>."""
        if marking < self.n:
            return f"O{marking + 1}"
        return f"X{marking - self.n + 1}"

    def transpose(self) -> "GridDiagram":
        """Swap the roles of rows and columns."""
        o_t = [0] * self.n
        x_t = [0] * self.n
        for r in range(self.n):
            o_t[self.o_col[r]] = r
            x_t[self.x_col[r]] = r
        return GridDiagram(self.n, tuple(o_t), tuple(x_t))


@dataclass(frozen=True)
class SwitchSite:
    """A 2x2 block, columns (col, col+1) and rows (row, row+1) mod n, whose
    diagonal holds two markings of one letter."""

    col: int
    row: int
    letter: str  # "O" or "X"


@dataclass(frozen=True)
class LinkTopology:
    component_count: int
    component_of: dict[int, int]
    arcs: tuple[tuple[int, ...], ...]  # marking cycle per component


@dataclass(frozen=True)
class BandClass:
    """Classification of the band realized by a switch."""

    oriented: bool      # component count changes under the switch
    band_type: str      # "I" (both feet on one component) or "II"


def validate(o_seq, x_seq) -> GridDiagram:
    """Build a GridDiagram from two column sequences, checking all invariants."""
    o = tuple(int(c) for c in o_seq)
    x = tuple(int(c) for c in x_seq)
    if len(o) != len(x):
        raise NonPermutation(
            f"marking sequences have different lengths {len(o)} and {len(x)}"
        )
    n = len(o)
    if n < MIN_GRID_SIZE:
        raise SizeTooSmall(f"grid size {n} is below the minimum of {MIN_GRID_SIZE}")
    for name, seq in (("O", o), ("X", x)):
        if sorted(seq) != list(range(n)):
            raise NonPermutation(f"{name} columns {list(seq)} are not a permutation of 0..{n - 1}")
    for r in range(n):
        if o[r] == x[r]:
            raise MarkingCollision(f"row {r} holds O and X in the same column {o[r]}")
    return GridDiagram(n, o, x)


def link_topology(g: GridDiagram) -> LinkTopology:
    """Trace marking cycles: O -> X within a column, X -> O within a row."""
    n = g.n
    x_row_of_col = {g.x_col[s]: s for s in range(n)}
    succ = {}
    for r in range(n):
        s = x_row_of_col[g.o_col[r]]
        succ[r] = n + s
        succ[n + s] = s
    cycles = []
    seen: set[int] = set()
    for m in range(2 * n):
        if m in seen:
            continue
        cyc = [m]
        seen.add(m)
        cur = succ[m]
        while cur != m:
            cyc.append(cur)
            seen.add(cur)
            cur = succ[cur]
        cycles.append(tuple(cyc))
    comp = {m: i for i, cyc in enumerate(cycles) for m in cyc}
    return LinkTopology(len(cycles), comp, tuple(cycles))


def marking_successor(g: GridDiagram, marking: int) -> int:
    """Next marking along the link through `marking`."""
    topo = link_topology(g)
    for cyc in topo.arcs:
        if marking in cyc:
            i = cyc.index(marking)
            return cyc[(i + 1) % len(cyc)]
    raise ValueError(f"marking {marking} not found")


def same_letter_neighbors(g: GridDiagram, marking: int) -> tuple[int, int]:
    """The two same-letter markings nearest to `marking` along its component
    (two steps away in the alternating marking cycle)."""
    topo = link_topology(g)
    for cyc in topo.arcs:
        if marking in cyc:
            i = cyc.index(marking)
            k = len(cyc)
            return (cyc[(i + 2) % k], cyc[(i - 2) % k])
    raise ValueError(f"marking {marking} not found")


def alternating_colorings(g: GridDiagram) -> list[dict[int, int]]:
    """All assignments marking -> +-1 alternating along every component.

    Each component's marking cycle has even length, so there are exactly two
    alternating sign patterns per component: 2^l colorings in total.
    """
    topo = link_topology(g)
    out = []
    for signs in itertools.product((1, -1), repeat=topo.component_count):
        coloring = {}
        for cyc, first in zip(topo.arcs, signs):
            s = first
            for m in cyc:
                coloring[m] = s
                s = -s
        out.append(coloring)
    return out


def _letter_positions(g: GridDiagram, letter: str) -> set[tuple[int, int]]:
    cols = g.o_col if letter == "O" else g.x_col
    return {(cols[r], r) for r in range(g.n)}


def site_exists(g: GridDiagram, s: SwitchSite) -> bool:
    """True when the block holds two same-letter markings on a diagonal."""
    if s.letter not in ("O", "X"):
        return False
    n = g.n
    pos = _letter_positions(g, s.letter)
    c2, r2 = (s.col + 1) % n, (s.row + 1) % n
    main = (s.col, s.row) in pos and (c2, r2) in pos
    anti = (c2, s.row) in pos and (s.col, r2) in pos
    return main or anti


def site_diagonal(g: GridDiagram, s: SwitchSite) -> str:
    """'main' when the markings sit at (col,row),(col+1,row+1); else 'anti'."""
    if not site_exists(g, s):
        raise InvalidSite(f"no {s.letter} diagonal pair in block col={s.col} row={s.row}")
    n = g.n
    pos = _letter_positions(g, s.letter)
    if (s.col, s.row) in pos and ((s.col + 1) % n, (s.row + 1) % n) in pos:
        return "main"
    return "anti"


def site_markings(g: GridDiagram, s: SwitchSite) -> tuple[int, int]:
    """The two marking ids occupying the site's diagonal."""
    if not site_exists(g, s):
        raise InvalidSite(f"no {s.letter} diagonal pair in block col={s.col} row={s.row}")
    base = 0 if s.letter == "O" else g.n
    rows = (s.row, (s.row + 1) % g.n)
    cols = {s.col, (s.col + 1) % g.n}
    seq = g.o_col if s.letter == "O" else g.x_col
    m = tuple(base + r for r in rows if seq[r] in cols)
    assert len(m) == 2
    return m  # type: ignore[return-value]


def _switched_sequences(g: GridDiagram, s: SwitchSite) -> tuple[tuple[int, ...], tuple[int, ...]]:
    r0, r1 = s.row, (s.row + 1) % g.n
    o, x = list(g.o_col), list(g.x_col)
    seq = o if s.letter == "O" else x
    seq[r0], seq[r1] = seq[r1], seq[r0]
    return tuple(o), tuple(x)


def apply_switch(g: GridDiagram, s: SwitchSite) -> GridDiagram:
    """Swap the rows of the site's two markings.  Involution at a fixed site."""
    if not site_exists(g, s):
        raise InvalidSite(f"no {s.letter} diagonal pair in block col={s.col} row={s.row}")
    o2, x2 = _switched_sequences(g, s)
    try:
        return validate(o2, x2)
    except MarkingCollision as exc:
        raise InvalidSite(f"switch at col={s.col} row={s.row} collides markings: {exc}") from exc


def scan_diagonal_blocks(g: GridDiagram, letter: str) -> list[SwitchSite]:
    """All 2x2 blocks whose diagonal holds two `letter` markings, with no
    validity filtering of the switched grid."""
    n = g.n
    pos = _letter_positions(g, letter)
    out = []
    for (c0, r0) in pos:
        r1 = (r0 + 1) % n
        for c1 in ((c0 + 1) % n, (c0 - 1) % n):
            if (c1, r1) in pos:
                cl = c0 if (c0 + 1) % n == c1 else c1
                out.append(SwitchSite(cl, r0, letter))
    return out


def find_switch_sites(g: GridDiagram) -> list[SwitchSite]:
    """All sites whose switch yields a valid grid, ordered (letter, col, row)."""
    out = []
    seen = set()
    for letter in ("O", "X"):
        for s in scan_diagonal_blocks(g, letter):
            key = (s.letter, _switched_sequences(g, s))
            if key in seen:
                continue
            seen.add(key)
            o2, x2 = _switched_sequences(g, s)
            try:
                validate(o2, x2)
            except (NonPermutation, MarkingCollision, SizeTooSmall):
                continue
            out.append(s)
    return sorted(out, key=lambda s: (s.letter, s.col, s.row))


def classify_band(g: GridDiagram, s: SwitchSite) -> BandClass:
    """Classify the band realized by switching at `s`.

    oriented: the component count changes (compared before/after).
    Type I/II: Type I when the two switched markings lie on one component of
    the pre-switch link (the band's feet close up into a single circuit),
    Type II when they lie on two different components.
    """
    g2 = apply_switch(g, s)  # raises InvalidSite for bad sites
    l_before = link_topology(g).component_count
    l_after = link_topology(g2).component_count
    m1, m2 = site_markings(g, s)
    comp = link_topology(g).component_of
    band_type = "I" if comp[m1] == comp[m2] else "II"
    return BandClass(oriented=l_before != l_after, band_type=band_type)


def random_grid(n: int, rng) -> GridDiagram:
    """A uniformly sampled valid grid: two random column permutations with no
    row collision, by rejection."""
    if n < MIN_GRID_SIZE:
        raise SizeTooSmall(f"grid size {n} is below the minimum of {MIN_GRID_SIZE}")
    o = rng.sample(range(n), n)
    while True:
        x = rng.sample(range(n), n)
        if all(o[r] != x[r] for r in range(n)):
            return GridDiagram(n, tuple(o), tuple(x))


# -- file format ---------------------------------------------------------------


def parse_grid(text: str) -> GridDiagram:
    """Parse the grid text format, or its JSON equivalent.

    Text format: `n = <int>`, `O = <n 1-indexed columns>`, `X = <same>`,
    with `#` comment lines.  JSON: {"n": ..., "o": [...], "x": [...]} with
    0-indexed columns.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_grid_json(text)
    fields: dict[str, list[int]] = {}
    n_val = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        try:
            values = [int(tok) for tok in rhs.split()]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer token in {raw!r}") from exc
        if key == "n":
            if len(values) != 1:
                raise ParseError(f"line {lineno}: `n` takes a single integer")
            n_val = values[0]
        elif key in ("O", "X"):
            if key in fields:
                raise ParseError(f"line {lineno}: duplicate `{key}` line")
            fields[key] = values
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if n_val is None or "O" not in fields or "X" not in fields:
        raise ParseError("grid file needs `n`, `O`, and `X` lines")
    for key in ("O", "X"):
        if len(fields[key]) != n_val:
            raise ParseError(f"`{key}` has {len(fields[key])} entries, expected n={n_val}")
        bad = [c for c in fields[key] if not 1 <= c <= n_val]
        if bad:
            raise ParseError(f"`{key}` columns {bad} outside 1..{n_val}")
    try:
        return validate(
            [c - 1 for c in fields["O"]],
            [c - 1 for c in fields["X"]],
        )
    except (NonPermutation, MarkingCollision, SizeTooSmall) as exc:
        raise ParseError(f"invalid grid: {exc}") from exc


def _parse_grid_json(text: str) -> GridDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: bad JSON: {exc.msg}") from exc
    if not isinstance(obj, dict) or not {"n", "o", "x"} <= set(obj):
        raise ParseError('JSON grid needs keys "n", "o", "x"')
    try:
        g = validate(obj["o"], obj["x"])
    except (NonPermutation, MarkingCollision, SizeTooSmall, TypeError, ValueError) as exc:
        raise ParseError(f"invalid grid: {exc}") from exc
    if g.n != obj["n"]:
        raise ParseError(f'JSON "n"={obj["n"]} does not match sequence length {g.n}')
    return g


def serialize_grid(g: GridDiagram) -> str:
    o = " ".join(str(c + 1) for c in g.o_col)
    x = " ".join(str(c + 1) for c in g.x_col)
    return f"n = {g.n}\nO = {o}\nX = {x}\n"
