"""Grid states, the doubled delta grading, and the boundary operators.

States of an n x n grid are permutations: state[c] is the row of the lattice
point in column c.  The boundary counts empty toroidal rectangles between
states differing in exactly two columns; coefficients record the markings a
rectangle covers, either as one variable per marking or specialized to a
single U.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .algebra import (
    MULTI,
    SINGLE,
    ExponentVector,
    GradedBasis,
    MonomialComplex,
    u_power,
)
from .errors import CapExceeded, NotHomogeneous
from .grids import GridDiagram, link_topology

DEFAULT_STATE_CAP = 8

State = tuple[int, ...]


def enumerate_states(n: int, cap: int = DEFAULT_STATE_CAP) -> list[State]:
    """All n! states in lexicographic order; refuses sizes above the cap."""
    if n > cap:
        raise CapExceeded(f"grid size {n} exceeds the state cap {cap}")
    return list(itertools.permutations(range(n)))


def lehmer_rank(state: State) -> int:
    """Rank of a permutation in lexicographic order."""
    n = len(state)
    rank = 0
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    for i, v in enumerate(state):
        fact //= n - i if n - i else 1
        rank += fact * sum(1 for u in state[i + 1 :] if u < v)
    return rank


def lehmer_unrank(n: int, rank: int) -> State:
    pool = list(range(n))
    fact = 1
    for i in range(2, n):
        fact *= i
    out = []
    for i in range(n - 1, -1, -1):
        q, rank = divmod(rank, fact)
        out.append(pool.pop(q))
        if i > 1:
            fact //= i
    return tuple(out)


def _open_quadrant_pairs(P, Q) -> int:
    """Pairs (p, q) with q strictly up and to the right of p."""
    return sum(1 for pc, pr in P for qc, qr in Q if qc > pc and qr > pr)


def delta_grading(g: GridDiagram, state: State) -> int:
    """Doubled delta grading of a state.

    Computed in doubled coordinates so that lattice points (2c, 2r) and
    markings (2c+1, 2r+1) never share a coordinate line; "first quadrant"
    is open (strict inequalities).
    """
    n = g.n
    S = [(2 * c, 2 * state[c]) for c in range(n)]
    Os = [(2 * g.o_col[r] + 1, 2 * r + 1) for r in range(n)]
    Xs = [(2 * g.x_col[r] + 1, 2 * r + 1) for r in range(n)]
    l = link_topology(g).component_count
    i_ss = _open_quadrant_pairs(S, S)
    j_oo = i_ss - _open_quadrant_pairs(S, Os) - _open_quadrant_pairs(Os, S) \
        + _open_quadrant_pairs(Os, Os)
    j_xx = i_ss - _open_quadrant_pairs(S, Xs) - _open_quadrant_pairs(Xs, S) \
        + _open_quadrant_pairs(Xs, Xs)
    return j_oo + j_xx + (n - l) + 2


@dataclass(frozen=True)
class Rectangle:
    """A toroidal rectangle spanning columns [c1, c2) and rows [r1, r2),
    both wrapping mod n, with its covered-marking monomial and the number
    of state points strictly inside."""

    n: int
    c1: int
    r1: int
    c2: int
    r2: int
    weight: ExponentVector
    interior_points: int

    @property
    def width(self) -> int:
        return (self.c2 - self.c1) % self.n

    @property
    def height(self) -> int:
        return (self.r2 - self.r1) % self.n

    def contains_cell(self, c: int, r: int) -> bool:
        """True when the marking cell (c, r) lies under the rectangle."""
        return (c - self.c1) % self.n < self.width and (r - self.r1) % self.n < self.height


def _make_rectangle(g: GridDiagram, x: State, a: int, s: int, w: int, h: int) -> Rectangle:
    n = g.n
    interior = 0
    for dc in range(1, w):
        if 0 < (x[(a + dc) % n] - s) % n < h:
            interior += 1
    exps = []
    for r in range(n):
        if (g.o_col[r] - a) % n < w and (r - s) % n < h:
            exps.append((r, 1))
        if (g.x_col[r] - a) % n < w and (r - s) % n < h:
            exps.append((n + r, 1))
    return Rectangle(
        n, a, s, (a + w) % n, (s + h) % n, ExponentVector.make(exps), interior
    )


def candidate_rectangles(g: GridDiagram, x: State, y: State) -> list[Rectangle]:
    """The toroidal rectangles connecting x to y before the emptiness filter:
    two complementary candidates when the states differ in exactly two
    columns, none otherwise."""
    n = g.n
    diff = [c for c in range(n) if x[c] != y[c]]
    if len(diff) != 2:
        return []
    c1, c2 = diff
    if y[c1] != x[c2] or y[c2] != x[c1]:
        return []
    r1, r2 = x[c1], x[c2]
    return [
        _make_rectangle(g, x, a, s, (b - a) % n, (t - s) % n)
        for a, b, s, t in ((c1, c2, r1, r2), (c2, c1, r2, r1))
    ]


def rectangles(g: GridDiagram, x: State, y: State) -> list[Rectangle]:
    """The empty rectangles connecting x to y (no state point inside)."""
    return [r for r in candidate_rectangles(g, x, y) if r.interior_points == 0]


def _chunks(seq, parts):
    size = (len(seq) + parts - 1) // parts
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def build_complex(
    g: GridDiagram, cap: int = DEFAULT_STATE_CAP, threads: int = 1
) -> MonomialComplex:
    """The multivariable complex: entries are sets of exponent vectors."""
    states = enumerate_states(g.n, cap)
    n = g.n
    pairs = list(itertools.combinations(range(n), 2))

    def row_for(x: State) -> dict:
        row: dict = {}
        for c1, c2 in pairs:
            r1, r2 = x[c1], x[c2]
            y = list(x)
            y[c1], y[c2] = r2, r1
            ty = tuple(y)
            for a, b, s, t in ((c1, c2, r1, r2), (c2, c1, r2, r1)):
                rect = _make_rectangle(g, x, a, s, (b - a) % n, (t - s) % n)
                if rect.interior_points:
                    continue
                bucket = row.setdefault(ty, set())
                if rect.weight in bucket:
                    bucket.remove(rect.weight)
                else:
                    bucket.add(rect.weight)
        return {ty: frozenset(evs) for ty, evs in row.items() if evs}

    rows = _map_states(row_for, states, threads)
    basis = GradedBasis(tuple((s, delta_grading(g, s)) for s in states))
    boundary = {x: row for x, row in zip(states, rows) if row}
    return MonomialComplex(basis, boundary, 2 * n, MULTI, grid=g)


def build_gc_prime(
    g: GridDiagram, cap: int = DEFAULT_STATE_CAP, threads: int = 1
) -> MonomialComplex:
    """The single-variable complex: every marking variable set to U.

    Equals specialize(build_complex(g), "all") but is built directly with
    prefix-summed rectangle weights.
    """
    states = enumerate_states(g.n, cap)
    n = g.n
    o, x_col = g.o_col, g.x_col

    # 2n x 2n prefix sums of marking counts for O(1) rectangle weights
    cell = [[0] * n for _ in range(n)]  # cell[c][r]
    for r in range(n):
        cell[o[r]][r] += 1
        cell[x_col[r]][r] += 1
    m = 2 * n
    pref = [[0] * (m + 1) for _ in range(m + 1)]
    for c in range(m):
        col_counts = cell[c % n]
        pc, pc1 = pref[c], pref[c + 1]
        for r in range(m):
            pc1[r + 1] = col_counts[r % n] + pc1[r] + pc[r + 1] - pc[r]

    pairs = list(itertools.combinations(range(n), 2))

    def row_for(x: State) -> dict:
        per_target: dict = {}
        for c1, c2 in pairs:
            r1, r2 = x[c1], x[c2]
            y = list(x)
            y[c1], y[c2] = r2, r1
            ty = tuple(y)
            for a, b, s, t in ((c1, c2, r1, r2), (c2, c1, r2, r1)):
                w = (b - a) % n
                h = (t - s) % n
                clear = True
                for dc in range(1, w):
                    if 0 < (x[(a + dc) % n] - s) % n < h:
                        clear = False
                        break
                if not clear:
                    continue
                wt = pref[a + w][s + h] - pref[a][s + h] - pref[a + w][s] + pref[a][s]
                bucket = per_target.setdefault(ty, set())
                if wt in bucket:
                    bucket.remove(wt)
                else:
                    bucket.add(wt)
        row: dict = {}
        for ty, wts in per_target.items():
            if not wts:
                continue
            if len(wts) > 1:
                raise NotHomogeneous(
                    f"surviving rectangles {x} -> {ty} have mixed weights {sorted(wts)}"
                )
            row[ty] = u_power(next(iter(wts)))
        return row

    rows = _map_states(row_for, states, threads)
    basis = GradedBasis(tuple((s, delta_grading(g, s)) for s in states))
    boundary = {x: row for x, row in zip(states, rows) if row}
    return MonomialComplex(basis, boundary, 2 * n, SINGLE, grid=g)


def _map_states(fn, states, threads: int) -> list:
    """Apply a pure per-state function, optionally sharded across threads;
    results are assembled in state order either way."""
    if threads <= 1 or len(states) < 64:
        return [fn(x) for x in states]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        shards = pool.map(lambda chunk: [fn(x) for x in chunk], _chunks(states, threads))
        return [row for shard in shards for row in shard]


def dump_complex(c: MonomialComplex) -> str:
    """Text dump: a header with n and the graded ranks, then one line per
    nonzero entry `src_rank tgt_rank exponent_vector`."""
    g = c.grid
    lines = [f"n = {g.n}"]
    gradings = sorted({d for _, d in c.basis.elements}, reverse=True)
    for d in gradings:
        count = sum(1 for _, dd in c.basis.elements if dd == d)
        lines.append(f"# grading {d}: {count} states")
    for src, tgt, val in sorted(
        c.entries(), key=lambda e: (lehmer_rank(e[0]), lehmer_rank(e[1]))
    ):
        if c.ring == SINGLE:
            ev = " ".join(f"U^{k}" for k in sorted(val.terms))
        else:
            parts = []
            for mono in sorted(val, key=lambda e: e.exps):
                parts.append(
                    "*".join(f"u{i}^{e}" for i, e in mono.exps) or "1"
                )
            ev = " + ".join(parts)
        lines.append(f"{lehmer_rank(src)} {lehmer_rank(tgt)} {ev}")
    return "\n".join(lines) + "\n"


def expected_curvature(g: GridDiagram) -> frozenset[ExponentVector]:
    """The diagonal entry that the squared multivariable boundary must equal:
    over every column and every row, the product of the variables of the two
    markings in that line."""
    n = g.n
    o_row_of_col = {g.o_col[r]: r for r in range(n)}
    x_row_of_col = {g.x_col[r]: r for r in range(n)}
    acc: set[ExponentVector] = set()
    for c in range(n):
        ev = ExponentVector.make([(o_row_of_col[c], 1), (n + x_row_of_col[c], 1)])
        acc.symmetric_difference_update({ev})
    for r in range(n):
        ev = ExponentVector.make([(r, 1), (n + r, 1)])
        acc.symmetric_difference_update({ev})
    return frozenset(acc)


def verify_curvature(g: GridDiagram, cap: int = DEFAULT_STATE_CAP) -> bool:
    """True iff the multivariable boundary squares to the curvature diagonal."""
    from .algebra import boundary_squared

    c = build_complex(g, cap)
    expected = expected_curvature(g)
    sq = boundary_squared(c)
    for state in c.basis.labels():
        row = sq.get(state, {})
        if set(row) != {state} or row[state] != expected:
            return False
    return True
