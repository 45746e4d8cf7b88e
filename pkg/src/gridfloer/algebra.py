"""Graded homological algebra over F2[U] and F2[U_1..U_2n].

Polynomials over F2 are bitmask-backed (bit k = coefficient of U^k).
Complexes carry doubled integer gradings so that half-integer gradings of
multi-component links stay exact.  Boundary entries are either sets of
exponent vectors (one variable per marking) or single-variable polynomials;
in the single-variable case homogeneity forces every entry to be a monomial
whose exponent matches the grading gap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BadPolicy,
    NonHomogeneousEntry,
    NotAComplex,
    NotChainMap,
    NotHomogeneous,
)

# ---------------------------------------------------------------------------
# polynomials over F2


@dataclass(frozen=True, slots=True)
class PolyF2U:
    """An element of F2[U]; bit k of `bits` is the coefficient of U^k."""

    bits: int = 0

    @classmethod
    def from_terms(cls, terms) -> "PolyF2U":
        b = 0
        for k in terms:
            if k < 0:
                raise ValueError(f"negative exponent {k}")
            b ^= 1 << k
        return cls(b)

    @property
    def terms(self) -> frozenset[int]:
        return frozenset(k for k in range(self.bits.bit_length()) if self.bits >> k & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __add__(self, other: "PolyF2U") -> "PolyF2U":
        return PolyF2U(self.bits ^ other.bits)

    def __mul__(self, other: "PolyF2U") -> "PolyF2U":
        a, b, acc = self.bits, other.bits, 0
        while a:
            low = a & -a
            acc ^= b << low.bit_length() - 1
            a ^= low
        return PolyF2U(acc)

    def shifted(self, k: int) -> "PolyF2U":
        """Multiply by U^k."""
        if k < 0:
            raise ValueError(f"negative shift {k}")
        return PolyF2U(self.bits << k)

    def truncated(self, k: int) -> "PolyF2U":
        """Reduce modulo U^k."""
        return PolyF2U(self.bits & ((1 << k) - 1))

    def is_monomial(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def degree(self) -> int:
        """Degree in U; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def __repr__(self) -> str:
        if not self.bits:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            parts.append("1" if k == 0 else ("U" if k == 1 else f"U^{k}"))
        return " + ".join(parts)


ZERO = PolyF2U(0)
ONE = PolyF2U(1)
U = PolyF2U(2)


def u_power(k: int) -> PolyF2U:
    if k < 0:
        raise ValueError(f"negative exponent {k}")
    return PolyF2U(1 << k)


def poly_divmod(a: PolyF2U, b: PolyF2U) -> tuple[PolyF2U, PolyF2U]:
    """Long division in F2[U]: a = q*b + r with deg r < deg b."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q, r, db = 0, a.bits, b.bits.bit_length() - 1
    while r.bit_length() - 1 >= db:
        shift = r.bit_length() - 1 - db
        r ^= b.bits << shift
        q ^= 1 << shift
    return PolyF2U(q), PolyF2U(r)


# ---------------------------------------------------------------------------
# exponent vectors (multivariable monomials)

COMMON_VARIABLE = -1  # index of the identified variable after specialization


@dataclass(frozen=True, slots=True)
class ExponentVector:
    """A monomial over the marking variables, as sorted (index, exponent)
    pairs with positive exponents; absent indices mean exponent 0."""

    exps: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, mapping) -> "ExponentVector":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        acc: dict[int, int] = {}
        for i, e in items:
            if e < 0:
                raise ValueError(f"negative exponent {e} for variable {i}")
            if e:
                acc[i] = acc.get(i, 0) + e
        return cls(tuple(sorted(acc.items())))

    def get(self, i: int) -> int:
        for j, e in self.exps:
            if j == i:
                return e
        return 0

    def total(self) -> int:
        return sum(e for _, e in self.exps)

    def __mul__(self, other: "ExponentVector") -> "ExponentVector":
        acc = dict(self.exps)
        for i, e in other.exps:
            acc[i] = acc.get(i, 0) + e
        return ExponentVector(tuple(sorted(acc.items())))

    def variables(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.exps)

    def collapse(self, keep: tuple[int, ...]) -> "ExponentVector":
        """Send every variable outside `keep` to the common identified one."""
        acc: dict[int, int] = {}
        for i, e in self.exps:
            j = i if i in keep else COMMON_VARIABLE
            acc[j] = acc.get(j, 0) + e
        return ExponentVector(tuple(sorted(acc.items())))

    def relabel(self, perm: dict[int, int]) -> "ExponentVector":
        return ExponentVector.make((perm.get(i, i), e) for i, e in self.exps)


def _xor_ev(acc: set, ev: ExponentVector) -> None:
    # F2 set semantics: adding a monomial twice cancels it
    if ev in acc:
        acc.remove(ev)
    else:
        acc.add(ev)


# ---------------------------------------------------------------------------
# graded bases and complexes


@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis labels with doubled gradings; labels are unique."""

    elements: tuple[tuple[object, int], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.elements]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels in graded basis")

    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.elements)

    def to_dict(self) -> dict:
        return dict(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


MULTI = "multi"
SINGLE = "single"


@dataclass(eq=False)
class MonomialComplex:
    """A free graded complex.

    ring == "multi": boundary entries are frozensets of ExponentVector.
    ring == "single": entries are PolyF2U (monomials, by homogeneity).
    `boundary` is column-sparse: boundary[src][tgt] = entry.  Instances are
    treated as immutable after construction.
    """

    basis: GradedBasis
    boundary: dict
    marking_count: int
    ring: str = SINGLE
    grid: object = None          # originating GridDiagram, when applicable
    tensor_stack: tuple = ()     # stabilization bookkeeping, newest last

    def grading(self, label) -> int:
        return self.basis.to_dict()[label]

    def entry(self, src, tgt):
        row = self.boundary.get(src)
        if not row:
            return frozenset() if self.ring == MULTI else ZERO
        default = frozenset() if self.ring == MULTI else ZERO
        return row.get(tgt, default)

    def entries(self):
        for src, row in self.boundary.items():
            for tgt, val in row.items():
                yield src, tgt, val


@dataclass(frozen=True)
class GradedModuleSummary:
    """Per doubled-grading free ranks and U-torsion exponents, grading
    descending; rows with no content are dropped."""

    rows: tuple[tuple[int, int, tuple[int, ...]], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "GradedModuleSummary":
        rows = []
        for g in sorted(d, reverse=True):
            free, torsion = d[g]
            torsion = tuple(sorted(torsion))
            if any(k < 1 for k in torsion) or free < 0:
                raise ValueError(f"bad summary row at grading {g}")
            if free or torsion:
                rows.append((g, free, torsion))
        return cls(tuple(rows))

    def to_dict(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        return {g: (f, t) for g, f, t in self.rows}

    def to_json_rows(self) -> list[dict]:
        return [
            {"grading_doubled": g, "free_rank": f, "torsion": list(t)}
            for g, f, t in self.rows
        ]

    def total_free(self) -> int:
        return sum(f for _, f, _ in self.rows)

    def torsion_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(k for _, _, t in self.rows for k in t))


# ---------------------------------------------------------------------------
# specialization and curvature


def specialize(c: MonomialComplex, policy) -> MonomialComplex:
    """Quotient the coefficient ring.

    policy "all": identify every marking variable with U; entries become
    single-variable (each a monomial or zero by F2 cancellation).
    policy (i, j): keep markings i and j distinct, identify the rest.
    """
    if policy == "all":
        if c.ring == SINGLE:
            return c
        new_boundary: dict = {}
        for src, row in c.boundary.items():
            new_row = {}
            for tgt, evs in row.items():
                p = ZERO
                for ev in evs:
                    p = p + u_power(ev.total())
                if p:
                    new_row[tgt] = p
            if new_row:
                new_boundary[src] = new_row
        return MonomialComplex(
            c.basis, new_boundary, c.marking_count, SINGLE, c.grid, c.tensor_stack
        )
    if (
        isinstance(policy, tuple)
        and len(policy) == 2
        and all(isinstance(i, int) for i in policy)
    ):
        i, j = policy
        if i == j or not (0 <= i < c.marking_count and 0 <= j < c.marking_count):
            raise BadPolicy(f"markings {policy} invalid for marking_count={c.marking_count}")
        if c.ring != MULTI:
            raise BadPolicy("keep-two specialization needs a multivariable complex")
        keep = (i, j)
        new_boundary = {}
        for src, row in c.boundary.items():
            new_row = {}
            for tgt, evs in row.items():
                acc: set = set()
                for ev in evs:
                    _xor_ev(acc, ev.collapse(keep))
                if acc:
                    new_row[tgt] = frozenset(acc)
            if new_row:
                new_boundary[src] = new_row
        return MonomialComplex(
            c.basis, new_boundary, c.marking_count, MULTI, c.grid, c.tensor_stack
        )
    raise BadPolicy(f"unrecognized policy {policy!r}")


def boundary_squared(c: MonomialComplex) -> dict:
    """The composition of the boundary with itself, column-sparse."""
    out: dict = {}
    if c.ring == MULTI:
        for src, row in c.boundary.items():
            acc: dict[object, set] = {}
            for mid, evs1 in row.items():
                for tgt, evs2 in c.boundary.get(mid, {}).items():
                    bucket = acc.setdefault(tgt, set())
                    for ev1 in evs1:
                        for ev2 in evs2:
                            _xor_ev(bucket, ev1 * ev2)
            cleaned = {tgt: frozenset(s) for tgt, s in acc.items() if s}
            if cleaned:
                out[src] = cleaned
    else:
        for src, row in c.boundary.items():
            acc2: dict[object, PolyF2U] = {}
            for mid, p1 in row.items():
                for tgt, p2 in c.boundary.get(mid, {}).items():
                    acc2[tgt] = acc2.get(tgt, ZERO) + p1 * p2
            cleaned2 = {tgt: p for tgt, p in acc2.items() if p}
            if cleaned2:
                out[src] = cleaned2
    return out


# ---------------------------------------------------------------------------
# single-variable complexes: checks and reduction


def _int_exponents(c: MonomialComplex) -> dict:
    """Validate homogeneity and return boundary as int exponent dicts.

    Every entry must be a monomial U^k with 2d(src) - 2d(tgt) = 2 - 2k.
    """
    if c.ring != SINGLE:
        raise NotHomogeneous("complex is not single-variable; specialize first")
    grading = c.basis.to_dict()
    D: dict = {}
    for src, row in c.boundary.items():
        new_row = {}
        for tgt, p in row.items():
            if not p:
                continue
            if not p.is_monomial():
                raise NonHomogeneousEntry(f"entry {src}->{tgt} = {p} is not a monomial")
            k = p.degree()
            if grading[src] - grading[tgt] != 2 - 2 * k:
                raise NotHomogeneous(
                    f"entry {src}->{tgt} = U^{k} breaks grading: "
                    f"{grading[src]} - {grading[tgt]} != {2 - 2 * k}"
                )
            new_row[tgt] = k
        if new_row:
            D[src] = new_row
    return D


def _check_squares_to_zero(D: dict) -> None:
    # parity of two-step path counts; homogeneity pins the exponents
    keysets = {src: set(row) for src, row in D.items()}
    for src, row in D.items():
        acc: set = set()
        for mid in row:
            if mid in keysets:
                acc.symmetric_difference_update(keysets[mid])
        if acc:
            tgt = next(iter(acc))
            raise NotAComplex(f"boundary squared has an odd path count {src} -> {tgt}")


def is_homogeneous(c: MonomialComplex) -> bool:
    """True iff every boundary entry is a monomial matching the grading gap."""
    try:
        _int_exponents(c)
    except (NonHomogeneousEntry, NotHomogeneous):
        return False
    return True


def boundary_squares_to_zero(c: MonomialComplex) -> bool:
    """Fast exact check of d^2 = 0 for a homogeneous single-variable complex.

    Homogeneity pins the exponent of every two-step path between fixed
    endpoints, so d^2 = 0 reduces to path-count parity.
    """
    D = _int_exponents(c)
    try:
        _check_squares_to_zero(D)
    except NotAComplex:
        return False
    return True


class _Reduction:
    """Cancellation of a homogeneous monomial differential.

    Repeatedly cancels a pivot entry src -> tgt of globally minimal exponent
    k; the induced update on the survivors is
    D[w][z] += U^{e_w + e_z - k} for every w -> tgt and src -> z.  A pivot
    with k >= 1 leaves a torsion summand F2[U]/(U^k) at the target's grading.
    With `track`, representatives of the homology generators and projection
    rows (original basis -> final coordinates) are maintained.
    """

    def __init__(self, D: dict, labels: list, track: bool):
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.labels = labels
        m = len(labels)
        self.cols: list[dict] = [dict() for _ in range(m)]  # src -> {tgt: k}
        self.rows: list[dict] = [dict() for _ in range(m)]  # tgt -> {src: k}
        self.buckets: dict[int, dict] = {}
        for src, row in D.items():
            si = self.index[src]
            for tgt, k in row.items():
                self._add(si, self.index[tgt], k)
        self.alive = set(range(m))
        self.torsion: list[tuple[int, int]] = []  # (target index, exponent)
        self.track = track
        if track:
            self.rep: list[dict] = [{i: ONE} for i in range(m)]
            self.proj: list[dict] = [{i: ONE} for i in range(m)]
            self.torsion_data: list[tuple[int, int, dict, dict]] = []

    def _add(self, s: int, t: int, k: int) -> None:
        self.cols[s][t] = k
        self.rows[t][s] = k
        self.buckets.setdefault(k, {})[(s, t)] = None

    def _remove(self, s: int, t: int) -> None:
        k = self.cols[s].pop(t)
        del self.rows[t][s]
        del self.buckets[k][(s, t)]
        if not self.buckets[k]:
            del self.buckets[k]

    def _toggle(self, s: int, t: int, k: int) -> None:
        if t in self.cols[s]:
            # homogeneity: a re-created entry must carry the same exponent
            assert self.cols[s][t] == k
            self._remove(s, t)
        else:
            self._add(s, t, k)

    def _pick_pivot(self) -> tuple[int, int, int]:
        kmin = min(self.buckets)
        bucket = self.buckets[kmin]
        best = None
        for (s, t) in itertools.islice(bucket, 48):
            fill = (len(self.rows[t]) - 1) * (len(self.cols[s]) - 1)
            cand = (fill, s, t)
            if best is None or cand < best:
                best = cand
                if fill == 0:
                    break
        assert best is not None
        _, s, t = best
        return s, t, kmin

    def run(self) -> None:
        while self.buckets:
            a, b, k = self._pick_pivot()
            in_b = {w: e for w, e in self.rows[b].items() if w != a}
            out_a = {z: e for z, e in self.cols[a].items() if z != b}
            for w in list(self.rows[b]):
                self._remove(w, b)
            for z in list(self.cols[a]):
                self._remove(a, z)
            for z in list(self.cols[b]):  # boundary of b dies with the pair
                self._remove(b, z)
            for w in list(self.rows[a]):  # entries into a vanish by d^2 = 0
                self._remove(w, a)
            if self.track:
                # target change first: b := b + sum U^{e_z - k} z
                rep_b = self.rep[b]
                for z, ez in out_a.items():
                    self._vec_add(rep_b, self.rep[z], ez - k)
                    self._vec_add(self.proj[z], self.proj[b], ez - k)
                # then source changes: w := w + U^{e_w - k} a
                for w, ew in in_b.items():
                    self._vec_add(self.rep[w], self.rep[a], ew - k)
                    self._vec_add(self.proj[a], self.proj[w], ew - k)
            for w, ew in in_b.items():
                for z, ez in out_a.items():
                    self._toggle(w, z, ew + ez - k)
            self.alive.discard(a)
            self.alive.discard(b)
            if k >= 1:
                self.torsion.append((b, k))
                if self.track:
                    self.torsion_data.append(
                        (b, k, dict(self.rep[b]), dict(self.proj[b]))
                    )
            if self.track:
                self.rep[a] = {}
                self.proj[a] = {}
                self.rep[b] = {}
                if k < 1:
                    self.proj[b] = {}

    @staticmethod
    def _vec_add(target: dict, source: dict, shift: int) -> None:
        for i, p in source.items():
            v = target.get(i, ZERO) + p.shifted(shift)
            if v:
                target[i] = v
            else:
                target.pop(i, None)


def _summary_from_reduction(red: _Reduction, grading: dict) -> GradedModuleSummary:
    acc: dict[int, tuple[int, list]] = {}
    for i in sorted(red.alive):
        g = grading[red.labels[i]]
        free, tors = acc.get(g, (0, []))
        acc[g] = (free + 1, tors)
    for t, k in red.torsion:
        g = grading[red.labels[t]]
        free, tors = acc.get(g, (0, []))
        tors.append(k)
        acc[g] = (free, tors)
    return GradedModuleSummary.from_dict(acc)


def homology(c: MonomialComplex) -> GradedModuleSummary:
    """Homology of a single-variable complex as a graded module summary."""
    D = _int_exponents(c)
    _check_squares_to_zero(D)
    red = _Reduction(D, list(c.basis.labels()), track=False)
    red.run()
    return _summary_from_reduction(red, c.basis.to_dict())


@dataclass(frozen=True)
class HomologyGenerator:
    label: object            # final basis label of the reduction
    grading: int             # doubled
    torsion_exp: int | None  # None for a free tower, else k in F2[U]/(U^k)
    representative: dict     # cycle over the original basis, label -> PolyF2U


@dataclass(eq=False)
class HomologyPresentation:
    """Homology generators with fixed representatives and a projector from
    cycles (over the original basis) to final homology coordinates."""

    complex: MonomialComplex
    summary: GradedModuleSummary
    generators: tuple[HomologyGenerator, ...]
    _proj_rows: tuple[dict, ...]

    def project(self, vec: dict) -> tuple[PolyF2U, ...]:
        """Coordinates of a cycle on the homology generators; torsion
        coordinates are reduced modulo U^k."""
        out = []
        for gen, row in zip(self.generators, self._proj_rows):
            acc = ZERO
            for lab, coeff in vec.items():
                r = row.get(lab)
                if r is not None and coeff:
                    acc = acc + coeff * r
            if gen.torsion_exp is not None:
                acc = acc.truncated(gen.torsion_exp)
            out.append(acc)
        return tuple(out)


def present_homology(c: MonomialComplex) -> HomologyPresentation:
    D = _int_exponents(c)
    _check_squares_to_zero(D)
    labels = list(c.basis.labels())
    red = _Reduction(D, labels, track=True)
    red.run()
    grading = c.basis.to_dict()
    gens = []
    rows = []
    for i in sorted(red.alive):
        lab = labels[i]
        gens.append(
            HomologyGenerator(
                lab,
                grading[lab],
                None,
                {labels[j]: p for j, p in red.rep[i].items()},
            )
        )
        rows.append({labels[j]: p for j, p in red.proj[i].items()})
    for t, k, rep, proj in red.torsion_data:
        lab = labels[t]
        gens.append(
            HomologyGenerator(
                lab,
                grading[lab],
                k,
                {labels[j]: p for j, p in rep.items()},
            )
        )
        rows.append({labels[j]: p for j, p in proj.items()})
    return HomologyPresentation(
        c, _summary_from_reduction(red, grading), tuple(gens), tuple(rows)
    )


# ---------------------------------------------------------------------------
# chain maps


@dataclass(eq=False)
class ChainMap:
    """A map of single-variable complexes, column-sparse like a boundary.

    entries[src][tgt] is a PolyF2U; degree is the doubled grading shift,
    recorded when homogeneous.
    """

    src: MonomialComplex
    tgt: MonomialComplex
    entries: dict
    degree: int | None = None

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for lab, coeff in vec.items():
            for tgt_lab, p in self.entries.get(lab, {}).items():
                v = out.get(tgt_lab, ZERO) + coeff * p
                if v:
                    out[tgt_lab] = v
                else:
                    out.pop(tgt_lab, None)
        return out


def _apply_boundary(c: MonomialComplex, vec: dict) -> dict:
    out: dict = {}
    for lab, coeff in vec.items():
        for tgt_lab, p in c.boundary.get(lab, {}).items():
            v = out.get(tgt_lab, ZERO) + coeff * p
            if v:
                out[tgt_lab] = v
            else:
                out.pop(tgt_lab, None)
    return out


def is_chain_map(f: ChainMap) -> bool:
    """Exact check of d_tgt . f == f . d_src, entry by entry."""
    for x in f.src.basis.labels():
        lhs = _apply_boundary(f.tgt, f.entries.get(x, {}))
        rhs: dict = {}
        for mid, p in f.src.boundary.get(x, {}).items():
            for tgt_lab, q in f.entries.get(mid, {}).items():
                v = rhs.get(tgt_lab, ZERO) + p * q
                if v:
                    rhs[tgt_lab] = v
                else:
                    rhs.pop(tgt_lab, None)
        if lhs != rhs:
            return False
    return True


def require_chain_map(f: ChainMap) -> None:
    if not is_chain_map(f):
        raise NotChainMap("map does not commute with the boundaries")


def chain_map_degree(f: ChainMap) -> int | None:
    """The common doubled-grading shift of all entries, or None if mixed."""
    src_g = f.src.basis.to_dict()
    tgt_g = f.tgt.basis.to_dict()
    degs = set()
    for src, row in f.entries.items():
        for tgt, p in row.items():
            if not p:
                continue
            if not p.is_monomial():
                return None
            degs.add(tgt_g[tgt] - 2 * p.degree() - src_g[src])
    if len(degs) != 1:
        return None
    return degs.pop()


def identity_chain_map(c: MonomialComplex) -> ChainMap:
    entries = {lab: {lab: ONE} for lab in c.basis.labels()}
    return ChainMap(c, c, entries, degree=0)


def scale_chain_map(f: ChainMap, p: PolyF2U) -> ChainMap:
    entries: dict = {}
    for src, row in f.entries.items():
        new_row = {tgt: q * p for tgt, q in row.items() if q * p}
        if new_row:
            entries[src] = new_row
    deg = None
    if f.degree is not None and p.is_monomial():
        deg = f.degree - 2 * p.degree()
    return ChainMap(f.src, f.tgt, entries, degree=deg)


def add_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    if f.src is not g.src or f.tgt is not g.tgt:
        if f.src.basis != g.src.basis or f.tgt.basis != g.tgt.basis:
            raise NotChainMap("cannot add maps with different endpoints")
    entries: dict = {}
    for src in set(f.entries) | set(g.entries):
        row: dict = {}
        for tgt in set(f.entries.get(src, {})) | set(g.entries.get(src, {})):
            v = f.entries.get(src, {}).get(tgt, ZERO) + g.entries.get(src, {}).get(tgt, ZERO)
            if v:
                row[tgt] = v
        if row:
            entries[src] = row
    deg = f.degree if f.degree == g.degree else None
    return ChainMap(f.src, f.tgt, entries, degree=deg)


def compose_chain_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """g after f."""
    if f.tgt.basis != g.src.basis:
        raise NotChainMap("composition endpoints do not match")
    entries: dict = {}
    for src, row in f.entries.items():
        acc: dict = {}
        for mid, p in row.items():
            for tgt, q in g.entries.get(mid, {}).items():
                v = acc.get(tgt, ZERO) + p * q
                if v:
                    acc[tgt] = v
                else:
                    acc.pop(tgt, None)
        if acc:
            entries[src] = acc
    deg = None
    if f.degree is not None and g.degree is not None:
        deg = f.degree + g.degree
    return ChainMap(f.src, g.tgt, entries, deg)


def chain_maps_equal(f: ChainMap, g: ChainMap) -> bool:
    """Matrix equality (pointwise, not just on homology)."""
    keys = set(f.entries) | set(g.entries)
    for src in keys:
        if f.entries.get(src, {}) != g.entries.get(src, {}):
            return False
    return True


def induced_map(
    f: ChainMap,
    src_pres: HomologyPresentation,
    tgt_pres: HomologyPresentation,
) -> list[list[PolyF2U]]:
    """Matrix of f on homology generators: rows = target generators,
    columns = source generators."""
    require_chain_map(f)
    cols = []
    for gen in src_pres.generators:
        cols.append(tgt_pres.project(f.apply(gen.representative)))
    return [
        [cols[j][i] for j in range(len(src_pres.generators))]
        for i in range(len(tgt_pres.generators))
    ]


def maps_equal_on_homology(
    f: ChainMap,
    g: ChainMap,
    src_pres: HomologyPresentation | None = None,
    tgt_pres: HomologyPresentation | None = None,
) -> bool:
    """True iff (f - g)(z) is a boundary for every homology representative z."""
    require_chain_map(f)
    require_chain_map(g)
    if f.src.basis != g.src.basis or f.tgt.basis != g.tgt.basis:
        raise NotChainMap("maps do not share endpoints")
    if src_pres is None:
        src_pres = present_homology(f.src)
    if tgt_pres is None:
        tgt_pres = present_homology(f.tgt)
    diff = add_chain_maps(f, g)
    for gen in src_pres.generators:
        image = diff.apply(gen.representative)
        if any(tgt_pres.project(image)):
            return False
    return True


# ---------------------------------------------------------------------------
# Smith normal form over F2[U]


@dataclass(frozen=True)
class SmithResult:
    """P @ M @ Q == D with P, Q invertible over F2[U] and D diagonal with
    each entry dividing the next."""

    diagonal: tuple[PolyF2U, ...]
    row_transform: tuple[tuple[PolyF2U, ...], ...]  # P, rows x rows
    col_transform: tuple[tuple[PolyF2U, ...], ...]  # Q, cols x cols


def _mat_identity(m: int) -> list[list[PolyF2U]]:
    return [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]


def smith_reduce(matrix) -> SmithResult:
    """Diagonalize a monomial matrix over F2[U] with recorded transforms.

    Entries must each be a single monomial or zero (NonHomogeneousEntry
    otherwise); intermediate arithmetic is carried out in full F2[U].
    """
    M = [[entry for entry in row] for row in matrix]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    for row in M:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        for entry in row:
            if entry and not entry.is_monomial():
                raise NonHomogeneousEntry(f"entry {entry} is not a monomial")
    P = _mat_identity(nrows)
    Q = _mat_identity(ncols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q: PolyF2U):
        # row_dst += q * row_src
        for c in range(ncols):
            M[dst][c] = M[dst][c] + q * M[src][c]
        for c in range(nrows):
            P[dst][c] = P[dst][c] + q * P[src][c]

    def add_col(dst, src, q: PolyF2U):
        for r in range(nrows):
            M[r][dst] = M[r][dst] + q * M[r][src]
        for r in range(ncols):
            Q[r][dst] = Q[r][dst] + q * Q[r][src]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # locate a nonzero entry of minimal degree in the trailing block
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if M[i][j]:
                    d = M[i][j].degree()
                    if pivot is None or d < pivot[0]:
                        pivot = (d, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, nrows):
            if M[i][t]:
                q, r = poly_divmod(M[i][t], M[t][t])
                add_row(i, t, q)
                if r:
                    dirty = True
        for j in range(t + 1, ncols):
            if M[t][j]:
                q, r = poly_divmod(M[t][j], M[t][t])
                add_col(j, t, q)
                if r:
                    dirty = True
        if dirty:
            continue  # a smaller-degree remainder appeared; re-pivot
        # pivot now divides its cleared row and column; enforce divisibility
        # against the rest of the block
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if M[i][j]:
                    _, r = poly_divmod(M[i][j], M[t][t])
                    if r:
                        offender = i
                        break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, ONE)
            continue
        t += 1
    diag = tuple(M[i][i] if i < ncols else ZERO for i in range(min(nrows, ncols)))
    return SmithResult(
        diag,
        tuple(tuple(row) for row in P),
        tuple(tuple(row) for row in Q),
    )


def solve_linear(matrix, rhs) -> list[PolyF2U] | None:
    """One solution v of (matrix) v = rhs over F2[U], or None.

    matrix is a list of rows of PolyF2U; rhs a list of PolyF2U.
    """
    res = smith_reduce(matrix)
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    # transformed right-hand side: P @ rhs
    pb = []
    for i in range(nrows):
        acc = ZERO
        for j in range(nrows):
            acc = acc + res.row_transform[i][j] * rhs[j]
        pb.append(acc)
    w = [ZERO] * ncols
    for i in range(nrows):
        d = res.diagonal[i] if i < len(res.diagonal) else ZERO
        if d:
            q, r = poly_divmod(pb[i], d)
            if r:
                return None
            if i < ncols:
                w[i] = q
        elif pb[i]:
            return None
    # v = Q @ w
    v = []
    for i in range(ncols):
        acc = ZERO
        for j in range(ncols):
            acc = acc + res.col_transform[i][j] * w[j]
        v.append(acc)
    return v
