"""Cobordism chain maps: bands, stabilizations, renumbering, movies."""
import math

import pytest

from gridfloer import (
    U,
    ZERO,
    AnchorMismatch,
    BadPermutation,
    BandMapChoice,
    BandSwitch,
    ChainMapViolation,
    DiskDestab,
    DiskStab,
    InvalidSite,
    Movie,
    MoveSequenceInvalid,
    ParseError,
    QuasiDestab,
    QuasiStab,
    Renumber,
    SitesNotDisjoint,
    StabModel,
    SwitchSite,
    add_chain_maps,
    apply_switch,
    band_map,
    band_map_raw,
    band_map_sum,
    chain_map_degree,
    chain_maps_equal,
    classify_band,
    compose_chain_maps,
    compose_movie,
    corpus_grid,
    derived_stab_offsets,
    disk_destab_map,
    disk_stab_map,
    find_switch_sites,
    homology,
    identity_chain_map,
    induced_map,
    is_chain_map,
    maps_equal_on_homology,
    move_map,
    parse_movie,
    quasi_destab_map,
    quasi_stab_map,
    renumber_map,
    same_letter_neighbors,
    scale_chain_map,
    serialize_movie,
    verify_commutation,
)

def _u_id(c):
    return scale_chain_map(identity_chain_map(c), U)


class TestStabOffsets:
    def test_derived_values(self):
        assert derived_stab_offsets() == (0, 2)

    def test_quasi_stab_reproduces_next_unknot(self, gc_primes):
        f = quasi_stab_map(gc_primes["unknot2"], StabModel("quasi", anchor=0))
        assert homology(f.tgt).to_dict() == homology(gc_primes["unknot3"]).to_dict()

    def test_disk_stab_reproduces_split_union(self, gc_primes):
        # the 4x4 split grid carries one extra size factor relative to the
        # tensor model: H(tgt) plus a copy shifted by the quasi gap
        f = disk_stab_map(gc_primes["unknot2"])
        s_v, _ = derived_stab_offsets()
        got = homology(f.tgt).to_dict()
        merged: dict = {}
        for d, (free, tors) in got.items():
            for shift in (0, s_v):
                f0, t0 = merged.get(d - shift, (0, ()))
                merged[d - shift] = (f0 + free, tuple(sorted(t0 + tors)))
        assert merged == homology(gc_primes["split2x2_2x2"]).to_dict()


class TestMoveValidation:
    def test_band_choice_fields(self):
        site = SwitchSite(0, 0, "O")
        with pytest.raises(ValueError):
            BandMapChoice(site, flavor="mu")
        with pytest.raises(ValueError):
            BandMapChoice(site, direction="sideways")

    def test_stab_model_fields(self):
        with pytest.raises(ValueError):
            StabModel("half")
        with pytest.raises(ValueError):
            StabModel("quasi", anchor=0, side="gamma")
        with pytest.raises(ValueError):
            StabModel("quasi")  # anchor required

    def test_band_map_requires_site(self, gc_primes):
        with pytest.raises(InvalidSite):
            band_map(gc_primes["trefoil5"], BandMapChoice(SwitchSite(1, 0, "O")))

    def test_unknown_move_rejected(self, gc_primes):
        with pytest.raises(MoveSequenceInvalid):
            move_map(gc_primes["unknot2"], "not a move")


class TestBandMaps:
    def test_nu_is_chain_map_everywhere(self, corpus, gc_primes):
        for name, g in corpus.items():
            for site in find_switch_sites(g):
                f = band_map(gc_primes[name], BandMapChoice(site, "nu"))
                assert is_chain_map(f), (name, site)
                assert f.tgt.grid == apply_switch(g, site)

    def test_degree_matches_band_type(self, corpus, gc_primes):
        # a split drops the doubled grading by 2, a merge preserves it
        for name, g in corpus.items():
            for site in find_switch_sites(g):
                f = band_map(gc_primes[name], BandMapChoice(site, "nu"))
                want = -2 if classify_band(g, site).band_type == "I" else 0
                assert chain_map_degree(f) == want, (name, site)

    def test_diagonal_monomial_entries(self, corpus, gc_primes):
        for name, g in corpus.items():
            n = g.n
            for site in find_switch_sites(g):
                f = band_map(gc_primes[name], BandMapChoice(site, "nu"))
                exps = []
                for lab in f.src.basis.labels():
                    row = f.entries[lab]
                    assert set(row) == {lab}
                    (k,) = row[lab].terms
                    exps.append(k)
                # the distinguished point lies in (n-1)! of the n! states
                assert sum(exps) in (
                    math.factorial(n - 1),
                    math.factorial(n) - math.factorial(n - 1),
                ), (name, site)

    def test_flavors_complement_each_other(self, corpus, gc_primes):
        for name, g in corpus.items():
            for site in find_switch_sites(g):
                f = band_map_raw(gc_primes[name], BandMapChoice(site, "nu"))
                t = band_map_raw(gc_primes[name], BandMapChoice(site, "nu_tilde"))
                for lab in f.src.basis.labels():
                    ks = {next(iter(f.entries[lab][lab].terms)),
                          next(iter(t.entries[lab][lab].terms))}
                    assert ks == {0, 1}, (name, site)

    def test_nu_tilde_never_commutes(self, corpus, gc_primes):
        for name, g in corpus.items():
            for site in find_switch_sites(g):
                with pytest.raises(ChainMapViolation, match="generator"):
                    band_map(gc_primes[name], BandMapChoice(site, "nu_tilde"))

    def test_flavor_sum_is_not_a_chain_map(self, corpus, gc_primes):
        for name, g in corpus.items():
            for site in find_switch_sites(g):
                with pytest.raises(ChainMapViolation):
                    band_map_sum(gc_primes[name], site)

    def test_flavor_sum_is_pointwise_one_plus_u(self, corpus, gc_primes):
        from gridfloer import ONE

        for name, g in corpus.items():
            if g.n > 5:
                continue
            for site in find_switch_sites(g):
                f = band_map_raw(gc_primes[name], BandMapChoice(site, "nu"))
                t = band_map_raw(gc_primes[name], BandMapChoice(site, "nu_tilde"))
                s = add_chain_maps(f, t)
                for lab in s.src.basis.labels():
                    assert s.entries[lab] == {lab: ONE + U}, (name, site)

    def test_round_trip_is_multiplication_by_u(self, corpus, gc_primes):
        # switch forward then back: exactly U, as matrices, in both orders
        for name, g in corpus.items():
            if g.n > 5:
                continue
            for site in find_switch_sites(g):
                f = band_map(gc_primes[name], BandMapChoice(site, "nu"))
                back = band_map(f.tgt, BandMapChoice(site, "nu", "inverse"))
                assert chain_maps_equal(
                    compose_chain_maps(back, f), _u_id(gc_primes[name])
                ), (name, site)
                assert chain_maps_equal(
                    compose_chain_maps(f, back), _u_id(f.tgt)
                ), (name, site)


class TestQuasiStabilization:
    def test_projection_relations_all_anchors(self, corpus, gc_primes):
        # destab at the same anchor kills the image; at either adjacent
        # anchor it is the identity
        for name, g in corpus.items():
            if g.n > 4:
                continue
            c = gc_primes[name]
            for anchor in range(2 * g.n):
                stab = quasi_stab_map(c, StabModel("quasi", anchor=anchor))
                same = quasi_destab_map(stab.tgt, StabModel("quasi", anchor=anchor))
                zero = compose_chain_maps(same, stab)
                assert all(
                    not p for row in zero.entries.values() for p in row.values()
                ), (name, anchor)
                for adj in set(same_letter_neighbors(g, anchor)):
                    near = quasi_destab_map(stab.tgt, StabModel("quasi", anchor=adj))
                    ident = compose_chain_maps(near, stab)
                    assert chain_maps_equal(ident, identity_chain_map(c)), (
                        name,
                        anchor,
                        adj,
                    )

    def test_grading_offsets(self, gc_primes):
        c = gc_primes["unknot3"]
        stab = quasi_stab_map(c, StabModel("quasi", anchor=2))
        assert chain_map_degree(stab) == 0
        base = c.basis.to_dict()
        stacked = stab.tgt.basis.to_dict()
        s_v, _ = derived_stab_offsets()
        for lab, d in base.items():
            assert stacked[(lab, "plus")] == d
            assert stacked[(lab, "minus")] == d - s_v

    def test_marking_count_grows(self, gc_primes):
        c = gc_primes["unknot2"]
        stab = quasi_stab_map(c, StabModel("quasi", anchor=1))
        assert stab.tgt.marking_count == c.marking_count + 2
        assert stab.tgt.tensor_stack[-1][0] == "quasi"

    def test_bad_anchor(self, gc_primes):
        c = gc_primes["unknot2"]
        with pytest.raises(AnchorMismatch):
            quasi_stab_map(c, StabModel("quasi", anchor=4))
        with pytest.raises(AnchorMismatch):
            quasi_destab_map(c, StabModel("quasi", anchor=0))

    def test_non_adjacent_destab_rejected(self, gc_primes):
        # trefoil5 neighbors of O1 are O4 and O3; O2 is neither
        c = gc_primes["trefoil5"]
        stab = quasi_stab_map(c, StabModel("quasi", anchor=0))
        assert set(same_letter_neighbors(c.grid, 0)) == {3, 2}
        with pytest.raises(AnchorMismatch, match="neither"):
            quasi_destab_map(stab.tgt, StabModel("quasi", anchor=1))

    def test_custom_tags_and_sides(self, gc_primes):
        c = gc_primes["unknot2"]
        m = StabModel("quasi", anchor=0, side="alpha", v_basis=("top", "bot"))
        stab = quasi_stab_map(c, m)
        labs = stab.tgt.basis.labels()
        assert all(tag in ("top", "bot") for _, tag in labs)
        same = quasi_destab_map(stab.tgt, StabModel("quasi", anchor=0))
        assert all(not p for row in compose_chain_maps(same, stab).entries.values()
                   for p in row.values())

    def test_nested_stabilizations_unwind_in_order(self, gc_primes):
        c = gc_primes["unknot2"]
        s1 = quasi_stab_map(c, StabModel("quasi", anchor=0))
        s2 = quasi_stab_map(s1.tgt, StabModel("quasi", anchor=1))
        assert len(s2.tgt.tensor_stack) == 2
        d2 = quasi_destab_map(s2.tgt, StabModel("quasi", anchor=0))  # adjacent
        d1 = quasi_destab_map(d2.tgt, StabModel("quasi", anchor=1))  # adjacent
        total = compose_chain_maps(
            d1, compose_chain_maps(d2, compose_chain_maps(s2, s1))
        )
        assert chain_maps_equal(total, identity_chain_map(c))


class TestDiskStabilization:
    def test_projection_kills_the_image(self, gc_primes):
        for name in ("unknot2", "hopf4", "trefoil5"):
            c = gc_primes[name]
            stab = disk_stab_map(c)
            destab = disk_destab_map(stab.tgt)
            zero = compose_chain_maps(destab, stab)
            assert all(not p for row in zero.entries.values() for p in row.values())

    def test_degrees(self, gc_primes):
        c = gc_primes["unknot3"]
        stab = disk_stab_map(c)
        destab = disk_destab_map(stab.tgt)
        assert chain_map_degree(stab) == 0
        assert chain_map_degree(destab) == 2

    def test_destab_needs_disk_on_top(self, gc_primes):
        c = gc_primes["unknot2"]
        with pytest.raises(MoveSequenceInvalid):
            disk_destab_map(c)
        quasi = quasi_stab_map(c, StabModel("quasi", anchor=0))
        with pytest.raises(MoveSequenceInvalid):
            disk_destab_map(quasi.tgt)
        disk = disk_stab_map(c)
        with pytest.raises(AnchorMismatch):
            quasi_destab_map(disk.tgt, StabModel("quasi", anchor=0))


class TestBandOnStabilizedComplex:
    def test_relations_survive_tensoring(self, gc_primes):
        c = gc_primes["unknot4_sites"]
        stab = quasi_stab_map(c, StabModel("quasi", anchor=0))
        site = find_switch_sites(c.grid)[0]
        f = band_map(stab.tgt, BandMapChoice(site, "nu"))
        assert f.tgt.tensor_stack == stab.tgt.tensor_stack
        back = band_map(f.tgt, BandMapChoice(site, "nu", "inverse"))
        assert chain_maps_equal(compose_chain_maps(back, f), _u_id(stab.tgt))


class TestRenumber:
    def test_single_variable_identity(self, gc_primes):
        c = gc_primes["unknot3"]
        f = renumber_map(c, (3, 4, 5, 0, 1, 2))
        assert f.src is c and f.tgt is c
        assert chain_maps_equal(f, identity_chain_map(c))

    def test_bad_permutation(self, gc_primes):
        c = gc_primes["unknot3"]
        with pytest.raises(BadPermutation):
            renumber_map(c, (0, 1))
        with pytest.raises(BadPermutation):
            renumber_map(c, (0, 0, 1, 2, 3, 3))

    def test_multivariable_roundtrip(self, multi_complexes):
        c = multi_complexes["hopf4"]
        perm = (2, 0, 1, 3, 7, 6, 5, 4)
        inverse = tuple(perm.index(i) for i in range(len(perm)))
        once = renumber_map(c, perm)
        back = renumber_map(once.tgt, inverse)
        assert back.tgt.boundary == c.boundary

    def test_multivariable_moves_variables(self, multi_complexes):
        c = multi_complexes["unknot3"]
        perm = (1, 2, 0, 4, 5, 3)
        f = renumber_map(c, perm)
        for (src, tgt, evs), (_, _, evs2) in zip(c.entries(), f.tgt.entries()):
            assert {ev.relabel(dict(enumerate(perm))) for ev in evs} == set(evs2)


class TestCommutation:
    @pytest.mark.parametrize(
        "name, s1, s2",
        [
            ("split2x2_2x2", ("O", 1, 1), ("O", 3, 3)),
            ("split2x2_2x2", ("X", 1, 3), ("X", 3, 1)),
            ("unknot4_sites", ("O", 0, 0), ("O", 2, 2)),
            ("unknot4_sites", ("X", 0, 2), ("X", 2, 0)),
        ],
    )
    def test_disjoint_bands_commute(self, corpus, name, s1, s2):
        g = corpus[name]
        site1 = SwitchSite(s1[1], s1[2], s1[0])
        site2 = SwitchSite(s2[1], s2[2], s2[0])
        assert verify_commutation(g, site1, site2)

    def test_overlapping_sites_rejected(self, corpus):
        g = corpus["trefoil5"]
        with pytest.raises(SitesNotDisjoint):
            verify_commutation(g, SwitchSite(0, 0, "O"), SwitchSite(1, 1, "O"))


class TestMovies:
    def test_empty_movie_is_identity(self, corpus):
        res = compose_movie(Movie(corpus["unknot3"]))
        assert res.final_grid == corpus["unknot3"]
        assert res.src_summary == res.tgt_summary
        n_gen = len(res.src_presentation.generators)
        for i in range(n_gen):
            for j in range(n_gen):
                want = "1" if i == j else "0"
                assert repr(res.induced[i][j]) == want

    def test_band_round_trip_induces_u(self, corpus):
        g = corpus["trefoil5"]
        site = find_switch_sites(g)[0]
        movie = Movie(
            g,
            (
                BandSwitch(BandMapChoice(site, "nu", "forward")),
                BandSwitch(BandMapChoice(site, "nu", "inverse")),
            ),
        )
        res = compose_movie(movie)
        assert res.final_grid == g
        expected = induced_map(
            _u_id(res.total.src), res.src_presentation, res.tgt_presentation
        )
        assert res.induced == expected

    def test_stab_then_destab_movies(self, corpus):
        g = corpus["unknot2"]
        same = Movie(
            g,
            (
                QuasiStab(StabModel("quasi", anchor=0)),
                QuasiDestab(StabModel("quasi", anchor=0)),
            ),
        )
        res = compose_movie(same)
        assert all(p == ZERO for row in res.induced for p in row)
        adjacent = Movie(
            g,
            (
                QuasiStab(StabModel("quasi", anchor=0)),
                QuasiDestab(StabModel("quasi", anchor=1)),
            ),
        )
        res2 = compose_movie(adjacent)
        assert chain_maps_equal(
            res2.total, identity_chain_map(res2.total.src)
        )

    def test_disk_movie(self, corpus):
        res = compose_movie(
            Movie(corpus["unknot2"], (DiskStab(), DiskDestab()))
        )
        assert all(p == ZERO for row in res.induced for p in row)

    def test_total_matches_manual_composition(self, corpus):
        g = corpus["unknot4_sites"]
        site = find_switch_sites(g)[0]
        moves = (
            QuasiStab(StabModel("quasi", anchor=2)),
            BandSwitch(BandMapChoice(site, "nu")),
            QuasiDestab(StabModel("quasi", anchor=2)),
        )
        res = compose_movie(Movie(g, moves))
        c = res.total.src
        f1 = move_map(c, moves[0])
        f2 = move_map(f1.tgt, moves[1])
        f3 = move_map(f2.tgt, moves[2])
        manual = compose_chain_maps(f3, compose_chain_maps(f2, f1))
        assert chain_maps_equal(res.total, manual)

    def test_movie_rejects_bad_sequences(self, corpus):
        with pytest.raises(MoveSequenceInvalid):
            compose_movie(Movie(corpus["unknot2"], (DiskDestab(),)))
        with pytest.raises(ChainMapViolation):
            compose_movie(
                Movie(
                    corpus["trefoil5"],
                    (
                        BandSwitch(
                            BandMapChoice(SwitchSite(0, 0, "O"), "nu_tilde")
                        ),
                    ),
                )
            )


MOVIE_SCRIPT = """\
# a full tour of the move vocabulary
switch col=1 row=1 letter=O flavor=nu dir=fwd
quasistab anchor=O2 side=alpha
quasidestab anchor=O2
diskstab
diskdestab
renumber 2 3 1 4 5 6 7 8
"""


class TestMovieScripts:
    def test_parse_round_trip(self, corpus):
        g = corpus["unknot4_sites"]
        movie = parse_movie(MOVIE_SCRIPT, g)
        assert movie.start == g
        kinds = [type(m).__name__ for m in movie.moves]
        assert kinds == [
            "BandSwitch",
            "QuasiStab",
            "QuasiDestab",
            "DiskStab",
            "DiskDestab",
            "Renumber",
        ]
        assert parse_movie(serialize_movie(movie), g) == movie

    def test_one_indexing(self, corpus):
        movie = parse_movie(
            "switch col=1 row=1 letter=O flavor=nu dir=fwd\n",
            corpus["unknot4_sites"],
        )
        choice = movie.moves[0].choice
        assert (choice.site.col, choice.site.row) == (0, 0)
        assert choice.direction == "forward"
        stab = parse_movie("quasistab anchor=X3\n", corpus["unknot4_sites"])
        assert stab.moves[0].model.anchor == 4 + 2

    def test_serialize_empty(self, corpus):
        assert serialize_movie(Movie(corpus["unknot2"])) == ""

    @pytest.mark.parametrize(
        "line, fragment",
        [
            ("wiggle col=1 row=1", "unknown move"),
            ("switch col=1 row=1 letter=O flavor=nu", "missing"),
            ("switch col=1 row=9 letter=O flavor=nu dir=fwd", "outside"),
            ("switch col=1 row=1 letter=Z flavor=nu dir=fwd", "letter"),
            ("switch col=1 row=1 letter=O flavor=zeta dir=fwd", "flavor"),
            ("switch col=1 row=1 letter=O flavor=nu dir=up", "dir"),
            ("switch col=a row=1 letter=O flavor=nu dir=fwd", "non-integer"),
            ("switch col=1 col=2 row=1 letter=O flavor=nu dir=fwd", "duplicate"),
            ("switch col", "key=value"),
            ("quasistab side=beta", "anchor"),
            ("quasistab anchor=Q1", "anchor"),
            ("quasistab anchor=O9", "anchor"),
            ("quasistab anchor=O1 side=left", "side"),
            ("quasidestab", "anchor"),
            ("diskstab now", "no arguments"),
            ("diskdestab now", "no arguments"),
            ("renumber 1 1 2", "not a permutation"),
            ("renumber 1 two", "non-integer"),
        ],
    )
    def test_parse_errors(self, corpus, line, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse_movie(line + "\n", corpus["unknot4_sites"])

    def test_parse_error_line_numbers(self, corpus):
        text = "# fine\ndiskstab\nwobble\n"
        with pytest.raises(ParseError, match="line 3"):
            parse_movie(text, corpus["unknot2"])

    def test_comments_ignored(self, corpus):
        movie = parse_movie("# nothing\n\n# more nothing\n", corpus["unknot2"])
        assert movie.moves == ()
