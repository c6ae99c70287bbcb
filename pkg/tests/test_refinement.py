import random
from fractions import Fraction

import pytest
from corpus import TWISTED, uniform_set
from oracles import all_patterns, chain_is_cycle, periodic_tiling_ok

from wangnorm.asymptotic import asymptotic_norm_upper
from wangnorm.errors import BudgetExhausted, DimensionMismatch, EmptyPatternSet
from wangnorm.homology import build_ap_complex, is_cycle, simplex_extreme_points
from wangnorm.refinement import (
    CANNOT_TILE,
    TILES_PERIODICALLY,
    UNDECIDED,
    Pattern,
    build_wp_tileset,
    check_membership_certificate,
    cycle_in_projected_cone,
    enumerate_patterns,
    pattern_exists_bruteforce,
    project_cycle,
    surviving_tiles,
    tileability,
    verify_verdict,
)
from wangnorm.surface import ev_of_periodic
from wangnorm.tileset import WangTile, WangTileSet

HALF = Fraction(1, 2)
# horizontal period exactly 3, every vertical gluing free
CYCLE3 = WangTileSet(
    "CYCLE3",
    [WangTile("a", "h", "h", "0", "1"), WangTile("b", "h", "h", "1", "2"), WangTile("c", "h", "h", "2", "0")],
)


def grids(ps):
    return sorted(pat.grid for pats in ps.by_center for pat in pats)


def test_mono_patterns(mono):
    ps = enumerate_patterns(mono, 1)
    assert ps.counts() == [1]
    assert ps.by_center[0][0].grid == ((0, 0, 0),) * 3


def test_checker_patterns(checker):
    ps = enumerate_patterns(checker, 1)
    assert ps.counts() == [1, 1]
    assert grids(ps) == sorted(all_patterns(checker, 1))


def test_dead_patterns(dead):
    assert enumerate_patterns(dead, 1).count == 0
    assert not all_patterns(dead, 1)


def test_patterns_match_exhaustive_enumeration():
    rng = random.Random(21)
    for _ in range(40):
        ts = uniform_set(rng, max_tiles=3, max_colors=2)
        ps = enumerate_patterns(ts, 1)
        assert grids(ps) == sorted(all_patterns(ts, 1))
        assert all(pat.is_legal(ts) for pats in ps.by_center for pat in pats)
        assert all(pat.at(0, 0) == j for j, pats in enumerate(ps.by_center) for pat in pats)
        assert (ps.count > 0) == pattern_exists_bruteforce(ts, 1)


def test_pattern_budget(checker):
    with pytest.raises(BudgetExhausted) as info:
        enumerate_patterns(checker, 2, budget=5)
    assert not info.value.partial.complete
    with pytest.raises(BudgetExhausted):
        build_wp_tileset(info.value.partial)


def test_pattern_radius_must_be_positive(mono):
    with pytest.raises(ValueError):
        enumerate_patterns(mono, 0)


def test_pattern_legality_check(checker):
    assert not Pattern(1, ((0, 0, 0),) * 3).is_legal(checker)


def test_mono_wp(mono):
    wp = build_wp_tileset(enumerate_patterns(mono, 1))
    assert len(wp) == 1
    t = wp.tiles[0]
    assert t.top == t.bottom == "0,0,0/0,0,0"
    assert t.left == t.right == "0,0/0,0/0,0"
    assert wp.ids == ["T.1"]


def test_checker_wp_abuts_like_a_checkerboard(checker):
    wp = build_wp_tileset(enumerate_patterns(checker, 1))
    a, b = wp.tiles
    assert a.right == b.left and b.right == a.left
    assert a.top == b.bottom and b.top == a.bottom
    assert a.right != a.left and a.top != a.bottom


def test_dead_wp(dead):
    with pytest.raises(EmptyPatternSet):
        build_wp_tileset(enumerate_patterns(dead, 1))


def test_wp_adjacency_is_overlap_agreement():
    rng = random.Random(22)
    for _ in range(20):
        ts = uniform_set(rng, max_tiles=3, max_colors=2)
        ps = enumerate_patterns(ts, 1)
        if not 0 < ps.count <= 60:
            continue
        pats = [pat for group in ps.by_center for pat in group]
        wp = build_wp_tileset(ps)
        for s, ps_ in zip(wp.tiles, pats):
            for t, pt in zip(wp.tiles, pats):
                horizontal = all(ps_.at(x + 1, y) == pt.at(x, y) for x in range(-1, 1) for y in range(-1, 2))
                vertical = all(ps_.at(x, y + 1) == pt.at(x, y) for x in range(-1, 2) for y in range(-1, 1))
                assert (s.right == t.left) == horizontal
                assert (s.top == t.bottom) == vertical


def test_project_cycle(mono, checker):
    assert project_cycle(enumerate_patterns(mono, 1), (1,)) == (1,)
    ps = enumerate_patterns(checker, 1)
    assert project_cycle(ps, (HALF, HALF)) == (HALF, HALF)
    assert project_cycle(ps, (0, 0)) == (0, 0)
    with pytest.raises(DimensionMismatch):
        project_cycle(ps, (1,))


def test_membership_examples(mono, checker, dead):
    m = cycle_in_projected_cone(mono, (1,), 1)
    assert m.member and m.witness == (1,)
    assert cycle_in_projected_cone(checker, (HALF, HALF), 1).member
    m = cycle_in_projected_cone(dead, (1,), 1)
    assert not m.member
    assert check_membership_certificate(dead, (1,), m.patterns, m.certificate)


def test_membership_rejects_wrong_cycle():
    ts = WangTileSet("X", [WangTile("a", "1", "1", "1", "1"), WangTile("b", "2", "2", "2", "2")])
    m = cycle_in_projected_cone(ts, (1, 0), 1)
    assert m.member
    # (1,1) projects fine too; but TWISTED's cycle has no pattern at all
    m = cycle_in_projected_cone(TWISTED, (1, 1, 1), 1)
    assert not m.member
    assert check_membership_certificate(TWISTED, (1, 1, 1), m.patterns, m.certificate)
    assert not check_membership_certificate(TWISTED, (1, 1, 1), m.patterns, tuple(0 for _ in m.certificate))


def test_membership_witnesses_project_to_cycles():
    rng = random.Random(23)
    for _ in range(20):
        ts = uniform_set(rng, max_tiles=3, max_colors=2)
        cx = build_ap_complex(ts)
        for c in simplex_extreme_points(cx).extreme_points:
            for p in (1, 2):
                try:
                    m = cycle_in_projected_cone(ts, c, p, budget=20_000)
                except BudgetExhausted:
                    continue
                if m.member:
                    wp = build_wp_tileset(m.patterns)
                    assert chain_is_cycle(wp, m.witness) and min(m.witness) >= 0
                    projected = project_cycle(m.patterns, m.witness)
                    assert projected == tuple(c) and is_cycle(cx, projected)
                else:
                    assert check_membership_certificate(ts, c, m.patterns, m.certificate)


def test_pruned_tiles_carry_no_weight():
    tiles = [WangTile("a", "x", "x", "y", "y"), WangTile("b", "z", "x", "y", "y")]
    # b's top color z is nobody's bottom color
    assert surviving_tiles(tiles) == [0]


def test_verdict_dead(dead):
    v = tileability(dead)
    assert (v.kind, v.reason) == (CANNOT_TILE, "EmptyCone")
    assert verify_verdict(dead, v)


def test_verdict_mono(mono):
    v = tileability(mono)
    assert v.kind == TILES_PERIODICALLY
    t = v.certificate
    assert (t.k, t.l, t.s) == (1, 1, 0)
    assert verify_verdict(mono, v)


def test_verdict_checker(checker):
    v = tileability(checker)
    assert v.kind == TILES_PERIODICALLY
    t = v.certificate
    assert t.k * t.l == 2
    assert periodic_tiling_ok(checker, t.k, t.l, t.s, t.domain)
    assert ev_of_periodic(t, checker) == (HALF, HALF)


def test_verdict_no_pattern():
    v = tileability(TWISTED)
    assert (v.kind, v.reason, v.p) == (CANNOT_TILE, "NoPattern", 1)
    assert verify_verdict(TWISTED, v)
    assert not all_patterns(TWISTED, 1)


def test_verdict_undecided_within_small_budget():
    v = tileability(CYCLE3, max_p=2, max_period_area=2)
    assert v.kind == UNDECIDED
    text = "\n".join(v.report_lines())
    # each row of a 3x3 pattern is one of 3 cyclic shifts, rows independent
    assert len(all_patterns(CYCLE3, 1)) == 27
    assert "evidence p=1 patterns=27 cone_member(0)=true" in text
    assert "evidence p=2" in text
    # with a larger search area the period-3 tiling is found
    v = tileability(CYCLE3, max_p=2, max_period_area=3)
    assert v.kind == TILES_PERIODICALLY and v.certificate.k * v.certificate.l == 3


def test_periodic_verdicts_are_consistent():
    rng = random.Random(24)
    for _ in range(25):
        ts = uniform_set(rng)
        v = tileability(ts)
        assert verify_verdict(ts, v)
        if v.kind != TILES_PERIODICALLY:
            continue
        ev = ev_of_periodic(v.certificate, ts)
        cx = build_ap_complex(ts)
        assert is_cycle(cx, ev)
        for p in (1, 2):
            try:
                assert cycle_in_projected_cone(ts, ev, p, budget=20_000).member
            except BudgetExhausted:
                pass
        assert asymptotic_norm_upper(cx, ev, max_n=1).best_upper == 0


def test_verify_rejects_forged_verdicts(mono, checker):
    v = tileability(checker)
    v.certificate = type(v.certificate)(1, 1, 0, ((0, 0, "A"),))
    assert not verify_verdict(checker, v)
    v = tileability(mono)
    v.kind, v.reason, v.p = CANNOT_TILE, "NoPattern", 1
    assert not verify_verdict(mono, v)
