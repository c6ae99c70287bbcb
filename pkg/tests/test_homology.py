import random
from fractions import Fraction

import pytest
from corpus import uniform_set
from oracles import kernel_dimension, simplex_vertices, wang_column

from wangnorm.errors import BudgetExhausted, DimensionMismatch
from wangnorm.homology import (
    build_ap_complex,
    check_empty_cone_certificate,
    cycle_space_basis,
    is_cycle,
    is_vertex,
    nonneg_cycle_exists,
    simplex_extreme_points,
    switching_rules,
)
from wangnorm.tileset import PolygonPrototile, PolygonPrototileSet

HALF = Fraction(1, 2)


def column_dict(cx, j):
    return {cell: v for cell, v in zip(cx.cells1, cx.column(j)) if v}


def test_mono_complex(mono):
    cx = build_ap_complex(mono)
    assert set(cx.cells1) == {("H", "a"), ("V", "a")}
    assert cx.column(0) == (0, 0)


def test_dead_complex(dead):
    cx = build_ap_complex(dead)
    assert column_dict(cx, 0) == {("H", "b"): 1, ("H", "a"): -1}


def test_checker_complex(checker):
    cx = build_ap_complex(checker)
    assert cx.m == 4
    assert column_dict(cx, 0) == {("H", "2"): 1, ("H", "1"): -1, ("V", "4"): 1, ("V", "3"): -1}
    assert all(a == -b for a, b in zip(cx.column(0), cx.column(1)))


def test_columns_match_the_column_rule():
    rng = random.Random(3)
    for _ in range(50):
        ts = uniform_set(rng)
        cx = build_ap_complex(ts)
        for j, t in enumerate(ts.tiles):
            assert column_dict(cx, j) == wang_column(t)


def test_switching_rules_mono(mono):
    rules = switching_rules(build_ap_complex(mono))
    assert len(rules) == 2
    assert all(not any(eq.coeffs) for eq in rules)
    assert rules[0].format(["T"]) == "edge H:a : 0 = 0"


def test_switching_rules_dead(dead):
    cx = build_ap_complex(dead)
    texts = [eq.format(cx.cells2) for eq in switching_rules(cx)]
    assert "edge H:a : -1*T = 0" in texts


def test_switching_rules_checker(checker):
    cx = build_ap_complex(checker)
    rules = switching_rules(cx)
    assert len(rules) == 4
    # each says c_A = c_B
    assert all(eq.coeffs in ((1, -1), (-1, 1)) for eq in rules)


@pytest.mark.parametrize("name,dim,basis", [("mono", 1, [(1,)]), ("dead", 0, []), ("checker", 1, [(1, 1)])])
def test_cycle_space(name, dim, basis, request):
    ts = request.getfixturevalue(name)
    got = cycle_space_basis(build_ap_complex(ts))
    assert len(got) == dim == kernel_dimension(ts)
    assert [tuple(v) for v in got] == basis


def test_kernel_dimension_against_sympy():
    rng = random.Random(4)
    for _ in range(60):
        ts = uniform_set(rng, max_tiles=4)
        cx = build_ap_complex(ts)
        basis = cycle_space_basis(cx)
        assert len(basis) == kernel_dimension(ts)
        assert all(is_cycle(cx, v) for v in basis)


def test_is_cycle(mono, checker):
    assert is_cycle(build_ap_complex(mono), (1,))
    cx = build_ap_complex(checker)
    assert not is_cycle(cx, (1, 0))
    assert is_cycle(cx, (0, 0))
    with pytest.raises(DimensionMismatch):
        is_cycle(cx, (1,))


def test_cone_mono(mono):
    res = nonneg_cycle_exists(build_ap_complex(mono))
    assert res.exists and res.witness == (1,)


def test_cone_dead(dead):
    cx = build_ap_complex(dead)
    res = nonneg_cycle_exists(cx)
    assert not res.exists
    assert check_empty_cone_certificate(cx, res.certificate)
    # a certificate that proves nothing is rejected
    assert not check_empty_cone_certificate(cx, tuple(0 for _ in res.certificate))


def test_cone_checker(checker):
    res = nonneg_cycle_exists(build_ap_complex(checker))
    assert res.exists and res.witness == (HALF, HALF)


@pytest.mark.parametrize(
    "name,points", [("mono", [(1,)]), ("checker", [(HALF, HALF)]), ("dead", [])]
)
def test_extreme_points_examples(name, points, request):
    ts = request.getfixturevalue(name)
    desc = simplex_extreme_points(build_ap_complex(ts))
    assert desc.extreme_points == points == simplex_vertices(ts)
    assert desc.empty == (not points)


def test_extreme_points_against_support_enumeration():
    rng = random.Random(5)
    for _ in range(40):
        ts = uniform_set(rng, max_tiles=4)
        cx = build_ap_complex(ts)
        desc = simplex_extreme_points(cx)
        assert desc.extreme_points == simplex_vertices(ts)
        for v in desc.extreme_points:
            assert is_cycle(cx, v) and min(v) >= 0 and sum(v) == 1 and is_vertex(cx, v)
        assert nonneg_cycle_exists(cx).exists == bool(desc.extreme_points)


def test_is_vertex_rejects_midpoints():
    # two independent tiles: both unit vectors are vertices, their midpoint is not
    from wangnorm.tileset import WangTile, WangTileSet

    ts = WangTileSet("X", [WangTile("a", "1", "1", "1", "1"), WangTile("b", "2", "2", "2", "2")])
    cx = build_ap_complex(ts)
    assert is_vertex(cx, (1, 0)) and is_vertex(cx, (0, 1))
    assert not is_vertex(cx, (HALF, HALF))


def test_extreme_point_budget():
    from wangnorm.tileset import WangTile, WangTileSet

    tiles = [WangTile(f"t{i}", str(i % 3), str((i * 7) % 3), str(i % 2), str((i // 2) % 2)) for i in range(8)]
    cx = build_ap_complex(WangTileSet("X", tiles))
    with pytest.raises(BudgetExhausted) as info:
        simplex_extreme_points(cx, budget=1)
    assert info.value.partial is not None and not info.value.partial.complete


def test_polygon_complex_square():
    sq = PolygonPrototile("P", [(0, 0), (1, 0), (1, 1), (0, 1)], "abab")
    cx = build_ap_complex(PolygonPrototileSet("S", [sq]))
    # bottom and top share a 1-cell with opposite orientations, likewise left and right
    assert cx.m == 2
    assert cx.column(0) == (0, 0)
    assert cx.max_vertices == 4


def test_polygon_complex_distinguishes_directions():
    tri = PolygonPrototile("T", [(0, 0), (1, 0), (0, 1)], "aaa")
    cx = build_ap_complex(PolygonPrototileSet("S", [tri]))
    assert cx.m == 3
    assert cx.max_vertices == 3
