"""Enforced colors: legal centered patterns, the collared tile set W^p, and the
tileability driver.

A pattern of radius ``p`` is a legal filling of the (2p+1) x (2p+1) square
around a center tile.  The tile of W^p built from a pattern carries, as edge
colors, the overlap strips it shares with its would-be neighbors: its right
color is the pattern restricted to columns -p+1..p and its left color to
columns -p..p-1 (rows likewise for top and bottom).  Two W^p tiles therefore
abut exactly when their patterns agree after a shift by one.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from . import linalg
from .asymptotic import asymptotic_norm_upper
from .errors import BudgetExhausted, DimensionMismatch, EmptyPatternSet, NoTorus
from .homology import (
    build_ap_complex,
    check_empty_cone_certificate,
    is_cycle,
    nonneg_cycle_exists,
    simplex_extreme_points,
)
from .surface import extract_periodic_tiling, find_torus
from .tileset import WangTile, WangTileSet

DEFAULT_MAX_P = 2
DEFAULT_PATTERN_BUDGET = 200_000
DEFAULT_MAX_PERIOD_AREA = 8


@dataclass(frozen=True)
class Pattern:
    p: int
    grid: tuple  # grid[y + p][x + p] = tile index

    def at(self, x, y):
        return self.grid[y + self.p][x + self.p]

    def is_legal(self, tileset):
        tiles = tileset.tiles
        size = 2 * self.p + 1
        for r in range(size):
            for q in range(size):
                t = tiles[self.grid[r][q]]
                if q + 1 < size and t.right != tiles[self.grid[r][q + 1]].left:
                    return False
                if r + 1 < size and t.top != tiles[self.grid[r + 1][q]].bottom:
                    return False
        return True


@dataclass
class PatternSet:
    tileset: WangTileSet
    p: int
    by_center: list  # one list of Patterns per tile, in tile order
    complete: bool = True
    nodes: int = 0

    @property
    def count(self):
        return sum(len(v) for v in self.by_center)

    def counts(self):
        return [len(v) for v in self.by_center]


def _index(tiles):
    by_left, by_bottom, by_both = {}, {}, {}
    for i, t in enumerate(tiles):
        by_left.setdefault(t.left, []).append(i)
        by_bottom.setdefault(t.bottom, []).append(i)
        by_both.setdefault((t.left, t.bottom), []).append(i)
    return by_left, by_bottom, by_both


def enumerate_patterns(tileset, p, budget=DEFAULT_PATTERN_BUDGET):
    """All legal (2p+1)^2 patterns, grouped by center tile.

    Cells are filled row by row from the bottom-left corner.  A placement is
    kept only if the cell above and the cell to the right can still receive
    some tile (and the center tile, when that neighbor is the center).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    tiles = tileset.tiles
    size = 2 * p + 1
    center = (p, p)
    by_left, by_bottom, by_both = _index(tiles)
    everything = list(range(len(tiles)))
    grid = [[None] * size for _ in range(size)]
    found = [[] for _ in tiles]
    nodes = 0

    def candidates(r, q):
        if q > 0 and r > 0:
            return by_both.get((tiles[grid[r][q - 1]].right, tiles[grid[r - 1][q]].top), [])
        if q > 0:
            return by_left.get(tiles[grid[r][q - 1]].right, [])
        if r > 0:
            return by_bottom.get(tiles[grid[r - 1][q]].top, [])
        return everything

    def lookahead(r, q, t):
        tile = tiles[t]
        if r + 1 < size and (r + 1, q) != center and tile.top not in by_bottom:
            return False
        if q + 1 < size and (r, q + 1) != center and tile.right not in by_left:
            return False
        return True

    def rec(k):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if k == size * size:
            pat = Pattern(p, tuple(tuple(row) for row in grid))
            found[grid[p][p]].append(pat)
            return
        r, q = divmod(k, size)
        for t in candidates(r, q):
            if lookahead(r, q, t):
                grid[r][q] = t
                rec(k + 1)
        grid[r][q] = None

    try:
        rec(0)
    except _OutOfBudget:
        raise BudgetExhausted(
            f"pattern enumeration at p={p} exceeded {budget} nodes",
            partial=PatternSet(tileset, p, found, complete=False, nodes=nodes),
        ) from None
    return PatternSet(tileset, p, found, complete=True, nodes=nodes)


class _OutOfBudget(Exception):
    pass


def pattern_exists_bruteforce(tileset, p, max_rows=10**6):
    """Independent check: stack horizontally legal rows of width 2p+1."""
    tiles = tileset.tiles
    size = 2 * p + 1
    if len(tiles) ** size > max_rows:
        raise ValueError("too many rows for the brute-force checker")
    rows = [
        row
        for row in itertools.product(range(len(tiles)), repeat=size)
        if all(tiles[a].right == tiles[b].left for a, b in zip(row, row[1:]))
    ]

    def fits(lower, upper):
        return all(tiles[a].top == tiles[b].bottom for a, b in zip(lower, upper))

    def rec(depth, prev):
        if depth == size:
            return True
        return any(rec(depth + 1, row) for row in rows if prev is None or fits(prev, row))

    return rec(0, None)


def _strip(pattern, cols, rows):
    return "/".join(",".join(str(pattern.at(x, y)) for x in cols) for y in rows)


def wp_tile_ids(ps):
    ids = []
    for j, pats in enumerate(ps.by_center):
        ids.extend(f"{ps.tileset.tiles[j].id}.{l}" for l in range(1, len(pats) + 1))
    return ids


def build_wp_tileset(ps):
    if not ps.complete:
        raise BudgetExhausted("pattern set is incomplete")
    if ps.count == 0:
        raise EmptyPatternSet(f"no legal pattern of radius {ps.p}")
    p = ps.p
    full = range(-p, p + 1)
    lo = range(-p, p)
    hi = range(-p + 1, p + 1)
    tiles = []
    for j, pats in enumerate(ps.by_center):
        for l, pat in enumerate(pats, start=1):
            tiles.append(
                WangTile(
                    f"{ps.tileset.tiles[j].id}.{l}",
                    top=_strip(pat, full, hi),
                    bottom=_strip(pat, full, lo),
                    left=_strip(pat, lo, full),
                    right=_strip(pat, hi, full),
                )
            )
    return WangTileSet(f"{ps.tileset.name}^{p}", tiles)


def project_cycle(ps, chain):
    """Sum the coordinates of all W^p tiles sharing a center tile."""
    if len(chain) != ps.count:
        raise DimensionMismatch(f"chain has {len(chain)} coordinates, W^{ps.p} has {ps.count} tiles")
    out = []
    k = 0
    for pats in ps.by_center:
        out.append(sum((Fraction(v) for v in chain[k : k + len(pats)]), Fraction(0)))
        k += len(pats)
    return tuple(out)


class Membership(NamedTuple):
    member: bool
    witness: Optional[tuple]  # coordinates over W^p tiles
    certificate: Optional[tuple]  # Farkas vector over the rows of the membership system
    patterns: PatternSet


def surviving_tiles(tiles):
    """Indices of tiles that can carry weight in a non-negative cycle.

    A tile whose bottom color is nobody's top color (or likewise for the other
    three sides) is zero in every non-negative cycle, by the switching rule of
    that edge.  Removing such tiles and repeating reaches the set returned here.
    """
    alive = list(range(len(tiles)))
    while True:
        tops = {tiles[i].top for i in alive}
        bottoms = {tiles[i].bottom for i in alive}
        lefts = {tiles[i].left for i in alive}
        rights = {tiles[i].right for i in alive}
        keep = [
            i
            for i in alive
            if tiles[i].bottom in tops
            and tiles[i].top in bottoms
            and tiles[i].left in rights
            and tiles[i].right in lefts
        ]
        if len(keep) == len(alive):
            return keep
        alive = keep


def _membership_system(ps, c):
    """Sparse columns (over surviving W^p tiles), right-hand side, column indices.

    Rows are the switching rules of the W^p edges that surviving tiles use, in
    order of first use, followed by one projection row per original tile.
    """
    wp = build_wp_tileset(ps).tiles if ps.count else ()
    centers = [j for j, pats in enumerate(ps.by_center) for _ in pats]
    alive = surviving_tiles(wp)
    rows = {}
    columns = []
    for i in alive:
        t = wp[i]
        col = {}
        for key, sign in ((("H", t.bottom), 1), (("H", t.top), -1), (("V", t.right), 1), (("V", t.left), -1)):
            r = rows.setdefault(key, len(rows))
            col[r] = col.get(r, 0) + sign
        columns.append({r: v for r, v in col.items() if v})
    base = len(rows)
    for col, i in zip(columns, alive):
        col[base + centers[i]] = 1
    b = [Fraction(0)] * base + [Fraction(v) for v in c]
    return columns, b, alive


def cycle_in_projected_cone(tileset, c, p, budget=DEFAULT_PATTERN_BUDGET, patterns=None):
    """Is ``c`` the projection of a non-negative cycle of the W^p complex?"""
    if len(c) != len(tileset):
        raise DimensionMismatch(f"cycle has {len(c)} coordinates, tile set has {len(tileset)} tiles")
    ps = patterns if patterns is not None else enumerate_patterns(tileset, p, budget)
    columns, b, alive = _membership_system(ps, c)
    res = linalg.sparse_feasible_point(columns, b)
    if res.feasible:
        x = [Fraction(0)] * ps.count
        for i, v in zip(alive, res.point):
            x[i] = v
        return Membership(True, tuple(x), None, ps)
    return Membership(False, None, res.certificate, ps)


def check_membership_certificate(tileset, c, ps, certificate):
    columns, b, _ = _membership_system(ps, c)
    return linalg.check_farkas_sparse(columns, b, certificate)


# -- verdicts -------------------------------------------------------------------

CANNOT_TILE = "CANNOT_TILE"
TILES_PERIODICALLY = "TILES_PERIODICALLY"
UNDECIDED = "UNDECIDED"


@dataclass
class Verdict:
    kind: str
    reason: str = ""  # EmptyCone | NoPattern | PeriodicTiling | Budget
    certificate: object = None
    p: Optional[int] = None
    evidence: list = field(default_factory=list)

    def report_lines(self):
        lines = [f"verdict {self.kind}"]
        if self.kind == CANNOT_TILE and self.reason == "EmptyCone":
            lines.append("certificate EmptyCone " + " ".join(str(v) for v in self.certificate))
        elif self.kind == CANNOT_TILE:
            lines.append(f"certificate NoPattern p={self.p}")
        elif self.kind == TILES_PERIODICALLY:
            lines.append("certificate PeriodicTiling")
            lines.extend(self.certificate.report_lines())
        lines.extend(self.evidence)
        return lines


def nonneg_cycles_of_norm(cx, total):
    """Non-negative integral cycles with coordinate sum ``total``, lexicographic order."""
    n = cx.n

    def comps(k, left):
        if k == n - 1:
            yield (left,)
            return
        for v in range(left + 1):
            for rest in comps(k + 1, left - v):
                yield (v, *rest)

    for c in comps(0, total):
        if is_cycle(cx, c):
            yield c


def search_periodic(tileset, areas, budget):
    """First flat torus over cycles with the given coordinate sums, or None."""
    cx = build_ap_complex(tileset)
    for area in areas:
        for c in nonneg_cycles_of_norm(cx, area):
            try:
                surface = find_torus(cx, c, budget=budget)
            except (NoTorus, BudgetExhausted):
                continue
            return extract_periodic_tiling(surface, base=0)
    return None


def tileability(
    tileset,
    max_p=DEFAULT_MAX_P,
    budget=DEFAULT_PATTERN_BUDGET,
    max_period_area=DEFAULT_MAX_PERIOD_AREA,
    norm_rows=2,
):
    """Run the cone test, then alternate pattern checks with periodic searches.

    Round ``p`` (1..max_p) first enumerates radius-p patterns (an exhaustive
    empty result proves the set cannot tile), then looks for flat tori over
    cycles whose coordinate sum lies in the p-th slice of 1..max_period_area.
    Without a conclusion the verdict is UNDECIDED, with the evidence gathered.
    """
    cx = build_ap_complex(tileset)
    cone = nonneg_cycle_exists(cx)
    if not cone.exists:
        return Verdict(CANNOT_TILE, "EmptyCone", cone.certificate)
    chunk = -(-max_period_area // max_p)
    complete_sets = []
    evidence = []
    patterns_ok = True
    for p in range(1, max_p + 1):
        if patterns_ok:
            try:
                ps = enumerate_patterns(tileset, p, budget)
            except BudgetExhausted:
                patterns_ok = False
                evidence.append(f"evidence p={p} patterns=budget-exhausted")
            else:
                if ps.count == 0:
                    return Verdict(CANNOT_TILE, "NoPattern", None, p=p)
                complete_sets.append(ps)
        areas = range((p - 1) * chunk + 1, min(p * chunk, max_period_area) + 1)
        tiling = search_periodic(tileset, areas, budget)
        if tiling is not None:
            return Verdict(TILES_PERIODICALLY, "PeriodicTiling", tiling)

    try:
        desc = simplex_extreme_points(cx)
        extremes = desc.extreme_points
    except BudgetExhausted:
        extremes = []
        evidence.append("evidence extreme_points=budget-exhausted")
    for ps in complete_sets:
        parts = [f"evidence p={ps.p} patterns={ps.count}"]
        for i, c in enumerate(extremes):
            try:
                m = cycle_in_projected_cone(tileset, c, ps.p, budget, patterns=ps)
                parts.append(f"cone_member({i})={'true' if m.member else 'false'}")
            except BudgetExhausted:
                parts.append(f"cone_member({i})=budget-exhausted")
        evidence.append(" ".join(parts))
    for i, c in enumerate(extremes):
        table = asymptotic_norm_upper(cx, c, max_n=norm_rows, budget=budget)
        best = table.best_upper
        evidence.append(f"evidence extreme_point({i}) best_upper={'none' if best is None else best}")
    return Verdict(UNDECIDED, "Budget", None, evidence=evidence)


def verify_verdict(tileset, verdict):
    """Re-check a verdict's certificate without repeating its search."""
    if verdict.kind == CANNOT_TILE and verdict.reason == "EmptyCone":
        return check_empty_cone_certificate(build_ap_complex(tileset), verdict.certificate)
    if verdict.kind == CANNOT_TILE:
        return not pattern_exists_bruteforce(tileset, verdict.p)
    if verdict.kind == TILES_PERIODICALLY:
        return not verdict.certificate.problems(tileset)
    return True
