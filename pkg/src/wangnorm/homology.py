"""Anderson-Putnam complexes, switching rules and the cone of non-negative 2-cycles.

A 2-cell is a prototile with its counter-clockwise orientation.  A 1-cell is
a class of edges that get identified: for Wang tiles one class per
(axis, color); for polygons one class per (color, translation class).  Cells
of dimension one are oriented toward +x (horizontal) and +y (vertical), or
from the lexicographically smaller endpoint to the larger one for polygon
edges.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from . import linalg
from .errors import BudgetExhausted, DimensionMismatch
from .tileset import PolygonPrototileSet, WangTileSet

DEFAULT_RAY_BUDGET = 20000


@dataclass(frozen=True)
class APComplex:
    kind: str  # "wang" or "polygon"
    cells2: tuple
    cells1: tuple
    boundary: tuple  # rows indexed by cells1, columns by cells2
    max_vertices: int
    source: object = None

    @property
    def n(self):
        return len(self.cells2)

    @property
    def m(self):
        return len(self.cells1)

    def column(self, j):
        return tuple(row[j] for row in self.boundary)

    def boundary_of(self, chain):
        if len(chain) != self.n:
            raise DimensionMismatch(f"chain has {len(chain)} coordinates, complex has {self.n} 2-cells")
        return tuple(linalg.matvec(self.boundary, chain))


def cell1_label(key):
    if key[0] in ("H", "V"):
        return f"{key[0]}:{key[1]}"
    _, color, (dx, dy) = key
    return f"{dx},{dy}:{color}"


def build_ap_complex(tileset):
    if isinstance(tileset, WangTileSet):
        return _build_wang(tileset)
    if isinstance(tileset, PolygonPrototileSet):
        return _build_polygon(tileset)
    raise TypeError(f"not a tile set: {type(tileset).__name__}")


def _build_wang(ws):
    h, v = {}, {}
    for t in ws.tiles:
        h.setdefault(("H", t.bottom), None)
        h.setdefault(("H", t.top), None)
    for t in ws.tiles:
        v.setdefault(("V", t.left), None)
        v.setdefault(("V", t.right), None)
    cells1 = list(h) + list(v)
    row = {key: i for i, key in enumerate(cells1)}
    B = [[0] * len(ws) for _ in cells1]
    for j, t in enumerate(ws.tiles):
        B[row[("H", t.bottom)]][j] += 1
        B[row[("H", t.top)]][j] -= 1
        B[row[("V", t.right)]][j] += 1
        B[row[("V", t.left)]][j] -= 1
    return APComplex(
        kind="wang",
        cells2=tuple(ws.ids),
        cells1=tuple(cells1),
        boundary=tuple(tuple(r) for r in B),
        max_vertices=4,
        source=ws,
    )


def _build_polygon(ps):
    keys = {}
    entries = []
    for j, p in enumerate(ps.polys):
        for (a, b), color in zip(p.edges(), p.edge_colors):
            lo, hi = (a, b) if a < b else (b, a)
            key = ("E", color, (hi[0] - lo[0], hi[1] - lo[1]))
            keys.setdefault(key, len(keys))
            entries.append((keys[key], j, 1 if a < b else -1))
    B = [[0] * len(ps) for _ in keys]
    for i, j, s in entries:
        B[i][j] += s
    return APComplex(
        kind="polygon",
        cells2=tuple(ps.ids),
        cells1=tuple(keys),
        boundary=tuple(tuple(r) for r in B),
        max_vertices=max(len(p.vertices) for p in ps.polys),
        source=ps,
    )


class Equation(NamedTuple):
    cell: tuple
    coeffs: tuple  # integer coefficient per 2-cell

    def format(self, ids):
        terms = [f"{'+' if c > 0 else '-'}{abs(c)}*{tid}" for c, tid in zip(self.coeffs, ids) if c]
        return f"edge {cell1_label(self.cell)} : {' '.join(terms) if terms else '0'} = 0"


def switching_rules(cx):
    return [Equation(cell, row) for cell, row in zip(cx.cells1, cx.boundary)]


def cycle_space_basis(cx):
    return linalg.nullspace([list(r) for r in cx.boundary], cx.n)


def is_cycle(cx, chain):
    return all(v == 0 for v in cx.boundary_of(chain))


class ConeCheck(NamedTuple):
    exists: bool
    witness: Optional[tuple]
    certificate: Optional[tuple]  # one rational per row of [boundary; ones]


def _cone_system(cx):
    A = [list(r) for r in cx.boundary] + [[1] * cx.n]
    b = [0] * cx.m + [1]
    return A, b


def nonneg_cycle_exists(cx):
    """Decide whether a non-negative cycle with coordinate sum 1 exists.

    On failure the certificate ``y`` satisfies ``y^T [boundary; 1] <= 0`` with
    ``y_last > 0``; equivalently the switching-rule combination
    ``y[:-1]^T boundary`` is <= -y_last < 0 on every coordinate, which forces
    every non-negative cycle to vanish.
    """
    A, b = _cone_system(cx)
    res = linalg.feasible_point(A, b)
    if res.feasible:
        return ConeCheck(True, res.point, None)
    return ConeCheck(False, None, res.certificate)


def check_empty_cone_certificate(cx, certificate):
    A, b = _cone_system(cx)
    return linalg.check_farkas(A, b, certificate)


@dataclass
class ConeDescription:
    dimension: int
    basis: list
    extreme_points: list
    empty: bool
    complete: bool = True


def is_vertex(cx, point):
    """Rank certificate: ``point`` spans a 1-dimensional face of the cone."""
    zeros = [j for j, v in enumerate(point) if v == 0]
    rows = [list(r) for r in cx.boundary] + [[int(k == j) for k in range(cx.n)] for j in zeros]
    return linalg.rank(rows, cx.n) == cx.n - 1


def simplex_extreme_points(cx, budget=DEFAULT_RAY_BUDGET):
    """Vertices of {c : boundary c = 0, c >= 0, sum c = 1} by double description.

    Starts from the extreme rays of the non-negative orthant and cuts by one
    switching rule at a time.  ``budget`` bounds the number of candidate rays
    ever held; exceeding it raises :class:`BudgetExhausted` whose ``partial``
    is a ConeDescription flagged incomplete.
    """
    basis = cycle_space_basis(cx)
    n = cx.n
    rays = [(tuple(int(i == j) for i in range(n)), frozenset(k for k in range(n) if k != j)) for j in range(n)]
    for row in cx.boundary:
        if not any(row):
            continue
        pos, neg, zero = [], [], []
        for r in rays:
            s = sum(a * x for a, x in zip(row, r[0]))
            (pos if s > 0 else neg if s < 0 else zero).append((r, s))
        new = [r for r, _ in zero]
        for rp, sp in pos:
            for rn, sn in neg:
                common = rp[1] & rn[1]
                if not _adjacent(rays, rp, rn, common):
                    continue
                vec = tuple(sp * xn - sn * xp for xp, xn in zip(rp[0], rn[0]))
                new.append((linalg.primitive(vec), common))
                if len(new) > budget:
                    raise BudgetExhausted(
                        f"double description exceeded {budget} rays",
                        partial=ConeDescription(len(basis), basis, [], False, complete=False),
                    )
        rays = new
    points = sorted({tuple(Fraction(x, sum(v)) for x in v) for v, _ in rays})
    return ConeDescription(len(basis), basis, points, empty=not points)


def _adjacent(rays, r, s, common):
    for t in rays:
        if t is r or t is s:
            continue
        if common <= t[1]:
            return False
    return True
