"""From polygon prototiles to Wang tiles, and color forgetting.

The pipeline is: ``scale_to_integral`` (homothety by the lcm of all
coordinate denominators), ``zigzag`` (replace every edge by a lattice
staircase of unit steps), ``encode_as_wang`` (one Wang tile per unit square;
interior seams get private colors so a prototile can only be reassembled
rigidly, boundary unit edges keep the original color plus their position
along the original edge).

Staircase rule, for an edge from A to B: walk unit steps toward B, only ever
visiting lattice points weakly below the line AB; among the admissible steps
take the one ending closest to the line, preferring the x step on ties.  The
point set of the staircase depends only on the segment, not on the direction
of traversal, and commutes with integer translations, so edges that are
glued in a tiling receive identical staircases.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import DegenerateAfterZigzag, NonConvexInput, NotIntegral
from .tileset import (
    PolygonPrototile,
    PolygonPrototileSet,
    WangTile,
    WangTileSet,
    signed_area,
)


def forget_colors(tileset):
    """Same tiles and order, every edge recolored with one fresh color."""
    used = set(tileset.colors())
    blank = "blank"
    while blank in used:
        blank += "'"
    return WangTileSet(tileset.name, [WangTile(t.id, blank, blank, blank, blank) for t in tileset.tiles])


def scale_to_integral(polyset):
    scale = 1
    for p in polyset.polys:
        for x, y in p.vertices:
            scale = lcm(scale, x.denominator, y.denominator)
    polys = [
        PolygonPrototile(p.id, [(x * scale, y * scale) for x, y in p.vertices], p.edge_colors)
        for p in polyset.polys
    ]
    return PolygonPrototileSet(polyset.name, polys), scale


def staircase(a, b):
    """Lattice points of the canonical unit-step path from ``a`` to ``b`` (both included)."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    sx = (dx > 0) - (dx < 0)
    sy = (dy > 0) - (dy < 0)

    def offset(x, y):
        # signed vertical offset from the line, scaled by |dx|; <= 0 means weakly below
        return (dx * (y - ay) - dy * (x - ax)) * sx

    x, y = ax, ay
    pts = [(x, y)]
    while (x, y) != (bx, by):
        options = []
        if x != bx:
            options.append((0, (x + sx, y)))
        if y != by:
            options.append((1, (x, y + sy)))
        if dx != 0 and len(options) == 2:
            below = [o for o in options if offset(*o[1]) <= 0]
            options = below or options
            options.sort(key=lambda o: (-offset(*o[1]), o[0]))
        x, y = options[0][1]
        pts.append((x, y))
    return pts


@dataclass(frozen=True)
class UnitEdge:
    start: tuple
    end: tuple
    color: str
    source_edge: int  # index of the edge in the original polygon
    offset: int  # position counted from the original edge's start vertex
    index: int  # position counted from the lexicographically smaller endpoint


@dataclass
class ZigzagPolygonSet:
    polyset: PolygonPrototileSet
    edges: dict  # polygon id -> list of UnitEdge, in boundary order

    def provenance(self, pid):
        return [(e.source_edge, e.offset) for e in self.edges[pid]]


def _is_convex(vertices):
    n = len(vertices)
    for i in range(n):
        (x0, y0), (x1, y1), (x2, y2) = vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]
        if (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1) < 0:
            return False
    return True


def zigzag(polyset):
    polys, edges = [], {}
    for p in polyset.polys:
        if any(v.denominator != 1 for xy in p.vertices for v in xy):
            raise NotIntegral(f"polygon {p.id!r} has non-integral vertices; scale it first")
        if not _is_convex(p.vertices):
            raise NonConvexInput(f"polygon {p.id!r} is not convex")
        verts = [(int(x), int(y)) for x, y in p.vertices]
        path, units = [], []
        for i, color in enumerate(p.edge_colors):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            pts = staircase(a, b) if a < b else staircase(b, a)[::-1]
            steps = len(pts) - 1
            for k in range(steps):
                idx = k if a < b else steps - 1 - k
                units.append(UnitEdge(pts[k], pts[k + 1], color, i, k, idx))
            path.extend(pts[:-1])
        if len(set(path)) != len(path):
            raise DegenerateAfterZigzag(f"staircase boundary of polygon {p.id!r} touches itself")
        if signed_area(path) <= 0:
            raise DegenerateAfterZigzag(f"staircase boundary of polygon {p.id!r} encloses no area")
        polys.append(PolygonPrototile(p.id, path, [u.color for u in units]))
        edges[p.id] = units
    return ZigzagPolygonSet(PolygonPrototileSet(polyset.name, polys), edges)


def _inside(path, px2, py2):
    """Crossing-number test for the point (px2/2, py2/2), never on the boundary."""
    inside = False
    n = len(path)
    for i in range(n):
        x0, y0 = path[i]
        x1, y1 = path[(i + 1) % n]
        x0, y0, x1, y1 = 2 * x0, 2 * y0, 2 * x1, 2 * y1
        if (y0 > py2) != (y1 > py2):
            xc = x0 + Fraction((py2 - y0) * (x1 - x0), y1 - y0)
            if px2 < xc:
                inside = not inside
    return inside


@dataclass
class EncodingMap:
    tiles: dict = field(default_factory=dict)  # tile id -> (polygon id, (dx, dy))
    colors: dict = field(default_factory=dict)  # color -> ("seam", pid, desc) | ("edge", color, index)

    @property
    def seam_colors(self):
        return [c for c, v in self.colors.items() if v[0] == "seam"]

    def report_lines(self):
        lines = []
        for tid, (pid, (dx, dy)) in self.tiles.items():
            lines.append(f"tilemap {tid} poly={pid} offset={dx},{dy}")
        for color, prov in self.colors.items():
            if prov[0] == "seam":
                lines.append(f"colormap {color} seam={prov[1]}:{prov[2]}")
            else:
                lines.append(f"colormap {color} edge={prov[1]} index={prov[2]}")
        return lines


def boundary_color(color, index):
    return f"({color},{index})"


def encode_as_wang(zset):
    tiles = []
    emap = EncodingMap()
    for p in zset.polyset.polys:
        units = zset.edges[p.id]
        path = [u.start for u in units]
        ox, oy = path[0]
        on_boundary = {}
        for u in units:
            on_boundary[frozenset((u.start, u.end))] = boundary_color(u.color, u.index)
            emap.colors.setdefault(boundary_color(u.color, u.index), ("edge", u.color, u.index))
        xs = [x for x, _ in path]
        ys = [y for _, y in path]
        squares = [
            (x, y)
            for y in range(min(ys), max(ys))
            for x in range(min(xs), max(xs))
            if _inside(path, 2 * x + 1, 2 * y + 1)
        ]
        if len(squares) != signed_area(path):
            raise DegenerateAfterZigzag(f"polygon {p.id!r}: square count differs from area")

        def color(a, b, kind):
            key = frozenset((a, b))
            if key in on_boundary:
                return on_boundary[key]
            lo = min(a, b)
            desc = f"{kind}{lo[0] - ox},{lo[1] - oy}"
            name = f"seam:{p.id}:{desc}"
            emap.colors.setdefault(name, ("seam", p.id, desc))
            return name

        for x, y in squares:
            tid = f"{p.id}@{x - ox},{y - oy}"
            tiles.append(
                WangTile(
                    tid,
                    top=color((x, y + 1), (x + 1, y + 1), "h"),
                    bottom=color((x, y), (x + 1, y), "h"),
                    left=color((x, y), (x, y + 1), "v"),
                    right=color((x + 1, y), (x + 1, y + 1), "v"),
                )
            )
            emap.tiles[tid] = (p.id, (x - ox, y - oy))
    return WangTileSet(zset.polyset.name, tiles), emap


def squareify(polyset):
    """scale_to_integral, zigzag and encode_as_wang in one go."""
    scaled, scale = scale_to_integral(polyset)
    zset = zigzag(scaled)
    wang, emap = encode_as_wang(zset)
    return wang, emap, scale
