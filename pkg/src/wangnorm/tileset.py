"""Wang tile sets and polygon prototile sets: data model, parsing, serialization.

Wang format (UTF-8, line based, ``#`` starts a comment)::

    tileset CHECKER
    tile A N=1 S=2 E=4 W=3
    tile B N=2 S=1 E=3 W=4

Polygon format::

    polyset SQUARE
    poly P
    vertex 0 0
    vertex 1 0
    vertex 1 1
    vertex 0 1
    edgecolor 0 s
    edgecolor 1 e
    edgecolor 2 n
    edgecolor 3 w

Edge ``i`` of a polygon runs from vertex ``i`` to vertex ``i+1`` (cyclically).
Colors and ids are opaque whitespace-free tokens compared by exact equality.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ClockwisePolygon,
    DimensionMismatch,
    DuplicateId,
    EdgeColorCountMismatch,
    EmptySet,
    NonSimplePolygon,
    TileSyntaxError,
)

SIDES = ("N", "S", "E", "W")


@dataclass(frozen=True)
class WangTile:
    id: str
    top: str
    bottom: str
    left: str
    right: str

    def color(self, side):
        return {"N": self.top, "S": self.bottom, "E": self.right, "W": self.left}[side]


@dataclass(frozen=True)
class WangTileSet:
    name: str
    tiles: tuple

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if not self.tiles:
            raise EmptySet("a tile set needs at least one tile")
        seen = set()
        for t in self.tiles:
            if t.id in seen:
                raise DuplicateId(f"duplicate tile id {t.id!r}")
            seen.add(t.id)

    def __len__(self):
        return len(self.tiles)

    @property
    def ids(self):
        return [t.id for t in self.tiles]

    def index(self, tile_id):
        for i, t in enumerate(self.tiles):
            if t.id == tile_id:
                return i
        raise KeyError(tile_id)

    def colors(self):
        """All colors used, in order of first appearance."""
        out = {}
        for t in self.tiles:
            for c in (t.top, t.bottom, t.right, t.left):
                out.setdefault(c, None)
        return list(out)


@dataclass(frozen=True)
class PolygonPrototile:
    id: str
    vertices: tuple
    edge_colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((Fraction(x), Fraction(y)) for x, y in self.vertices))
        object.__setattr__(self, "edge_colors", tuple(self.edge_colors))
        if len(self.edge_colors) != len(self.vertices):
            raise EdgeColorCountMismatch(
                f"polygon {self.id!r}: {len(self.vertices)} vertices but {len(self.edge_colors)} edge colors"
            )
        check_simple_ccw(self.id, self.vertices)

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    @property
    def area(self):
        return signed_area(self.vertices)


@dataclass(frozen=True)
class PolygonPrototileSet:
    name: str
    polys: tuple

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise EmptySet("a polygon set needs at least one polygon")
        seen = set()
        for p in self.polys:
            if p.id in seen:
                raise DuplicateId(f"duplicate polygon id {p.id!r}")
            seen.add(p.id)

    def __len__(self):
        return len(self.polys)

    @property
    def ids(self):
        return [p.id for p in self.polys]


# -- geometry helpers ---------------------------------------------------------


def signed_area(vertices):
    n = len(vertices)
    s = Fraction(0)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, p):
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a, b, c, d):
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and _on_segment(a, b, c))
        or (o2 == 0 and _on_segment(a, b, d))
        or (o3 == 0 and _on_segment(c, d, a))
        or (o4 == 0 and _on_segment(c, d, b))
    )


def check_simple_ccw(pid, vertices):
    n = len(vertices)
    if n < 3:
        raise NonSimplePolygon(f"polygon {pid!r} has fewer than 3 vertices")
    if len(set(vertices)) != n:
        raise NonSimplePolygon(f"polygon {pid!r} repeats a vertex")
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = edges[i]
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share one endpoint; they must not fold back
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                if _orient(other_i, shared, other_j) == 0:
                    u = (other_i[0] - shared[0], other_i[1] - shared[1])
                    v = (other_j[0] - shared[0], other_j[1] - shared[1])
                    if u[0] * v[0] + u[1] * v[1] > 0:
                        raise NonSimplePolygon(f"polygon {pid!r}: edges {i} and {j} overlap")
                continue
            if segments_intersect(a, b, c, d):
                raise NonSimplePolygon(f"polygon {pid!r}: edges {i} and {j} intersect")
    area = signed_area(vertices)
    if area == 0:
        raise NonSimplePolygon(f"polygon {pid!r} has zero area")
    if area < 0:
        raise ClockwisePolygon(f"polygon {pid!r} is listed clockwise")


def is_translate(e1, e2):
    """True iff segment ``e2`` is a translate of segment ``e1`` (as point sets)."""
    (a, b), (c, d) = e1, e2
    v1 = (b[0] - a[0], b[1] - a[1])
    v2 = (d[0] - c[0], d[1] - c[1])
    return v1 == v2 or v1 == (-v2[0], -v2[1])


# -- parsing ------------------------------------------------------------------


def _lines(source):
    for lineno, raw in enumerate(source.splitlines(), start=1):
        toks = []
        for tok in raw.split():
            if tok.startswith("#"):
                break
            toks.append(tok)
        if toks:
            yield lineno, toks


def _check_token(lineno, tok, what):
    if not tok or "=" in tok:
        raise TileSyntaxError(lineno, f"invalid {what} {tok!r}")
    return tok


def parse_wang_tileset(source):
    name = None
    tiles = []
    seen = set()
    for lineno, toks in _lines(source):
        head = toks[0]
        if head == "tileset":
            if name is not None:
                raise TileSyntaxError(lineno, "second 'tileset' header")
            if len(toks) != 2:
                raise TileSyntaxError(lineno, "expected 'tileset <name>'")
            name = _check_token(lineno, toks[1], "name")
        elif head == "tile":
            if name is None:
                raise TileSyntaxError(lineno, "'tile' before 'tileset' header")
            if len(toks) != 6:
                raise TileSyntaxError(lineno, "expected 'tile <id> N=.. S=.. E=.. W=..'")
            tid = _check_token(lineno, toks[1], "tile id")
            sides = {}
            for kv in toks[2:]:
                key, sep, val = kv.partition("=")
                if not sep or key not in SIDES or not val or "=" in val:
                    raise TileSyntaxError(lineno, f"bad side assignment {kv!r}")
                if key in sides:
                    raise TileSyntaxError(lineno, f"side {key} given twice")
                sides[key] = val
            missing = [s for s in SIDES if s not in sides]
            if missing:
                raise TileSyntaxError(lineno, f"missing sides {','.join(missing)}")
            if tid in seen:
                raise DuplicateId(f"line {lineno}: duplicate tile id {tid!r}")
            seen.add(tid)
            tiles.append(WangTile(tid, top=sides["N"], bottom=sides["S"], left=sides["W"], right=sides["E"]))
        else:
            raise TileSyntaxError(lineno, f"unknown directive {head!r}")
    if name is None:
        raise TileSyntaxError(0, "missing 'tileset <name>' header")
    if not tiles:
        raise EmptySet(f"tile set {name!r} has no tiles")
    return WangTileSet(name, tiles)


def parse_rational(lineno, tok):
    try:
        if "." in tok or "e" in tok.lower():
            raise ValueError
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise TileSyntaxError(lineno, f"not an exact rational: {tok!r}") from None


def parse_polygon_set(source):
    name = None
    raw = []  # [id, lineno, vertices, {index: color}]
    for lineno, toks in _lines(source):
        head = toks[0]
        if head == "polyset":
            if name is not None or len(toks) != 2:
                raise TileSyntaxError(lineno, "expected a single 'polyset <name>'")
            name = _check_token(lineno, toks[1], "name")
        elif head == "poly":
            if name is None:
                raise TileSyntaxError(lineno, "'poly' before 'polyset' header")
            if len(toks) != 2:
                raise TileSyntaxError(lineno, "expected 'poly <id>'")
            raw.append([_check_token(lineno, toks[1], "polygon id"), lineno, [], {}])
        elif head == "vertex":
            if not raw:
                raise TileSyntaxError(lineno, "'vertex' outside a polygon")
            if len(toks) != 3:
                raise TileSyntaxError(lineno, "expected 'vertex <x> <y>'")
            raw[-1][2].append((parse_rational(lineno, toks[1]), parse_rational(lineno, toks[2])))
        elif head == "edgecolor":
            if not raw:
                raise TileSyntaxError(lineno, "'edgecolor' outside a polygon")
            if len(toks) != 3 or not toks[1].isdigit():
                raise TileSyntaxError(lineno, "expected 'edgecolor <i> <color>'")
            idx = int(toks[1])
            if idx in raw[-1][3]:
                raise EdgeColorCountMismatch(f"line {lineno}: edge {idx} colored twice")
            raw[-1][3][idx] = _check_token(lineno, toks[2], "color")
        else:
            raise TileSyntaxError(lineno, f"unknown directive {head!r}")
    if name is None:
        raise TileSyntaxError(0, "missing 'polyset <name>' header")
    polys = []
    seen = set()
    for pid, lineno, verts, colors in raw:
        if pid in seen:
            raise DuplicateId(f"line {lineno}: duplicate polygon id {pid!r}")
        seen.add(pid)
        if sorted(colors) != list(range(len(verts))):
            raise EdgeColorCountMismatch(
                f"polygon {pid!r}: {len(verts)} vertices but edge colors for {sorted(colors)}"
            )
        polys.append(PolygonPrototile(pid, verts, [colors[i] for i in range(len(verts))]))
    if not polys:
        raise EmptySet(f"polygon set {name!r} has no polygons")
    return PolygonPrototileSet(name, polys)


def parse_any(source):
    """Parse either format, dispatching on the first directive."""
    for _, toks in _lines(source):
        if toks[0] == "polyset":
            return parse_polygon_set(source)
        break
    return parse_wang_tileset(source)


def canonical_serialize(tileset):
    if isinstance(tileset, WangTileSet):
        lines = [f"tileset {tileset.name}"]
        for t in tileset.tiles:
            lines.append(f"tile {t.id} N={t.top} S={t.bottom} E={t.right} W={t.left}")
        return "\n".join(lines) + "\n"
    lines = [f"polyset {tileset.name}"]
    for p in tileset.polys:
        lines.append(f"poly {p.id}")
        for x, y in p.vertices:
            lines.append(f"vertex {x} {y}")
        for i, c in enumerate(p.edge_colors):
            lines.append(f"edgecolor {i} {c}")
    return "\n".join(lines) + "\n"


# -- diagnostics ----------------------------------------------------------------


@dataclass
class ValidationReport:
    pairs: list = field(default_factory=list)  # ((pid, i), (pid, j), color, translates)
    isolated_colors: list = field(default_factory=list)
    never_translates: list = field(default_factory=list)

    @property
    def gluable_pairs(self):
        return [p for p in self.pairs if p[3]]

    def lines(self):
        out = []
        for (p1, i1), (p2, i2), color, ok in self.pairs:
            out.append(f"pair {p1}.{i1} {p2}.{i2} color={color} translates={'yes' if ok else 'no'}")
        for c in self.isolated_colors:
            out.append(f"isolated {c}")
        for c in self.never_translates:
            out.append(f"never_translates {c}")
        return out


def validate_polygon_set(polyset):
    """List same-color edge pairs and whether each pair are translates."""
    by_color = defaultdict(list)
    for p in polyset.polys:
        for i, (e, c) in enumerate(zip(p.edges(), p.edge_colors)):
            by_color[c].append(((p.id, i), e))
    report = ValidationReport()
    for color, edges in by_color.items():
        if len(edges) == 1:
            report.isolated_colors.append(color)
            continue
        bad = False
        for a in range(len(edges)):
            for b in range(a + 1, len(edges)):
                ok = is_translate(edges[a][1], edges[b][1])
                bad |= not ok
                report.pairs.append((edges[a][0], edges[b][0], color, ok))
        if bad:
            report.never_translates.append(color)
    return report


# -- cycle vectors ------------------------------------------------------------


def parse_cycle(text, ids):
    """Parse ``cycle A=1/2 B=1/2`` into a coordinate tuple ordered like ``ids``."""
    toks = text.split()
    if not toks or toks[0] != "cycle":
        raise TileSyntaxError(1, "expected 'cycle <id>=<rational> ...'")
    index = {tid: i for i, tid in enumerate(ids)}
    coords = [Fraction(0)] * len(ids)
    given = set()
    for kv in toks[1:]:
        key, sep, val = kv.partition("=")
        if not sep:
            raise TileSyntaxError(1, f"bad cycle entry {kv!r}")
        if key not in index:
            raise DimensionMismatch(f"unknown tile id {key!r} in cycle")
        if key in given:
            raise TileSyntaxError(1, f"tile id {key!r} given twice")
        given.add(key)
        coords[index[key]] = parse_rational(1, val)
    return tuple(coords)


def format_cycle(coords, ids, *, skip_zero=True):
    parts = [f"{tid}={Fraction(v)}" for tid, v in zip(ids, coords) if not (skip_zero and v == 0)]
    return " ".join(["cycle", *parts])
