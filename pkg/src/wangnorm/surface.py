"""Closed surfaces glued from signed copies of Wang squares.

An integral 2-cycle ``c`` prescribes ``|c_j|`` copies of tile ``j`` with sign
``sign(c_j)``.  Each copy contributes four edge slots; a slot carries the
axis and color of its side and a polarity ``sigma`` describing the boundary
direction it induces on its 1-cell.  Two slots can be glued iff they share
axis and color and have opposite polarity.  Glued edges identify their
endpoints start-to-start and end-to-end along the 1-cell (this holds for the
reflected gluing of opposite-sign copies too, since the reflection fixes the
common edge pointwise).

The Euler characteristic of a complete gluing is ``V - E + F`` with
``E = 2F``, so maximizing ``chi`` means maximizing the number ``V`` of corner
classes.
"""

import itertools
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import (
    BudgetExhausted,
    DimensionMismatch,
    NoTorus,
    NotACycle,
    NotFlatTorus,
    NotIntegral,
    TooLarge,
    ZeroCycle,
)

TOP, BOTTOM, LEFT, RIGHT = range(4)
SIDE_NAMES = ("top", "bottom", "left", "right")
BL, BR, TR, TL = range(4)
# endpoints of each side, listed along the +x / +y direction of its 1-cell
ENDPOINTS = {TOP: (TL, TR), BOTTOM: (BL, BR), LEFT: (BL, TL), RIGHT: (BR, TR)}
AXIS = {TOP: "H", BOTTOM: "H", LEFT: "V", RIGHT: "V"}

DEFAULT_NODE_BUDGET = 200_000
BRUTEFORCE_SLOT_CAP = 32


def polarity(side, sign):
    positive = side in (BOTTOM, RIGHT)
    return 1 if positive == (sign > 0) else -1


def side_color(tile, side):
    return (tile.top, tile.bottom, tile.left, tile.right)[side]


@dataclass(frozen=True)
class SquareCopy:
    copy_id: int
    tile: int  # index into the tile set
    sign: int


@dataclass(frozen=True)
class GluedSurface:
    """A complete gluing of square copies.

    ``pairs`` holds slot pairs ``((copy, side), (copy, side))``.
    """

    tileset: object
    copies: tuple
    pairs: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def F(self):
        return len(self.copies)

    @property
    def E(self):
        return len(self.pairs)

    def partner(self):
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def corner_classes(self):
        """Partition of corners ``(copy, corner)`` into vertices of the surface."""
        if "classes" not in self._cache:
            parent = {(c.copy_id, k): (c.copy_id, k) for c in self.copies for k in range(4)}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for (ca, sa), (cb, sb) in self.pairs:
                for ea, eb in zip(ENDPOINTS[sa], ENDPOINTS[sb]):
                    ra, rb = find((ca, ea)), find((cb, eb))
                    if ra != rb:
                        parent[ra] = rb
            groups = defaultdict(list)
            for x in sorted(parent):
                groups[find(x)].append(x)
            self._cache["classes"] = sorted(groups.values())
        return self._cache["classes"]

    @property
    def V(self):
        return len(self.corner_classes())

    @property
    def chi(self):
        return self.V - self.E + self.F

    def components(self):
        """Connected components as sorted lists of copy ids."""
        parent = {c.copy_id: c.copy_id for c in self.copies}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for (ca, _), (cb, _) in self.pairs:
            ra, rb = find(ca), find(cb)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups = defaultdict(list)
        for c in sorted(parent):
            groups[find(c)].append(c)
        return sorted(groups.values())

    def component_stats(self):
        """(copies, V, E, F, chi) for every component."""
        classes = self.corner_classes()
        out = []
        for comp in self.components():
            members = set(comp)
            V = sum(1 for cl in classes if cl[0][0] in members)
            E = sum(1 for (ca, _), _ in self.pairs if ca in members)
            F = len(comp)
            out.append((comp, V, E, F, V - E + F))
        return out

    def cycle(self):
        """The 2-chain counting copies of each tile with their signs."""
        c = [0] * len(self.tileset)
        for cp in self.copies:
            c[cp.tile] += cp.sign
        return tuple(c)

    def gauss_bonnet_ok(self):
        ks = [len(cl) for cl in self.corner_classes()]
        return (
            self.E * 2 == 4 * self.F
            and sum(ks) == 4 * self.F
            and sum(4 - k for k in ks) == 4 * self.chi
            and all(chi % 2 == 0 for *_, chi in self.component_stats())
        )

    def is_flat_positive(self, members=None):
        copies = [c for c in self.copies if members is None or c.copy_id in members]
        if any(c.sign != 1 for c in copies):
            return False
        ids = {c.copy_id for c in copies}
        return all(len(cl) == 4 for cl in self.corner_classes() if cl[0][0] in ids)

    def report_lines(self):
        ids = self.tileset.ids
        lines = [f"copy {c.copy_id} {ids[c.tile]} {'+' if c.sign > 0 else '-'}" for c in self.copies]
        for (ca, sa), (cb, sb) in self.pairs:
            lines.append(f"glue {ca}.{SIDE_NAMES[sa]} {cb}.{SIDE_NAMES[sb]}")
        for comp, V, E, F, chi in self.component_stats():
            lines.append(f"component copies={','.join(map(str, comp))} V={V} E={E} F={F} chi={chi}")
        lines.append(f"V: {self.V}")
        lines.append(f"E: {self.E}")
        lines.append(f"F: {self.F}")
        lines.append(f"chi: {self.chi}")
        return lines


def check_surface(surface):
    """Re-verify a surface from scratch; returns a list of problems (empty if valid)."""
    problems = []
    tiles = surface.tileset.tiles
    by_id = {c.copy_id: c for c in surface.copies}
    seen = Counter()
    for a, b in surface.pairs:
        seen[a] += 1
        seen[b] += 1
        ca, cb = by_id.get(a[0]), by_id.get(b[0])
        if ca is None or cb is None:
            problems.append(f"glue refers to unknown copy: {a} {b}")
            continue
        if AXIS[a[1]] != AXIS[b[1]]:
            problems.append(f"glue {a} {b} mixes axes")
        if side_color(tiles[ca.tile], a[1]) != side_color(tiles[cb.tile], b[1]):
            problems.append(f"glue {a} {b} mixes colors")
        if polarity(a[1], ca.sign) + polarity(b[1], cb.sign) != 0:
            problems.append(f"glue {a} {b} has equal polarities")
    for c in surface.copies:
        for s in range(4):
            if seen[(c.copy_id, s)] != 1:
                problems.append(f"slot {c.copy_id}.{SIDE_NAMES[s]} glued {seen[(c.copy_id, s)]} times")
    if not surface.gauss_bonnet_ok():
        problems.append("Euler/Gauss-Bonnet accounting failed")
    return problems


# -- copies and slots -----------------------------------------------------------


def _as_integral(c):
    out = []
    for v in c:
        f = Fraction(v)
        if f.denominator != 1:
            raise NotIntegral(f"cycle coordinate {f} is not an integer")
        out.append(int(f))
    return tuple(out)


def make_copies(c):
    copies = []
    for j, v in enumerate(c):
        for _ in range(abs(v)):
            copies.append(SquareCopy(len(copies), j, 1 if v > 0 else -1))
    return tuple(copies)


def slot_groups(tileset, copies):
    """Map (axis, color) -> (positive slots, negative slots), slots in lex order."""
    groups = {}
    for cp in copies:
        tile = tileset.tiles[cp.tile]
        for side in range(4):
            key = (AXIS[side], side_color(tile, side))
            pos, neg = groups.setdefault(key, ([], []))
            (pos if polarity(side, cp.sign) > 0 else neg).append((cp.copy_id, side))
    return groups


def _prepare(cx, c):
    c = _as_integral(c)
    if len(c) != cx.n:
        raise DimensionMismatch(f"cycle has {len(c)} coordinates, complex has {cx.n} 2-cells")
    if not any(c):
        raise ZeroCycle("the zero cycle has no surface")
    copies = make_copies(c)
    groups = slot_groups(cx.source, copies)
    for (axis, color), (pos, neg) in groups.items():
        if len(pos) != len(neg):
            raise NotACycle(
                f"slots on {axis}:{color} cannot be paired ({len(pos)} positive, {len(neg)} negative)"
            )
    return c, copies, groups


def build_surface(cx, c):
    """Pair slots greedily (i-th positive with i-th negative in each group)."""
    _, copies, groups = _prepare(cx, c)
    pairs = []
    for pos, neg in groups.values():
        pairs.extend(zip(pos, neg))
    return GluedSurface(cx.source, copies, _normalize_pairs(pairs))


def euler_characteristic(surface):
    return surface.chi


def _normalize_pairs(pairs):
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


# -- branch and bound ---------------------------------------------------------


class _Search:
    """Depth-first enumeration of complete pairings with an undoable union-find.

    Slots are visited in lexicographic order (copy, top<bottom<left<right); the
    first unmatched slot is paired with each compatible unmatched slot in
    increasing order.  Among copies of one tile that have no glued slot yet,
    only the first is tried as a partner: the others give isomorphic subtrees,
    and the skipped ones come later in lexicographic order.  ``torus`` mode
    prunes every branch in which a corner class exceeds four corners or closes
    with fewer than four.
    """

    def __init__(self, cx, c, budget, torus=False):
        self.c, self.copies, groups = _prepare(cx, c)
        self.budget = budget
        self.torus = torus
        self.F = len(self.copies)
        self.nslots = 4 * self.F
        self.kmin = 4 if all(cp.sign > 0 for cp in self.copies) else 2
        # candidate partners of every slot, in increasing order
        self.cands = [None] * self.nslots
        for pos, neg in groups.values():
            pi = [4 * cid + s for cid, s in pos]
            ni = [4 * cid + s for cid, s in neg]
            for s in pi:
                self.cands[s] = ni
            for s in ni:
                self.cands[s] = pi
        n = self.nslots
        self.parent = list(range(n))
        self.size = [1] * n
        self.open = [2] * n
        self.closed = 0
        self.nclasses = n
        self.open_corners = n
        self.matched = [False] * n
        self.partner = [-1] * n
        self.touched = [0] * self.F
        self.nodes = 0
        self.best_v = -1
        self.best_pairs = None
        self.vmax = self.F if self.kmin == 4 else 2 * self.F

    def _find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def _touch(self, corner, log):
        """Close one edge incidence at ``corner``."""
        r = self._find(corner)
        self.open[r] -= 1
        log.append(("o", r))
        if self.open[r] == 0:
            self.closed += 1
            self.open_corners -= self.size[r]
            log.append(("c", r))

    def _union(self, a, b, log):
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.open[ra] += self.open[rb]
        self.nclasses -= 1
        log.append(("u", ra, rb))
        if self.open[ra] == 0:
            self.closed += 1
            self.open_corners -= self.size[ra]
            log.append(("c", ra))

    def _undo(self, log):
        for entry in reversed(log):
            if entry[0] == "o":
                self.open[entry[1]] += 1
            elif entry[0] == "c":
                self.closed -= 1
                self.open_corners += self.size[entry[1]]
            else:
                _, ra, rb = entry
                self.parent[rb] = rb
                self.size[ra] -= self.size[rb]
                self.open[ra] -= self.open[rb]
                self.nclasses += 1

    def _glue(self, a, b):
        log = []
        ca, sa = divmod(a, 4)
        cb, sb = divmod(b, 4)
        for ea, eb in zip(ENDPOINTS[sa], ENDPOINTS[sb]):
            self._union(4 * ca + ea, 4 * cb + eb, log)
        for ea in ENDPOINTS[sa]:
            self._touch(4 * ca + ea, log)
        for eb in ENDPOINTS[sb]:
            self._touch(4 * cb + eb, log)
        self.matched[a] = self.matched[b] = True
        self.partner[a], self.partner[b] = b, a
        self.touched[ca] += 1
        self.touched[cb] += 1
        return log

    def _unglue(self, a, b, log):
        self._undo(log)
        self.matched[a] = self.matched[b] = False
        self.partner[a] = self.partner[b] = -1
        self.touched[a // 4] -= 1
        self.touched[b // 4] -= 1

    def _torus_ok(self, a, b):
        for s in (a, b):
            c, side = divmod(s, 4)
            for e in ENDPOINTS[side]:
                r = self._find(4 * c + e)
                if self.size[r] > 4 or (self.open[r] == 0 and self.size[r] != 4):
                    return False
        return True

    def _bound(self):
        open_classes = self.nclasses - self.closed
        return self.closed + min(open_classes, self.open_corners // self.kmin)

    def _pairs(self):
        return _normalize_pairs(
            ((a // 4, a % 4), (b // 4, b % 4)) for a, b in enumerate(self.partner) if a < b
        )

    def run(self):
        """Returns True when the search space was exhausted (or the goal met)."""
        self._done = False
        try:
            self._dfs(0)
        except _OutOfBudget:
            return False
        return True

    def _dfs(self, start):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        s = start
        while s < self.nslots and self.matched[s]:
            s += 1
        if s == self.nslots:
            v = self.nclasses
            if v > self.best_v:
                self.best_v = v
                self.best_pairs = self._pairs()
                if self.torus or v >= self.vmax:
                    self._done = True
            return
        if not self.torus and self._bound() <= self.best_v:
            return
        fresh_tiles = set()
        for t in self.cands[s]:
            if self.matched[t]:
                continue
            ct = t // 4
            if ct != s // 4 and not self.touched[ct]:
                # untouched copies of one tile are interchangeable: try the first only
                tile = self.copies[ct].tile
                if tile in fresh_tiles:
                    continue
                fresh_tiles.add(tile)
            log = self._glue(s, t)
            if not self.torus or self._torus_ok(s, t):
                self._dfs(s + 1)
            self._unglue(s, t, log)
            if self._done:
                return


class _OutOfBudget(Exception):
    pass


@dataclass
class NormCertificate:
    cycle: tuple
    value: int
    witness: GluedSurface
    status: str  # "exact" or "upper-bound"
    nodes: int = 0
    searched: str = "surfaces with exactly |c_j| copies of tile j"

    def report_lines(self, ids):
        from .tileset import format_cycle

        lines = [
            format_cycle(self.cycle, ids),
            f"value: {self.value}",
            f"status: {self.status}",
            f"class: {self.searched}",
        ]
        if self.witness is not None:
            lines.extend(self.witness.report_lines())
        return lines


def thurston_norm(cx, c, budget=DEFAULT_NODE_BUDGET):
    """Minus the largest Euler characteristic over complete pairings of the copies of ``c``.

    Returns an exact certificate when the branch and bound finishes within
    ``budget`` nodes.  Otherwise the best surface found so far is returned with
    status ``upper-bound`` (falling back to the greedy surface when the search
    never completed a pairing).
    """
    c = _as_integral(c)
    if not any(c):
        return NormCertificate(c, 0, None, "exact")
    search = _Search(cx, c, budget)
    finished = search.run()
    if search.best_pairs is None:
        witness = build_surface(cx, c)
    else:
        witness = GluedSurface(cx.source, search.copies, search.best_pairs)
    return NormCertificate(c, -witness.chi, witness, "exact" if finished else "upper-bound", search.nodes)


def _axis_matchings(groups, axis, copies):
    """All complete pairings of one axis, as corner involutions (rows) plus slot pairs."""
    ncorners = 4 * len(copies)
    keyed = [pn for (ax, _), pn in sorted(groups.items()) if ax == axis]
    rows, pairings = [], []
    for choice in itertools.product(*(itertools.permutations(neg) for _, neg in keyed)):
        row = list(range(ncorners))
        pairs = []
        for (pos, _), perm in zip(keyed, choice):
            for (ca, sa), (cb, sb) in zip(pos, perm):
                for ea, eb in zip(ENDPOINTS[sa], ENDPOINTS[sb]):
                    row[4 * ca + ea], row[4 * cb + eb] = 4 * cb + eb, 4 * ca + ea
                pairs.append(((ca, sa), (cb, sb)))
        rows.append(row)
        pairings.append(pairs)
    return np.array(rows, dtype=np.int32), pairings


def _count_orbits(perms):
    """Number of cycles of each row of a batch of permutations (pointer doubling)."""
    m, n = perms.shape
    offsets = (np.arange(m, dtype=np.int32) * n)[:, None]
    jump = (perms.astype(np.int32) + offsets).ravel()
    low = np.tile(np.arange(n, dtype=np.int8), m)
    for _ in range(max(1, (n - 1).bit_length())):
        np.minimum(low, low[jump], out=low)
        jump = jump[jump]
    return (low.reshape(m, n) == np.arange(n, dtype=np.int8)).sum(axis=1)


def thurston_norm_bruteforce(cx, c):
    """Exhaustive oracle: every admissible perfect matching, no pruning.

    Every corner lies on one horizontal and one vertical side, so the
    horizontal and vertical gluings each induce an involution on corners and
    the corner classes are the alternating cycles of the two; their number is
    half the number of orbits of the composed permutation.  All pairs of
    horizontal and vertical pairings are scored, vectorized over the vertical
    ones.
    """
    c, copies, groups = _prepare(cx, c)
    nslots = 4 * len(copies)
    if nslots > BRUTEFORCE_SLOT_CAP:
        raise TooLarge(f"{nslots} slots exceed the oracle cap of {BRUTEFORCE_SLOT_CAP}")
    hrows, hpairs = _axis_matchings(groups, "H", copies)
    vrows, vpairs = _axis_matchings(groups, "V", copies)
    best = (-1, None, None)
    chunk = max(1, 65536 // len(vrows))
    for lo in range(0, len(hrows), chunk):
        composed = hrows[lo : lo + chunk][:, vrows].reshape(-1, hrows.shape[1])
        counts = _count_orbits(composed)
        k = int(np.argmax(counts))
        if counts[k] > best[0]:
            best = (int(counts[k]), lo + k // len(vrows), k % len(vrows))
    _, i, j = best
    witness = GluedSurface(cx.source, copies, _normalize_pairs(hpairs[i] + vpairs[j]))
    return NormCertificate(c, -witness.chi, witness, "exact")


def find_torus(cx, c, budget=DEFAULT_NODE_BUDGET):
    """Search a complete pairing in which every vertex has exactly four corners.

    Requires ``c >= 0``; such a surface is a disjoint union of flat tori.
    """
    c = _as_integral(c)
    if any(v < 0 for v in c):
        raise ValueError("find_torus needs a non-negative cycle")
    search = _Search(cx, c, budget, torus=True)
    finished = search.run()
    if search.best_pairs is not None:
        return GluedSurface(cx.source, search.copies, search.best_pairs)
    if not finished:
        raise BudgetExhausted(f"torus search exceeded {budget} nodes")
    raise NoTorus(f"no flat torus is glued from the copies of {c}")


# -- periodic tilings ---------------------------------------------------------


@dataclass(frozen=True)
class PeriodicTiling:
    """Periods ``(k, 0)`` and ``(s, l)``; ``domain`` maps [0,k) x [0,l) to tile ids."""

    k: int
    l: int
    s: int
    domain: tuple  # ((x, y, tile_id), ...) sorted

    def at(self, x, y):
        x, y = self.reduce(x, y)
        return self._map()[(x, y)]

    def _map(self):
        return {(x, y): t for x, y, t in self.domain}

    def reduce(self, x, y):
        m = y // self.l
        x -= m * self.s
        y -= m * self.l
        return x % self.k, y

    def problems(self, tileset):
        out = []
        if not (self.k >= 1 and self.l >= 1 and 0 <= self.s < self.k):
            out.append("bad period vectors")
            return out
        cells = self._map()
        expected = {(x, y) for x in range(self.k) for y in range(self.l)}
        if set(cells) != expected or len(self.domain) != len(expected):
            out.append("domain does not cover the fundamental rectangle exactly once")
            return out
        try:
            tiles = {tid: tileset.tiles[tileset.index(tid)] for tid in set(cells.values())}
        except KeyError as exc:
            return [f"unknown tile id {exc.args[0]!r}"]
        for (x, y), tid in sorted(cells.items()):
            t = tiles[tid]
            right = tiles[cells[self.reduce(x + 1, y)]]
            up = tiles[cells[self.reduce(x, y + 1)]]
            if t.right != right.left:
                out.append(f"horizontal mismatch at ({x},{y})")
            if t.top != up.bottom:
                out.append(f"vertical mismatch at ({x},{y})")
        return out

    def report_lines(self):
        lines = [f"period {self.k} {self.l} {self.s}"]
        lines.extend(f"at {x} {y} {t}" for x, y, t in self.domain)
        return lines


def _hnf(vectors):
    """Basis (k, 0), (s, l) of the lattice spanned by integer vectors."""
    vecs = [v for v in vectors if v != (0, 0)]
    # Euclid on the y coordinate
    while sum(1 for v in vecs if v[1] != 0) > 1:
        nz = sorted((v for v in vecs if v[1] != 0), key=lambda v: abs(v[1]))
        piv = nz[0]
        rest = [v for v in vecs if v[1] == 0]
        out = [piv]
        for v in nz[1:]:
            q = v[1] // piv[1]
            out.append((v[0] - q * piv[0], v[1] - q * piv[1]))
        vecs = rest + [v for v in out if v != (0, 0)]
    ys = [v for v in vecs if v[1] != 0]
    if not ys:
        raise NotFlatTorus("translation lattice has rank < 2")
    piv = ys[0]
    if piv[1] < 0:
        piv = (-piv[0], -piv[1])
    k = 0
    for v in vecs:
        if v[1] == 0:
            k = gcd(k, v[0])
    if k == 0:
        raise NotFlatTorus("translation lattice has rank < 2")
    return k, piv[1], piv[0] % k


def extract_periodic_tiling(surface, base=0):
    """Develop the component of copy ``base`` into the plane."""
    comps = [comp for comp in surface.components() if base in comp]
    if not comps:
        raise NotFlatTorus(f"no copy {base}")
    members = set(comps[0])
    if not surface.is_flat_positive(members):
        raise NotFlatTorus("component has a reflected copy or a vertex without exactly four corners")
    by_id = {c.copy_id: c for c in surface.copies}
    partner = surface.partner()
    step = {RIGHT: (1, 0), TOP: (0, 1), LEFT: (-1, 0), BOTTOM: (0, -1)}
    pos = {base: (0, 0)}
    queue = deque([base])
    lattice = []
    while queue:
        cid = queue.popleft()
        x, y = pos[cid]
        for side in (TOP, BOTTOM, LEFT, RIGHT):
            other, oside = partner[(cid, side)]
            dx, dy = step[side]
            if (side, oside) not in ((RIGHT, LEFT), (LEFT, RIGHT), (TOP, BOTTOM), (BOTTOM, TOP)):
                raise NotFlatTorus("gluing is not a translation")
            target = (x + dx, y + dy)
            if other not in pos:
                pos[other] = target
                queue.append(other)
            else:
                ox, oy = pos[other]
                lattice.append((target[0] - ox, target[1] - oy))
    k, l, s = _hnf(lattice)
    if k * l != len(members):
        raise NotFlatTorus(f"lattice index {k * l} differs from {len(members)} copies")
    ids = surface.tileset.ids
    tiling = PeriodicTiling(k, l, s, ())
    cells = {}
    for cid, (x, y) in pos.items():
        cell = tiling.reduce(x, y)
        if cell in cells:
            raise NotFlatTorus("two copies develop onto the same cell")
        cells[cell] = ids[by_id[cid].tile]
    tiling = PeriodicTiling(k, l, s, tuple(sorted((x, y, t) for (x, y), t in cells.items())))
    bad = tiling.problems(surface.tileset)
    if bad:
        raise NotFlatTorus("; ".join(bad))
    return tiling


def ev_of_periodic(tiling, tileset):
    """Normalized tile frequencies of a periodic tiling."""
    area = tiling.k * tiling.l
    counts = Counter(t for _, _, t in tiling.domain)
    return tuple(Fraction(counts.get(tid, 0), area) for tid in tileset.ids)
