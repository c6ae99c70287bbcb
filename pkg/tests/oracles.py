"""Independent reference computations for the tests.

None of these import the search or LP code under test; they work from the
definitions with sympy or plain enumeration.
"""

import itertools
from fractions import Fraction

import sympy


def wang_column(tile):
    """Boundary of one Wang tile as a dict over (axis, color)."""
    col = {}
    for key, sign in (
        (("H", tile.bottom), 1),
        (("H", tile.top), -1),
        (("V", tile.right), 1),
        (("V", tile.left), -1),
    ):
        col[key] = col.get(key, 0) + sign
    return {k: v for k, v in col.items() if v}


def boundary_rows(tileset):
    keys = sorted(
        {("H", t.top) for t in tileset.tiles}
        | {("H", t.bottom) for t in tileset.tiles}
        | {("V", t.left) for t in tileset.tiles}
        | {("V", t.right) for t in tileset.tiles}
    )
    cols = [wang_column(t) for t in tileset.tiles]
    return [[col.get(k, 0) for col in cols] for k in keys]


def chain_is_cycle(tileset, chain):
    total = {}
    for t, v in zip(tileset.tiles, chain):
        for k, s in wang_column(t).items():
            total[k] = total.get(k, 0) + s * Fraction(v)
    return all(v == 0 for v in total.values())


def kernel_dimension(tileset):
    rows = boundary_rows(tileset)
    n = len(tileset)
    return n - sympy.Matrix(rows).rank() if rows else n


def simplex_vertices(tileset):
    """Vertices of {x >= 0, boundary x = 0, sum x = 1} by support enumeration.

    A vertex is the unique solution of the equations restricted to its
    support, with all support coordinates positive.
    """
    rows = boundary_rows(tileset)
    n = len(tileset)
    found = set()
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            A = sympy.Matrix([[r[j] for j in support] for r in rows] + [[1] * size])
            b = sympy.Matrix([0] * len(rows) + [1])
            if A.rank() != size:
                continue
            try:
                sol, params = A.gauss_jordan_solve(b)
            except ValueError:  # inconsistent
                continue
            if params.shape[0]:
                continue
            vals = [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol]
            if all(v > 0 for v in vals):
                x = [Fraction(0)] * n
                for j, v in zip(support, vals):
                    x[j] = v
                found.add(tuple(x))
    return sorted(found)


def legal_grid(tiles, grid):
    rows, cols = len(grid), len(grid[0])
    for r in range(rows):
        for q in range(cols):
            t = tiles[grid[r][q]]
            if q + 1 < cols and t.right != tiles[grid[r][q + 1]].left:
                return False
            if r + 1 < rows and t.top != tiles[grid[r + 1][q]].bottom:
                return False
    return True


def all_patterns(tileset, p):
    """Every legal (2p+1)^2 grid, by enumerating all fillings; grid[row][col], row 0 at the bottom."""
    size = 2 * p + 1
    tiles = tileset.tiles
    out = []
    for cells in itertools.product(range(len(tiles)), repeat=size * size):
        grid = tuple(tuple(cells[r * size : (r + 1) * size]) for r in range(size))
        if legal_grid(tiles, grid):
            out.append(grid)
    return out


def periodic_tiling_ok(tileset, k, l, s, cells):
    """Check a fundamental domain against the lattice spanned by (k, 0) and (s, l)."""
    at = {(x, y): tid for x, y, tid in cells}
    tiles = {t.id: t for t in tileset.tiles}

    def tile(x, y):
        m = y // l
        x, y = x - m * s, y - m * l
        return tiles[at[(x % k, y)]]

    if len(at) != k * l:
        return False
    for x in range(-k, 2 * k + abs(s) + 1):
        for y in range(-l, 2 * l + 1):
            if tile(x, y).right != tile(x + 1, y).left or tile(x, y).top != tile(x, y + 1).bottom:
                return False
    return True
