"""Exact rational linear algebra: row reduction, kernels, ranks, LP feasibility.

Everything here works on lists of lists of :class:`fractions.Fraction` (ints
are accepted and promoted).  The one exception is :func:`sparse_feasible_point`,
which lets a floating-point LP solver propose a support or a dual vector; the
answer it returns is always re-derived or re-checked in exact arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csc_matrix

from .errors import BudgetExhausted

DENSE_FALLBACK_CAP = 2_000_000  # rows * columns allowed for the exact fallback


def _frac_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns (matrix, pivot_columns)."""
    m = _frac_matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0}, one vector per free column, in column order."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    m, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(tuple(v))
    return basis


def matvec(rows, x):
    return [sum((Fraction(a) * b for a, b in zip(row, x)), Fraction(0)) for row in rows]


def lcm_denominator(vec):
    d = 1
    for v in vec:
        q = Fraction(v).denominator
        d = d * q // gcd(d, q)
    return d


def primitive(vec):
    """Scale a rational vector to the primitive integer vector on its ray."""
    d = lcm_denominator(vec)
    ints = [int(Fraction(v) * d) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


@dataclass
class LPResult:
    """Outcome of :func:`feasible_point`.

    When ``feasible`` is true, ``point`` solves ``A x = b, x >= 0``.  Otherwise
    ``certificate`` is a vector ``y`` with ``y^T A <= 0`` and ``y^T b > 0``
    (Farkas), which rules out every non-negative solution.
    """

    feasible: bool
    point: tuple = None
    certificate: tuple = None


def check_farkas(A, b, y):
    """Independent check of an infeasibility certificate for {A x = b, x >= 0}."""
    if len(y) != len(A):
        return False
    ncols = len(A[0]) if A else 0
    for j in range(ncols):
        if sum((Fraction(y[i]) * A[i][j] for i in range(len(A))), Fraction(0)) > 0:
            return False
    return sum((Fraction(yi) * bi for yi, bi in zip(y, b)), Fraction(0)) > 0


def feasible_point(A, b):
    """Phase-one simplex with Bland's rule for {A x = b, x >= 0}, exactly.

    A basic feasible solution is returned when one exists; otherwise a Farkas
    certificate read off the optimal phase-one duals.
    """
    A = _frac_matrix(A)
    b = [Fraction(v) for v in b]
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return LPResult(True, point=tuple(Fraction(0) for _ in range(n)))
    # flip rows so b >= 0; remember the flips for the certificate
    flip = [1] * m
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            flip[i] = -1
    # tableau columns: x_0..x_{n-1}, a_0..a_{m-1}, rhs
    T = [A[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of phase one objective (minimize sum of artificials)
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        cost = [c - t for c, t in zip(cost, T[i])]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase one (objective bounded below)
            raise AssertionError("unbounded phase-one problem")
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    if cost[-1] != 0:
        # optimum of phase one is -cost[-1] > 0: infeasible
        # dual y_i = 1 - reduced cost of artificial i
        y = tuple(flip[i] * (1 - cost[n + i]) for i in range(m))
        return LPResult(False, certificate=y)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[i][-1]
    return LPResult(True, point=tuple(x))


def _pivot(T, cost, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, T[r])]


# -- large sparse systems ---------------------------------------------------------


def check_farkas_sparse(columns, b, y):
    """:func:`check_farkas` for a matrix given as columns of ``{row: value}``."""
    if len(y) != len(b):
        return False
    y = [Fraction(v) for v in y]
    for col in columns:
        if sum((y[i] * v for i, v in col.items()), Fraction(0)) > 0:
            return False
    return sum((yi * Fraction(bi) for yi, bi in zip(y, b)), Fraction(0)) > 0


def _dense(columns, nrows, keep_cols, keep_rows):
    where = {r: k for k, r in enumerate(keep_rows)}
    A = [[0] * len(keep_cols) for _ in keep_rows]
    for k, j in enumerate(keep_cols):
        for i, v in columns[j].items():
            A[where[i]][k] = v
    return A


def _float_problem(columns, b):
    data, rows, cols = [], [], []
    for j, col in enumerate(columns):
        for i, v in col.items():
            data.append(float(v))
            rows.append(i)
            cols.append(j)
    return csc_matrix((data, (rows, cols)), shape=(len(b), len(columns)))


def _rationalize(y, scale=10**6):
    top = max((abs(v) for v in y), default=0)
    if top == 0:
        return None
    return tuple(Fraction(v / top).limit_denominator(scale) for v in y)


def sparse_feasible_point(columns, b):
    """Decide {A x = b, x >= 0} for a sparse ``A`` given column by column.

    HiGHS is asked for a basic solution.  Its support is handed to the exact
    simplex, whose answer on those columns is feasible for the whole system.
    If HiGHS reports infeasibility, a Farkas vector is sought with a second
    LP, rounded to nearby rationals and checked exactly.  When neither shortcut
    is confirmed, the exact simplex runs on the full system (provided it is
    not larger than ``DENSE_FALLBACK_CAP`` entries).
    """
    nrows, ncols = len(b), len(columns)
    b = [Fraction(v) for v in b]
    if ncols == 0:
        if any(b):
            y = tuple(Fraction(1 if v > 0 else -1 if v < 0 else 0) for v in b)
            return LPResult(False, certificate=y)
        return LPResult(True, point=())
    M = _float_problem(columns, b)
    fb = np.array([float(v) for v in b])
    primal = linprog(np.zeros(ncols), A_eq=M, b_eq=fb, bounds=(0, None), method="highs-ds")
    if primal.status == 0:
        support = [j for j in range(ncols) if primal.x[j] > 1e-9]
        keep_rows = sorted({i for j in support for i in columns[j]} | {i for i in range(nrows) if b[i]})
        res = feasible_point(_dense(columns, nrows, support, keep_rows), [b[i] for i in keep_rows])
        if res.feasible:
            x = [Fraction(0)] * ncols
            for j, v in zip(support, res.point):
                x[j] = v
            return LPResult(True, point=tuple(x))
    elif primal.status == 2:
        # y with A^T y <= 0 and b . y = 1
        dual = linprog(
            np.zeros(nrows),
            A_ub=M.T,
            b_ub=np.zeros(ncols),
            A_eq=fb.reshape(1, -1),
            b_eq=[1.0],
            bounds=(None, None),
            method="highs-ds",
        )
        if dual.status == 0:
            y = _rationalize(dual.x)
            if y is not None and check_farkas_sparse(columns, b, y):
                return LPResult(False, certificate=y)
    if nrows * ncols > DENSE_FALLBACK_CAP:
        raise BudgetExhausted(f"exact LP fallback on a {nrows} x {ncols} system is too large")
    return feasible_point(_dense(columns, nrows, range(ncols), range(nrows)), b)
