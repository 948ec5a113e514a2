"""Naive dense rational elimination, used only to cross-check the package.

Deliberately written with none of the package's machinery: dense lists,
leftmost pivot column, first nonzero row, no pivot heuristics.  Slow and
obvious beats fast and clever for an oracle.
"""

from fractions import Fraction


def dense_rref(rows):
    """Gauss-Jordan on a list of lists. Returns (rref rows, pivot cols)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def dense_rank(rows):
    return len(dense_rref(rows)[1])


def dense_kernel(rows, ncols):
    """Kernel basis the textbook way (one vector per free column)."""
    rr, pivots = dense_rref(rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for k, p in enumerate(pivots):
            vec[p] = -rr[k][f]
        basis.append(tuple(vec))
    return basis


def dense_solve(rows, b):
    """Solve by eliminating the augmented system; None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(row) + [bv] for row, bv in zip(rows, b)]
    rr, pivots = dense_rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for k, p in enumerate(pivots):
        x[p] = rr[k][ncols]
    return tuple(x)
