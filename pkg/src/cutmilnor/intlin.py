"""Small exact integer linear algebra: kernels, saturation, Smith normal form.

Matrices are lists of row lists of Python ints. Sizes here are tiny (ranks
of H_1 bases and region counts), so clarity beats asymptotics.
"""

from __future__ import annotations

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _addmul_col(m: Matrix, dst: int, src: int, k: int) -> None:
    for row in m:
        row[dst] += k * row[src]


def column_echelon(a: Matrix) -> tuple[Matrix, Matrix]:
    """Bring ``a`` to column echelon form by unimodular column operations.

    Returns (h, t) with h = a @ t, t unimodular. Zero columns of h sit at
    the right; the corresponding columns of t span the right kernel of a.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    h = [list(r) for r in a]
    t = _identity(cols)
    pivot_col = 0
    for r in range(rows):
        if pivot_col >= cols:
            break
        # gcd-reduce row r across columns pivot_col..cols-1
        while True:
            nz = [j for j in range(pivot_col, cols) if h[r][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(h[r][j]))
            if jmin != pivot_col:
                _swap_cols(h, pivot_col, jmin)
                _swap_cols(t, pivot_col, jmin)
            done = True
            for j in range(pivot_col + 1, cols):
                if h[r][j] != 0:
                    q = h[r][j] // h[r][pivot_col]
                    _addmul_col(h, j, pivot_col, -q)
                    _addmul_col(t, j, pivot_col, -q)
                    if h[r][j] != 0:
                        done = False
            if done:
                break
        if h[r][pivot_col] != 0:
            pivot_col += 1
    return h, t


def right_kernel(a: Matrix, cols: int | None = None) -> list[list[int]]:
    """Basis (as rows) of {x : a x = 0} over the integers.

    The result is automatically saturated: the quotient lattice is free.
    """
    if not a:
        n = cols or 0
        return [list(row) for row in _identity(n)]
    h, t = column_echelon(a)
    n = len(a[0])
    basis = []
    for j in range(n):
        if all(h[r][j] == 0 for r in range(len(a))):
            basis.append([t[r][j] for r in range(n)])
    return basis


def rank(a: Matrix) -> int:
    if not a:
        return 0
    h, _ = column_echelon(a)
    n = len(a[0])
    return sum(1 for j in range(n) if any(h[r][j] != 0 for r in range(len(a))))


def saturation(rows: list[list[int]], n: int | None = None) -> list[list[int]]:
    """Saturation of the lattice spanned by ``rows`` inside Z^n.

    Computed as the double integer kernel: Sat(L) is the set of vectors
    orthogonal to everything orthogonal to L.
    """
    if n is None:
        if not rows:
            raise ValueError("need ambient dimension for an empty generating set")
        n = len(rows[0])
    if not rows:
        return []
    perp = right_kernel(rows, cols=n)
    if not perp:
        return [list(r) for r in _identity(n)]
    return right_kernel(perp, cols=n)


def lattice_intersection(bases: list[list[list[int]]], n: int) -> list[list[int]]:
    """Intersection of saturated lattices, each given as a row basis in Z^n.

    Each saturated lattice is the kernel of its orthogonal-complement rows,
    so the intersection is the kernel of the stacked complements.
    """
    stacked: Matrix = []
    for basis in bases:
        if not basis:
            return []
        stacked.extend(right_kernel(basis, cols=n))
    if not stacked:
        return [list(r) for r in _identity(n)]
    return right_kernel(stacked, cols=n)


def smith_diagonal(a: Matrix) -> list[int]:
    """Nonnegative diagonal of the Smith normal form (divisibility chain)."""
    if not a or not a[0]:
        return []
    m = [list(r) for r in a]
    rows, cols = len(m), len(m[0])
    k = min(rows, cols)
    diag: list[int] = []

    def find_pivot(start: int) -> tuple[int, int] | None:
        best = None
        for i in range(start, rows):
            for j in range(start, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        return best

    for s in range(k):
        while True:
            piv = find_pivot(s)
            if piv is None:
                break
            i, j = piv
            m[s], m[i] = m[i], m[s]
            for row in m:
                row[s], row[j] = row[j], row[s]
            clean = True
            for i in range(s + 1, rows):
                if m[i][s] != 0:
                    q = m[i][s] // m[s][s]
                    m[i] = [x - q * y for x, y in zip(m[i], m[s])]
                    if m[i][s] != 0:
                        clean = False
            for j in range(s + 1, cols):
                if m[s][j] != 0:
                    q = m[s][j] // m[s][s]
                    for row in m:
                        row[j] -= q * row[s]
                    if m[s][j] != 0:
                        clean = False
            if clean and all(m[i][s] == 0 for i in range(s + 1, rows)) and all(
                m[s][j] == 0 for j in range(s + 1, cols)
            ):
                break
        if m[s][s] == 0:
            break
        diag.append(abs(m[s][s]))

    # enforce the divisibility chain d1 | d2 | ...
    import math

    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a_, b_ = diag[i], diag[i + 1]
            if b_ % a_ != 0:
                g = math.gcd(a_, b_)
                diag[i], diag[i + 1] = g, a_ * b_ // g
                changed = True
    return diag


def abelianization_invariants(relators: Matrix, ngens: int) -> tuple[int, list[int]]:
    """(free rank, torsion coefficients > 1) of Z^ngens modulo the relator rows."""
    if not relators:
        return ngens, []
    d = smith_diagonal(relators)
    nz = [x for x in d if x != 0]
    free_rank = ngens - len(nz)
    torsion = [x for x in nz if x > 1]
    return free_rank, torsion
