"""Exact linear algebra over the rationals.

Matrices are lists of rows of Fractions.  Everything downstream depends on
the pivoting being deterministic: row reduction always takes the leftmost
available pivot, kernel vectors are listed by increasing free column, and
cokernel representatives are standard basis vectors chosen greedily from
index 0.  Do not change these rules; orientation signs are defined
relative to them.
"""

from __future__ import annotations

from fractions import Fraction

Vec = list[Fraction]
Mat = list[list[Fraction]]


def mat(rows) -> Mat:
    """Copy `rows` into a Fraction matrix."""
    return [[Fraction(x) for x in row] for row in rows]


def zeros(nrows: int, ncols: int) -> Mat:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Mat:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def shape(m: Mat) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def transpose(m: Mat) -> Mat:
    nr, nc = shape(m)
    return [[m[i][j] for i in range(nr)] for j in range(nc)]


def matvec(m: Mat, v: Vec) -> Vec:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m]


def matmul(a: Mat, b: Mat) -> Mat:
    nr, nk = shape(a)
    _, nc = shape(b)
    out = zeros(nr, nc)
    for i in range(nr):
        for k in range(nk):
            if a[i][k]:
                aik = a[i][k]
                for j in range(nc):
                    out[i][j] += aik * b[k][j]
    return out


def columns(m: Mat) -> list[Vec]:
    nr, nc = shape(m)
    return [[m[i][j] for i in range(nr)] for j in range(nc)]


def from_columns(cols: list[Vec], nrows: int | None = None) -> Mat:
    if not cols:
        return [[] for _ in range(nrows or 0)]
    nr = len(cols[0])
    return [[c[i] for c in cols] for i in range(nr)]


def rref(m: Mat, ncols: int | None = None) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns, leftmost pivot first.

    `ncols` disambiguates the width of a matrix with no rows.
    """
    nr, nc = shape(m)
    if not m and ncols is not None:
        nc = ncols
    r = [row[:] for row in m]
    pivots: list[int] = []
    row = 0
    for col in range(nc):
        sel = next((i for i in range(row, nr) if r[i][col] != 0), None)
        if sel is None:
            continue
        r[row], r[sel] = r[sel], r[row]
        inv = Fraction(1) / r[row][col]
        r[row] = [x * inv for x in r[row]]
        for i in range(nr):
            if i != row and r[i][col] != 0:
                f = r[i][col]
                r[i] = [a - f * b for a, b in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    return r, pivots


def rank(m: Mat, ncols: int | None = None) -> int:
    return len(rref(m, ncols)[1])


def det(m: Mat) -> Fraction:
    nr, nc = shape(m)
    if nr != nc:
        raise ValueError("determinant of a non-square matrix")
    a = [row[:] for row in m]
    d = Fraction(1)
    for col in range(nc):
        sel = next((i for i in range(col, nr) if a[i][col] != 0), None)
        if sel is None:
            return Fraction(0)
        if sel != col:
            a[col], a[sel] = a[sel], a[col]
            d = -d
        d *= a[col][col]
        inv = Fraction(1) / a[col][col]
        for i in range(col + 1, nr):
            if a[i][col] != 0:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return d


def sign_det(m: Mat) -> int:
    d = det(m)
    if d == 0:
        raise ValueError("matrix is singular")
    return 1 if d > 0 else -1


def kernel_basis(m: Mat, ncols: int | None = None) -> list[Vec]:
    """Null space basis, one vector per free column, by increasing column.

    The vector for free column j has entry 1 in slot j and is supported on
    pivot slots otherwise, read off from the RREF.
    """
    nr, nc = shape(m)
    if not m and ncols is not None:
        nc = ncols
    r, pivots = rref(m, ncols)
    pivot_set = set(pivots)
    basis = []
    for j in range(nc):
        if j in pivot_set:
            continue
        v = [Fraction(0)] * nc
        v[j] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            v[pc] = -r[row_i][j]
        basis.append(v)
    return basis


def coker_reps(m: Mat) -> list[Vec]:
    """Standard basis vectors spanning a complement of the column space.

    Scans e_0, e_1, ... and keeps the ones independent from the image and
    from the vectors already kept.
    """
    nr, nc = shape(m)
    cols = columns(m)
    reps: list[Vec] = []
    r = rank(m)
    need = nr - r
    cur = r
    for i in range(nr):
        if len(reps) == need:
            break
        e = [Fraction(1 if k == i else 0) for k in range(nr)]
        cand = from_columns(cols + reps + [e], nr)
        if rank(cand) > cur:
            reps.append(e)
            cur += 1
    return reps


def solve(m: Mat, b: Vec) -> Vec | None:
    """One solution of m x = b (free variables set to 0), or None."""
    nr, nc = shape(m)
    aug = [m[i][:] + [b[i]] for i in range(nr)]
    r, pivots = rref(aug)
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for row_i, pc in enumerate(pivots):
        x[pc] = r[row_i][nc]
    return x


def coords_in_basis(basis: list[Vec], v: Vec) -> Vec:
    """Coordinates of v in a basis given as a list of vectors."""
    if not basis:
        if any(x != 0 for x in v):
            raise ValueError("nonzero vector in zero-dimensional space")
        return []
    m = from_columns(basis, len(v))
    x = solve(m, v)
    if x is None or matvec(m, x) != list(v):
        raise ValueError("vector is not in the span of the basis")
    return x
