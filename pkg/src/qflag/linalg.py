"""Exact dense linear algebra over Q(q^(1/l0)).

Matrices are lists of lists of QScalar.  Everything works by fraction
arithmetic; there is no pivoting heuristic beyond "first nonzero", which
keeps results deterministic.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .scalars import QScalar

Matrix = List[List[QScalar]]
Vector = List[QScalar]


def zeros(rows: int, cols: int, l0: int) -> Matrix:
    z = QScalar.zero(l0)
    return [[z for _ in range(cols)] for _ in range(rows)]


def identity(n: int, l0: int) -> Matrix:
    out = zeros(n, n, l0)
    one = QScalar.one(l0)
    for i in range(n):
        out[i][i] = one
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    n, k = len(a), len(a[0])
    if k != len(b):
        raise ValueError("shape mismatch")
    m = len(b[0]) if b else 0
    l0 = a[0][0].l0
    out = zeros(n, m, l0)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c.is_zero():
                continue
            bt = b[t]
            for j in range(m):
                if not bt[j].is_zero():
                    oi[j] = oi[j] + c * bt[j]
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [row_dot(row, v) for row in a]


def row_dot(row: Sequence[QScalar], v: Sequence[QScalar]) -> QScalar:
    out = None
    for c, x in zip(row, v):
        if c.is_zero() or x.is_zero():
            continue
        term = c * x
        out = term if out is None else out + term
    if out is None:
        return QScalar.zero(row[0].l0 if row else v[0].l0)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: QScalar) -> Matrix:
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with index convention (i,k),(j,l) -> i*nb+k."""
    if not a or not b:
        return []
    na, ma = len(a), len(a[0])
    nb, mb = len(b), len(b[0])
    l0 = a[0][0].l0
    out = zeros(na * nb, ma * mb, l0)
    for i in range(na):
        for j in range(ma):
            c = a[i][j]
            if c.is_zero():
                continue
            for k in range(nb):
                for l in range(mb):
                    if not b[k][l].is_zero():
                        out[i * nb + k][j * mb + l] = c * b[k][l]
    return out


def mat_eq(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if x != y:
                return False
    return True


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def first_mismatch(a: Matrix, b: Matrix) -> Optional[Tuple[int, int, QScalar, QScalar]]:
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return i, j, x, y
    return None


def rref(rows: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form (copy); returns (echelon, pivot columns)."""
    if not rows:
        return [], []
    mat = [list(r) for r in rows]
    ncols = len(mat[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if not mat[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[0])


def solve(a: Matrix, b: Vector) -> Optional[Vector]:
    """One exact solution of a x = b, or None if inconsistent."""
    if not a:
        return [] if all(x.is_zero() for x in b) else None
    n, m = len(a), len(a[0])
    l0 = b[0].l0 if b else a[0][0].l0
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    ech, pivots = rref(aug)
    if m in pivots:
        return None
    x = [QScalar.zero(l0) for _ in range(m)]
    for row, pc in zip(ech, pivots):
        x[pc] = row[m]
    return x


def nullspace(a: Matrix, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of the right kernel of a."""
    if not a:
        if ncols is None:
            return []
        l0 = 1
        raise ValueError("nullspace of empty matrix needs explicit scalars")
    m = len(a[0])
    l0 = a[0][0].l0
    ech, pivots = rref(a)
    free = [c for c in range(m) if c not in pivots]
    basis: List[Vector] = []
    for fc in free:
        v = [QScalar.zero(l0) for _ in range(m)]
        v[fc] = QScalar.one(l0)
        for row, pc in zip(ech, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if n == 0:
        return []
    l0 = a[0][0].l0
    aug = [list(a[i]) + identity(n, l0)[i] for i in range(n)]
    ech, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ArithmeticError("matrix not invertible")
    return [row[n:] for row in ech]


def column(mat: Matrix, j: int) -> Vector:
    return [row[j] for row in mat]


def from_columns(cols: List[Vector], l0: int) -> Matrix:
    if not cols:
        return []
    n = len(cols[0])
    out = zeros(n, len(cols), l0)
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            out[i][j] = x
    return out
