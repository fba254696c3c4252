"""Exact integer linear algebra.

Everything here works with Python integers (arbitrary precision) and, where a
rational solve is unavoidable, :class:`fractions.Fraction`.  Matrices are
immutable; all functions are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence


Vector = tuple[int, ...]


class IntMatrix:
    """An immutable integer matrix.

    Rows are stored as tuples of ints.  The column count is stored separately
    so that ``0 x n`` matrices keep their shape.
    """

    __slots__ = ("_rows", "_ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]] = (), cols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns, got {len(r)}")
        self._rows = data
        self._ncols = cols
        self._hash = None

    # construction helpers

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(((0,) * n for _ in range(m)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        if not columns:
            return cls(((),) * nrows, 0) if nrows else cls((), 0)
        return cls(zip(*columns), len(columns)) if nrows else cls((), len(columns))

    # shape and access

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self._ncols)]

    def __iter__(self) -> Iterator[Vector]:
        return iter(self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows), self.rows) if self._rows else IntMatrix(((),) * self._ncols, 0) if self._ncols else IntMatrix((), 0)

    # arithmetic

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self._ncols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self._rows),
                other.cols,
            )
        v = tuple(other)
        if len(v) != self._ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix((tuple(-x for x in r) for r in self._rows), self._ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._rows, self._ncols))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()}, cols={self._ncols})"

    def is_square(self) -> bool:
        return self.rows == self._ncols

    def det(self) -> int:
        return determinant(self)

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(determinant(self)) == 1


def as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix(a)


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ A @ right`` is diagonal with entries ``diag`` (d1 | d2 | ...)."""

    left: IntMatrix
    diag: tuple[int, ...]
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def diagonal_matrix(self, shape: tuple[int, int]) -> IntMatrix:
        m, n = shape
        rows = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diag):
            rows[i][i] = d
        return IntMatrix(rows, n)


def _smallest_nonzero(M: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    best_abs = 0
    for i in range(t, len(M)):
        row = M[i]
        for j in range(t, len(row)):
            a = row[j]
            if a and (best is None or abs(a) < best_abs):
                best, best_abs = (i, j), abs(a)
                if best_abs == 1:
                    return best
    return best


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: the nonzero entry of smallest absolute value in the remaining
    submatrix, ties broken by row-major position.
    """
    A = as_matrix(A)
    m, n = A.shape
    M = A.tolist()
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for row in M:
            row[j], row[k] = row[k], row[j]
        for row in R:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in M:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        pos = _smallest_nonzero(M, t)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    dirty = dirty or M[t][j] != 0
            if dirty:
                pos = _smallest_nonzero(M, t)
                continue
            # row and column clear; enforce divisibility of the rest
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
            pos = _smallest_nonzero(M, t)
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            L[t] = [-a for a in L[t]]
        diag.append(M[t][t])
        t += 1
    diag.extend([0] * (min(m, n) - len(diag)))
    return SmithDecomposition(IntMatrix(L, m), tuple(diag), IntMatrix(R, n))


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows in echelon form with positive pivots and entries
    above each pivot reduced into ``[0, pivot)``.  Unique for a given lattice.
    """
    H = [list(r) for r in rows if any(r)]
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= len(H):
            break
        # gcd-combine column c over rows r..end
        while True:
            nz = [i for i in range(r, len(H)) if H[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: (abs(H[i][c]), i))
            H[r], H[k] = H[k], H[r]
            done = True
            for i in range(r + 1, len(H)):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if r < len(H) and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
            pivots.append(c)
            r += 1
    return [tuple(h) for h in H[:r]]


def kernel_basis(A) -> IntMatrix:
    """Basis of the integer kernel of ``A``, as the columns of the result.

    The kernel of an integer matrix is a saturated sublattice; the basis is
    returned in Hermite normal form so it is canonical.
    """
    A = as_matrix(A)
    n = A.cols
    snf = smith_normal_form(A)
    r = snf.rank
    vecs = [snf.right.col(j) for j in range(r, n)]
    vecs = hermite_normal_form(vecs, n)
    return IntMatrix.from_columns(vecs, n)


def cokernel_invariants(A) -> tuple[int, tuple[int, ...]]:
    """Structure of ``Z^rows / A Z^cols`` as (free rank, torsion invariants > 1)."""
    A = as_matrix(A)
    snf = smith_normal_form(A)
    r = snf.rank
    return A.rows - r, tuple(d for d in snf.diag[:r] if d > 1)


def determinant(A) -> int:
    """Bareiss fraction-free determinant."""
    A = as_matrix(A)
    n = A.rows
    if A.cols != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(vectors: Sequence[Sequence], ncols: int | None = None) -> int:
    """Rank over Q of a list of (integer or rational) row vectors."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    n = len(rows[0]) if ncols is None else ncols
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_rational(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of ``A x = b`` or ``None`` if inconsistent.

    ``A`` is given as a list of rows.  Free variables are set to zero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return ()
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [a * inv for a in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * p for a, p in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x)


def inverse_unimodular(A) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    A = as_matrix(A)
    n = A.rows
    cols = []
    rows = A.tolist()
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_rational(rows, e)
        if x is None or any(v.denominator != 1 for v in x):
            raise ValueError("matrix is not unimodular")
        cols.append([int(v) for v in x])
    return IntMatrix.from_columns(cols, n)


def left_inverse(A) -> IntMatrix:
    """Integer left inverse of an injective matrix with saturated image.

    Raises ``ValueError`` when the image is not saturated (no integer left
    inverse exists) or ``A`` is not injective.
    """
    A = as_matrix(A)
    m, n = A.shape
    snf = smith_normal_form(A)
    if snf.rank != n or any(d != 1 for d in snf.diag[:n]):
        raise ValueError("matrix is not injective with saturated image")
    # A = L^-1 [I;0] R^-1  =>  R [I 0] L is a left inverse
    L = snf.left.tolist()
    proj = IntMatrix(L[:n], m)
    return snf.right @ proj


def saturated_span_basis(vectors: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Hermite basis (rows) of ``span_Q(vectors) ∩ Z^n``."""
    vecs = [tuple(v) for v in vectors if any(v)]
    if not vecs:
        return []
    perp = kernel_basis(IntMatrix(vecs, n))  # columns w with <w, v> = 0
    if perp.cols == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    sat = kernel_basis(perp.T)
    return hermite_normal_form(sat.columns(), n)


def echelon_coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> tuple | None:
    """Coordinates of ``v`` in a Hermite-echelon ``basis``, or ``None``.

    Works for integer or rational ``v``; returns exact coordinates (ints when
    possible) if ``v`` lies in the rational span.
    """
    rem = [Fraction(x) for x in v]
    coords = []
    for b in basis:
        p = next(j for j, x in enumerate(b) if x)
        c = rem[p] / b[p]
        coords.append(c)
        if c:
            rem = [a - c * x for a, x in zip(rem, b)]
    if any(rem):
        return None
    return tuple(int(c) if c.denominator == 1 else c for c in coords)


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def parallelepiped_points(U: Sequence[Sequence[int]]) -> list[tuple[Vector, tuple[Fraction, ...]]]:
    """Lattice points ``sum c_i u_i`` with ``c_i`` in ``[0, 1)``.

    ``U`` lists linearly independent integer vectors spanning a saturated
    lattice of the same rank (square case: vectors in ``Z^r``).  Returns pairs
    (point, coefficients), including the origin.  The count equals ``|det U|``.
    """
    r = len(U)
    if r == 0:
        return [((), ())]
    cols = IntMatrix.from_columns(U, r)  # columns are the u_i
    snf = smith_normal_form(cols)
    Linv = inverse_unimodular(snf.left)
    rows = cols.tolist()
    out = {}
    for a in itertools.product(*(range(d) for d in snf.diag)):
        w = Linv @ a
        c = solve_rational(rows, w)
        c = tuple(x - (x.numerator // x.denominator) for x in c)
        pt = tuple(sum(ci * u[k] for ci, u in zip(c, U)) for k in range(r))
        pt = tuple(int(x) for x in pt)
        out[pt] = c
    return sorted(out.items())
