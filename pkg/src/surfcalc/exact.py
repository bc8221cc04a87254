"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; nothing in the engine ever touches a
float. Matrices are small (at most a handful of contracted curves), so plain
Gaussian elimination over Q is all that is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(value, bool):
        raise UsageError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise UsageError(f"not an exact rational: {value!r}")


def fmt(q: Fraction) -> str:
    """Reduced ``p/q`` string (``"4"`` for integers)."""
    return str(Fraction(q))


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise UsageError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> QMatrix:
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise UsageError("ragged matrix rows")
        return cls(n, m, tuple(to_rational(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i]
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def submatrix(self, indices: Sequence[int]) -> QMatrix:
        return QMatrix.from_rows([[self[i, j] for j in indices] for i in indices])

    def matvec(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise UsageError("dimension mismatch in matrix-vector product")
        return tuple(sum((self[i, j] * x[j] for j in range(self.cols)), Fraction(0))
                     for i in range(self.rows))

    def __str__(self):
        return "[" + ", ".join(
            "[" + ", ".join(fmt(x) for x in self.row(i)) + "]"
            for i in range(self.rows)) + "]"


def solve_linear(A: QMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``A x = b`` exactly; ``None`` flags a singular system."""
    if not A.is_square:
        raise UsageError("solve_linear needs a square matrix")
    if len(b) != A.rows:
        raise UsageError(f"right-hand side has length {len(b)}, expected {A.rows}")
    n = A.rows
    M = [list(A.row(i)) + [to_rational(b[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(M[i][n] for i in range(n))


def determinant(A: QMatrix) -> Fraction:
    if not A.is_square:
        raise UsageError("determinant of a non-square matrix")
    n = A.rows
    M = A.to_rows()
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        p = M[col][col]
        det *= p
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / p
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def leading_minors(A: QMatrix) -> list[Fraction]:
    return [determinant(A.submatrix(range(k))) for k in range(1, A.rows + 1)]


def is_negative_definite(A: QMatrix) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign (-1)^k."""
    if not A.is_symmetric():
        raise UsageError("negative-definiteness test needs a symmetric matrix")
    if A.rows == 0:
        return True
    return all((-1) ** k * m > 0 for k, m in enumerate(leading_minors(A), start=1))


def rref(rows: Iterable[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns nonzero rows and their pivot columns."""
    M = [[to_rational(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        p = M[r][col]
        M[r] = [x / p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` for the matrix with the given rows."""
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
