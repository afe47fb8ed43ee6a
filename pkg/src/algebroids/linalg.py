"""Exact rank, kernel and solve over Q by fraction-free elimination.

Rows are cleared of denominators first, then reduced with Bareiss' update
``a_ij <- (a_kk a_ij - a_ik a_kj) / prev_pivot``; every division is exact, so
intermediate entries stay bounded by minors of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        return cls(len(data), ncols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        if any(len(c) != rows for c in columns):
            raise ValueError("column length mismatch")
        data = tuple(tuple(Fraction(c[i]) for c in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def transpose(self) -> "QMatrix":
        cols = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return QMatrix(self.cols, self.rows, cols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("length mismatch")
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in self.entries)


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        m = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * m) for x in r])
    return out


def bareiss_echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (nonzero integer rows, pivot columns)."""
    m = [r for r in _integer_rows(rows) if any(r)]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    prev = 1
    k = 0
    nrows = len(m)
    for c in range(ncols):
        if k == nrows:
            break
        p = next((i for i in range(k, nrows) if m[i][c]), None)
        if p is None:
            continue
        if p != k:
            m[k], m[p] = m[p], m[k]
        piv = m[k][c]
        rk = m[k]
        for i in range(k + 1, nrows):
            ri = m[i]
            a = ri[c]
            if a:
                for j in range(c + 1, ncols):
                    ri[j] = (piv * ri[j] - a * rk[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if ri[j]:
                        ri[j] = (piv * ri[j]) // prev
            ri[c] = 0
        prev = piv
        pivots.append(c)
        k += 1
    return m[:k], pivots


def _solve_echelon(ech: list[list[int]], pivots: list[int], ncols: int,
                   free_values: dict[int, Fraction], rhs: Sequence[Fraction] | None = None) -> list[Fraction]:
    x = [Fraction(0)] * ncols
    for c, v in free_values.items():
        x[c] = v
    for r in range(len(pivots) - 1, -1, -1):
        p = pivots[r]
        row = ech[r]
        s = Fraction(rhs[r]) if rhs is not None else Fraction(0)
        for j in range(p + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[p] = s / row[p]
    return x


def mat_rank_kernel(M: QMatrix) -> tuple[int, list[Vector]]:
    """Exact rank and a kernel basis (one vector per free column)."""
    ech, pivots = bareiss_echelon(M.entries)
    rank = len(pivots)
    pivset = set(pivots)
    kernel = []
    for f in range(M.cols):
        if f in pivset:
            continue
        x = _solve_echelon(ech, pivots, M.cols, {f: Fraction(1)})
        kernel.append(tuple(x))
    return rank, kernel


def mat_rank(M: QMatrix) -> int:
    return len(bareiss_echelon(M.entries)[1])


def mat_solve(M: QMatrix, b: Sequence) -> Vector | None:
    """Some x with M x = b, or None when the system is inconsistent."""
    if len(b) != M.rows:
        raise ValueError("right-hand side length mismatch")
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(M.entries, b)]
    ech, pivots = bareiss_echelon(aug)
    if pivots and pivots[-1] == M.cols:
        return None
    rhs = [row[M.cols] for row in ech]
    core = [row[: M.cols] for row in ech]
    return tuple(_solve_echelon(core, pivots, M.cols, {}, rhs))


def span_membership(v: Sequence, basis: Sequence[Sequence]) -> bool:
    """True iff ``v`` is a rational combination of ``basis``."""
    n = len(v)
    if any(len(b) != n for b in basis):
        raise ValueError("length mismatch between vector and basis")
    if not any(v):
        return True
    if not basis:
        return False
    M = QMatrix.from_columns(list(basis), n)
    return mat_solve(M, v) is not None
