from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import factorint

from unitutte_core.errors import AlgebraDomainError


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization as strictly increasing (prime, exponent) pairs."""
    if n < 1:
        raise AlgebraDomainError(f"cannot factor {n}: not a positive integer")
    return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix with arbitrary-precision entries."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise AlgebraDomainError(
                f"entries do not form a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int | None = None) -> IntMatrix:
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(len(rows), ncols, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_array(self) -> np.ndarray:
        arr = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                arr[i, j] = int(x)
        return arr

    @classmethod
    def from_array(cls, arr: np.ndarray) -> IntMatrix:
        r, c = arr.shape
        return cls(r, c, tuple(tuple(int(arr[i, j]) for j in range(c)) for i in range(r)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise AlgebraDomainError("dimension mismatch in product")
        if self.rows == 0 or other.cols == 0:
            return IntMatrix(self.rows, other.cols, tuple(() for _ in range(self.rows)))
        if self.cols == 0:
            return IntMatrix.from_rows([[0] * other.cols for _ in range(self.rows)], other.cols)
        return IntMatrix.from_array(self.to_array().dot(other.to_array()))

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise AlgebraDomainError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithForm:
    """``U @ m @ V == diag(factors)`` with U, V unimodular."""

    factors: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix
    D: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d)


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form over Z with unimodular transforms.

    Pivot on the smallest nonzero entry of the trailing block, clear its
    row and column by Euclidean steps, and fold a row back in whenever the
    pivot fails to divide the rest of the block. Zero factors come last.
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        p = a[t][t]

        clean = True
        for i in range(t + 1, r):
            q = a[i][t] // p
            if q:
                add_row(i, t, -q)
            if a[i][t]:
                clean = False
        for j in range(t + 1, c):
            q = a[t][j] // p
            if q:
                add_col(j, t, -q)
            if a[t][j]:
                clean = False
        if not clean:
            continue

        bad = next(
            (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
            None,
        )
        if bad is not None:
            add_row(t, bad, 1)
            continue

        if p < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    factors = tuple(a[i][i] for i in range(min(r, c)))
    return SmithForm(
        factors=factors,
        U=IntMatrix.from_rows(u, r),
        V=IntMatrix.from_rows(v, c),
        D=IntMatrix.from_rows(a, c),
    )


def quotient_invariants(m: IntMatrix) -> tuple[int, int]:
    """(free rank, torsion order) of Z^rows / column span of ``m``."""
    snf = smith_normal_form(m)
    torsion = 1
    for d in snf.factors:
        if d:
            torsion *= d
    return m.rows - snf.rank, torsion
