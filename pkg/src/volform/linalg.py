"""Exact linear algebra over the rationals.

Dense helpers cover the tiny matrices that appear in group computations and
Jacobians; :class:`SpanBuilder` provides incremental echelonization over an
arbitrary ordered column space (used with Laurent-monomial columns).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .errors import GroupError

Matrix = tuple[tuple[Fraction, ...], ...]


def make_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    assert all(len(row) == k for row in a)
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; GroupError when singular."""
    n = len(a)
    aug = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise GroupError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def det_bareiss(a: Matrix) -> Fraction:
    """Determinant by fraction-free Bareiss elimination.

    Rows are scaled to integers first (Bareiss needs an integral domain); the
    accumulated scale divides the integer determinant at the end.
    """
    n = len(a)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m: list[list[int]] = []
    for row in a:
        lcm = 1
        for x in row:
            d = Fraction(x).denominator
            lcm = lcm * d // _gcd(lcm, d)
        scale *= lcm
        m.append([int(Fraction(x) * lcm) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], 1) / scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def solve_exact(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of A x = b over the rationals, or None when inconsistent.

    Free variables are set to zero, which makes the result deterministic.
    """
    rows = [list(row) + [rhs] for row, rhs in zip(a, b)]
    nrows, ncols = len(rows), len(a[0]) if a else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row_idx, col_idx in pivots:
        x[col_idx] = rows[row_idx][ncols]
    return x


class SpanBuilder:
    """Incremental reduced echelon form over sparse rational vectors.

    Vectors are dicts mapping hashable column keys to nonzero Fractions; the
    column order is fixed by ``key_order`` (largest column = pivot, compared
    descending).  Optionally tracks a dense augmentation so that dependent
    inserts report the linear combination that produced them.
    """

    def __init__(self, key_order: Callable[[Hashable], object]):
        self._key_order = key_order
        # rows: list of (pivot_key, vector, augmentation) in insertion-reduced form
        self._rows: list[tuple[Hashable, dict, list[Fraction]]] = []
        self._n_inserted = 0

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: dict, aug: list[Fraction]) -> tuple[dict, list[Fraction]]:
        vec = dict(vec)
        for pivot, row, row_aug in self._rows:
            c = vec.get(pivot)
            if c:
                for k, v in row.items():
                    nv = vec.get(k, Fraction(0)) - c * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
                for i, v in enumerate(row_aug):
                    aug[i] -= c * v
        return vec, aug

    def insert(self, vec: dict) -> tuple[bool, list[Fraction]]:
        """Insert a vector.  Returns (was_new, combination).

        ``combination`` expresses the *residual-free* dependency: when the
        vector reduces to zero, it lists coefficients over previously inserted
        vectors (by insertion index) with the new vector's own coefficient 1.
        """
        aug = [Fraction(0)] * self._n_inserted + [Fraction(1)]
        self._n_inserted += 1
        for _, _, row_aug in self._rows:
            row_aug.append(Fraction(0))
        vec, aug = self._reduce(vec, aug)
        if not vec:
            return (False, aug)
        pivot = max(vec.keys(), key=self._key_order)  # type: ignore[arg-type]
        inv = Fraction(1) / vec[pivot]
        vec = {k: v * inv for k, v in vec.items()}
        aug = [v * inv for v in aug]
        # back-substitute to keep the basis fully reduced
        for i, (p, row, row_aug) in enumerate(self._rows):
            c = row.get(pivot)
            if c:
                new_row = dict(row)
                for k, v in vec.items():
                    nv = new_row.get(k, Fraction(0)) - c * v
                    if nv:
                        new_row[k] = nv
                    else:
                        new_row.pop(k, None)
                new_aug = [x - c * y for x, y in zip(row_aug, aug)]
                self._rows[i] = (p, new_row, new_aug)
        self._rows.append((pivot, vec, list(aug)))
        self._rows.sort(key=lambda t: self._key_order(t[0]), reverse=True)
        return (True, aug)

    def contains(self, vec: dict) -> bool:
        residual, _ = self._reduce(vec, [Fraction(0)] * (self._n_inserted + 1))
        return not residual

    def reduce(self, vec: dict) -> dict:
        residual, _ = self._reduce(vec, [Fraction(0)] * (self._n_inserted + 1))
        return residual

    def basis(self) -> list[dict]:
        """Reduced echelon basis, pivot columns descending."""
        return [dict(row) for _, row, _ in self._rows]
