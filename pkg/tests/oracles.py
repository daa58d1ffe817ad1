"""Independent oracles: dense Gaussian elimination over Fraction and sympy
conversions.  Nothing here reuses the package's echelon or kernel machinery.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from volform import Chart, LaurentPoly, VectorField


def poly_to_sympy(p: LaurentPoly):
    symbols = sympy.symbols(p.variables)
    total = sympy.Integer(0)
    for exps, coeff in p.terms:
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for sym, e in zip(symbols, exps):
            term *= sym ** e
        total += term
    return sympy.expand(total)


def sympy_equal(p: LaurentPoly, expr) -> bool:
    return sympy.simplify(poly_to_sympy(p) - expr) == 0


def dense_nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Right nullspace basis of a dense rational matrix by textbook RREF."""
    if not rows:
        return []
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for free in free_cols:
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row_idx, col in enumerate(pivots):
            vec[col] = -m[row_idx][free]
        basis.append(vec)
    return basis


def dense_rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - len(dense_nullspace(rows)) if rows else 0


def row_space_contains(rows: list[list[Fraction]], vec: list[Fraction]) -> bool:
    base = [list(r) for r in rows]
    before = _rank_of(base)
    return _rank_of(base + [list(vec)]) == before


def _rank_of(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = Fraction(1) / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def brute_force_kernel(
    xi: VectorField, on: Chart, degree_bound: int
) -> tuple[int, list[list[Fraction]], list[tuple]]:
    """Kernel of f -> xi(f) on ambient monomials of degree <= bound, solved
    densely from scratch.

    Returns (dimension, kernel function vectors, column keys); the vectors
    are coefficient rows of the kernel *functions* in normal form over the
    returned Laurent-monomial columns.
    """
    from volform import monomials_up_to

    monomials = monomials_up_to(on, degree_bound)
    reduced = [on.normal_form(m) for m in monomials]
    images = [xi.apply(m) for m in monomials]

    image_cols = sorted({e for img in images for e, _ in img.terms})
    matrix = [
        [dict(img.terms).get(col, Fraction(0)) for col in image_cols] for img in images
    ]
    # combos c with sum_i c_i * xi(m_i) = 0: right nullspace of matrix^T
    transposed = [
        [matrix[i][j] for i in range(len(images))] for j in range(len(image_cols))
    ]
    combos = dense_nullspace(transposed) if image_cols else [
        [Fraction(1) if i == j else Fraction(0) for i in range(len(images))]
        for j in range(len(images))
    ]

    value_cols = sorted({e for red in reduced for e, _ in red.terms})
    functions = []
    for combo in combos:
        vec = [Fraction(0)] * len(value_cols)
        for i, c in enumerate(combo):
            if c == 0:
                continue
            for e, coeff in reduced[i].terms:
                vec[value_cols.index(e)] += c * coeff
        if any(v != 0 for v in vec):
            functions.append(vec)
    # dimension of the function span
    dimension = _rank_of(functions) if functions else 0
    return dimension, functions, value_cols
