"""Exact dense linear algebra over a FieldCtx.

Matrices are tuples of row tuples; vectors are tuples.  Everything is done
with the context's field operations, so results are exact over Q, F_p and
the sign-tracked reals alike.  All helpers tolerate 0x0 matrices.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionMismatch
from .fields import FieldCtx, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]
Vector = tuple[Scalar, ...]


def coerce_vector(ctx: FieldCtx, v: Sequence) -> Vector:
    return tuple(ctx.coerce(x) for x in v)


def coerce_matrix(ctx: FieldCtx, rows: Sequence[Sequence]) -> Matrix:
    out = tuple(tuple(ctx.coerce(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise DimensionMismatch("ragged matrix")
    return out


def identity(ctx: FieldCtx, n: int) -> Matrix:
    one, zero = ctx.one(), ctx.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_mul(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    if not a or not b:
        return tuple(() for _ in a)
    cols = transpose(b)
    return tuple(
        tuple(_dot(ctx, row, col) for col in cols) for row in a
    )


def _dot(ctx: FieldCtx, x: Vector, y: Vector) -> Scalar:
    acc = ctx.zero()
    for xi, yi in zip(x, y):
        acc = ctx.add(acc, ctx.mul(xi, yi))
    return acc


def mat_vec(ctx: FieldCtx, a: Matrix, v: Vector) -> Vector:
    if a and len(a[0]) != len(v):
        raise DimensionMismatch(f"matrix has {len(a[0])} columns, vector has {len(v)}")
    return tuple(_dot(ctx, row, v) for row in a)


def mat_scale(ctx: FieldCtx, c: Scalar, a: Matrix) -> Matrix:
    return tuple(tuple(ctx.mul(c, x) for x in row) for row in a)


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def det(ctx: FieldCtx, m: Matrix) -> Scalar:
    """Determinant by fraction-producing Gaussian elimination (exact)."""
    n = len(m)
    a = [list(row) for row in m]
    result = ctx.one()
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if not ctx.is_zero(a[r][col])), None)
        if pivot_row is None:
            return ctx.zero()
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            result = ctx.neg(result)
        pivot = a[col][col]
        result = ctx.mul(result, pivot)
        for r in range(col + 1, n):
            if ctx.is_zero(a[r][col]):
                continue
            factor = ctx.div(a[r][col], pivot)
            for c in range(col, n):
                a[r][c] = ctx.sub(a[r][c], ctx.mul(factor, a[col][c]))
    return result


def inverse(ctx: FieldCtx, m: Matrix) -> Matrix:
    """Inverse by Gauss-Jordan; raises ZeroDivisionError on singular input."""
    n = len(m)
    a = [list(row) + list(identity(ctx, n)[i]) for i, row in enumerate(m)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if not ctx.is_zero(a[r][col])), None)
        if pivot_row is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        inv_pivot = ctx.inv(a[col][col])
        a[col] = [ctx.mul(inv_pivot, x) for x in a[col]]
        for r in range(n):
            if r == col or ctx.is_zero(a[r][col]):
                continue
            factor = a[r][col]
            a[r] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def rank(ctx: FieldCtx, m: Matrix) -> int:
    rows = [list(r) for r in m]
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    rk, col = 0, 0
    while rk < n_rows and col < n_cols:
        pivot_row = next(
            (r for r in range(rk, n_rows) if not ctx.is_zero(rows[r][col])), None
        )
        if pivot_row is None:
            col += 1
            continue
        rows[rk], rows[pivot_row] = rows[pivot_row], rows[rk]
        pivot = rows[rk][col]
        for r in range(rk + 1, n_rows):
            if ctx.is_zero(rows[r][col]):
                continue
            factor = ctx.div(rows[r][col], pivot)
            rows[r] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(rows[r], rows[rk])]
        rk += 1
        col += 1
    return rk


def kernel_basis(ctx: FieldCtx, m: Matrix) -> tuple[Vector, ...]:
    """Basis of the right kernel {x : m x = 0}, via reduced row echelon form."""
    if not m:
        return ()
    n_cols = len(m[0])
    rows = [list(r) for r in m]
    pivots: list[int] = []
    rk = 0
    for col in range(n_cols):
        pivot_row = next(
            (r for r in range(rk, len(rows)) if not ctx.is_zero(rows[r][col])), None
        )
        if pivot_row is None:
            continue
        rows[rk], rows[pivot_row] = rows[pivot_row], rows[rk]
        inv_pivot = ctx.inv(rows[rk][col])
        rows[rk] = [ctx.mul(inv_pivot, x) for x in rows[rk]]
        for r in range(len(rows)):
            if r == rk or ctx.is_zero(rows[r][col]):
                continue
            factor = rows[r][col]
            rows[r] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(rows[r], rows[rk])]
        pivots.append(col)
        rk += 1
    free_cols = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for free in free_cols:
        vec = [ctx.zero()] * n_cols
        vec[free] = ctx.one()
        for r, piv in enumerate(pivots):
            vec[piv] = ctx.neg(rows[r][free])
        basis.append(tuple(vec))
    return tuple(basis)


def block_diag(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    zero = ctx.zero()
    top = tuple(tuple(row) + (zero,) * nb for row in a)
    bottom = tuple((zero,) * na + tuple(row) for row in b)
    return top + bottom


def kron(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    return tuple(
        tuple(ctx.mul(a[i][j], b[k][l]) for j in range(na) for l in range(nb))
        for i in range(na)
        for k in range(nb)
    )


def permutation_matrix(ctx: FieldCtx, perm: Sequence[int]) -> Matrix:
    """Matrix P with P e_j = e_{perm[j]} (column j carries 1 in row perm[j])."""
    n = len(perm)
    one, zero = ctx.one(), ctx.zero()
    return tuple(
        tuple(one if perm[j] == i else zero for j in range(n)) for i in range(n)
    )


def columns(m: Matrix) -> tuple[Vector, ...]:
    return transpose(m)


def from_columns(cols: Sequence[Vector]) -> Matrix:
    return transpose(tuple(cols))
