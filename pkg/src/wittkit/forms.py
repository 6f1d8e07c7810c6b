"""Quadratic forms as symmetric Gram matrices, with exact congruence machinery.

All operations are pure and every basis change is certified by an
IsometryWitness whose congruence identity is re-checked at construction
time, so a bug cannot silently corrupt downstream results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from . import linalg
from .errors import DegenerateForm, DimensionMismatch, FieldMismatch
from .fields import FieldCtx, Scalar, SquareClass, square_class
from .linalg import Matrix, Vector


@dataclass(frozen=True)
class GramMatrix:
    """A quadratic form q(x) = x^t B x given by its symmetric matrix B."""

    ctx: FieldCtx
    entries: Matrix

    def __post_init__(self):
        coerced = linalg.coerce_matrix(self.ctx, self.entries)
        if coerced and len(coerced) != len(coerced[0]):
            raise DimensionMismatch("Gram matrix must be square")
        if not linalg.is_symmetric(coerced):
            raise ValueError("Gram matrix must be symmetric; use symmetrize()")
        object.__setattr__(self, "entries", coerced)

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_diagonal(self) -> bool:
        return all(
            self.ctx.is_zero(self.entries[i][j])
            for i in range(self.n)
            for j in range(self.n)
            if i != j
        )

    def rank(self) -> int:
        return linalg.rank(self.ctx, self.entries) if self.n else 0

    def is_nondegenerate(self) -> bool:
        return self.rank() == self.n

    def __str__(self) -> str:
        rows = ",".join(
            "[" + ",".join(self.ctx.format_scalar(x) for x in row) + "]"
            for row in self.entries
        )
        return f"mat[{rows}]"


@dataclass(frozen=True)
class DiagonalForm:
    """The diagonal form <a_1, ..., a_n>, i.e. a_1 x_1^2 + ... + a_n x_n^2."""

    ctx: FieldCtx
    entries: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple(self.ctx.coerce(x) for x in self.entries)
        )

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_nondegenerate(self) -> bool:
        return all(not self.ctx.is_zero(a) for a in self.entries)

    def gram(self) -> GramMatrix:
        zero = self.ctx.zero()
        rows = tuple(
            tuple(self.entries[i] if i == j else zero for j in range(self.n))
            for i in range(self.n)
        )
        return GramMatrix(self.ctx, rows)

    def __str__(self) -> str:
        return "<" + ",".join(self.ctx.format_scalar(a) for a in self.entries) + ">"


FormLike = Union[GramMatrix, DiagonalForm]


def diagonal(ctx: FieldCtx, entries: Sequence) -> DiagonalForm:
    return DiagonalForm(ctx, tuple(entries))


def as_gram(q: FormLike) -> GramMatrix:
    return q.gram() if isinstance(q, DiagonalForm) else q


def symmetrize(ctx: FieldCtx, raw: Sequence[Sequence]) -> GramMatrix:
    """Gram matrix b_ij = (a_ij + a_ji)/2 of a raw coefficient matrix.

    Represents the same polynomial; division by 2 is allowed because the
    supported fields all have characteristic != 2.
    """
    a = linalg.coerce_matrix(ctx, raw)
    if a and len(a) != len(a[0]):
        raise DimensionMismatch("coefficient matrix must be square")
    two = ctx.add(ctx.one(), ctx.one())
    n = len(a)
    rows = tuple(
        tuple(ctx.div(ctx.add(a[i][j], a[j][i]), two) for j in range(n))
        for i in range(n)
    )
    return GramMatrix(ctx, rows)


def evaluate(q: FormLike, v: Sequence) -> Scalar:
    """The exact value q(v) = v^t B v."""
    ctx = q.ctx
    vec = linalg.coerce_vector(ctx, v)
    if len(vec) != q.n:
        raise DimensionMismatch(f"form has dimension {q.n}, vector has {len(vec)}")
    if isinstance(q, DiagonalForm):
        acc = ctx.zero()
        for a, x in zip(q.entries, vec):
            acc = ctx.add(acc, ctx.mul(a, ctx.mul(x, x)))
        return acc
    bv = linalg.mat_vec(ctx, q.entries, vec)
    return linalg._dot(ctx, vec, bv)


def bilinear(q: FormLike, x: Sequence, y: Sequence) -> Scalar:
    """The polarization x^t B y; satisfies 2B(x,y) = q(x+y) - q(x) - q(y)."""
    gram = as_gram(q)
    ctx = gram.ctx
    xv = linalg.coerce_vector(ctx, x)
    yv = linalg.coerce_vector(ctx, y)
    if len(xv) != gram.n or len(yv) != gram.n:
        raise DimensionMismatch("vector dimensions do not match the form")
    return linalg._dot(ctx, xv, linalg.mat_vec(ctx, gram.entries, yv))


def apply_congruence(q: FormLike, m: Sequence[Sequence]) -> GramMatrix:
    """The congruent Gram matrix M^t B M (M need not be invertible here)."""
    gram = as_gram(q)
    ctx = gram.ctx
    mm = linalg.coerce_matrix(ctx, m)
    if len(mm) != gram.n:
        raise DimensionMismatch("congruence matrix size does not match the form")
    mt = linalg.transpose(mm)
    return GramMatrix(ctx, linalg.mat_mul(ctx, mt, linalg.mat_mul(ctx, gram.entries, mm)))


@dataclass(frozen=True)
class IsometryWitness:
    """An invertible M certifying source(x) = target(Mx), i.e. S = M^t T M.

    The congruence identity and det(M) != 0 are checked exactly on
    construction; ``trace`` records the elementary steps that built M.
    """

    matrix: Matrix
    source: GramMatrix
    target: GramMatrix
    trace: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ctx = self.source.ctx
        object.__setattr__(self, "matrix", linalg.coerce_matrix(ctx, self.matrix))
        object.__setattr__(self, "trace", tuple(self.trace))
        if not self.check():
            raise ValueError("isometry witness fails its congruence identity")

    def check(self) -> bool:
        ctx = self.source.ctx
        if self.target.ctx != ctx:
            return False
        transported = apply_congruence(self.target, self.matrix)
        if transported.entries != self.source.entries:
            return False
        return self.source.n == 0 or not ctx.is_zero(linalg.det(ctx, self.matrix))


def _apply_column_op(ctx, b, m, j, k, c):
    # basis change e_j <- e_j + c*e_k: B <- E^t B E and M <- M E, in place;
    # the column update must run before the row update so the (j, j) entry
    # picks up both contributions.
    n = len(b)
    for i in range(n):
        m[i][j] = ctx.add(m[i][j], ctx.mul(c, m[i][k]))
    for i in range(n):
        b[i][j] = ctx.add(b[i][j], ctx.mul(c, b[i][k]))
    for i in range(n):
        b[j][i] = ctx.add(b[j][i], ctx.mul(c, b[k][i]))


def _swap_basis(ctx, b, m, i, j):
    n = len(b)
    for r in range(n):
        m[r][i], m[r][j] = m[r][j], m[r][i]
    b[i], b[j] = b[j], b[i]
    for r in range(n):
        b[r][i], b[r][j] = b[r][j], b[r][i]


def diagonalize(q: FormLike) -> tuple[DiagonalForm, IsometryWitness]:
    """Diagonalize by symmetric elimination; returns (D, w) with M^t q M = diag(D).

    Pivot policy (deterministic): take the first nonzero diagonal entry of
    the trailing block; if the trailing diagonal is all zero but some
    off-diagonal entry b_ij != 0 (first such in i<j lexicographic order),
    repair with the basis change e_i <- e_i + e_j, which creates the
    nonzero diagonal entry 2*b_ij (valid since char != 2).  Degenerate
    input is fine; zeros remain in D.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    n = gram.n
    b = [list(row) for row in gram.entries]
    m = [list(row) for row in linalg.identity(ctx, n)]
    trace: list[str] = []

    for k in range(n):
        if ctx.is_zero(b[k][k]):
            pivot = next(
                (i for i in range(k, n) if not ctx.is_zero(b[i][i])), None
            )
            if pivot is None:
                pair = next(
                    (
                        (i, j)
                        for i in range(k, n)
                        for j in range(i + 1, n)
                        if not ctx.is_zero(b[i][j])
                    ),
                    None,
                )
                if pair is None:
                    break  # trailing block is zero; remaining diagonal entries are 0
                i, j = pair
                _apply_column_op(ctx, b, m, i, j, ctx.one())
                trace.append(f"repair: e{i + 1} <- e{i + 1} + e{j + 1}")
                pivot = i
            if pivot != k:
                _swap_basis(ctx, b, m, k, pivot)
                trace.append(f"swap e{k + 1} <-> e{pivot + 1}")
        pivot_value = b[k][k]
        for j in range(k + 1, n):
            if ctx.is_zero(b[k][j]):
                continue
            factor = ctx.neg(ctx.div(b[k][j], pivot_value))
            _apply_column_op(ctx, b, m, j, k, factor)
            trace.append(
                f"clear column {j + 1}: e{j + 1} <- e{j + 1} + "
                f"({ctx.format_scalar(factor)})*e{k + 1}"
            )

    diag = DiagonalForm(ctx, tuple(b[i][i] for i in range(n)))
    witness = IsometryWitness(
        matrix=tuple(tuple(row) for row in m),
        source=diag.gram(),
        target=gram,
        trace=tuple(trace) or ("already diagonal",),
    )
    return diag, witness


def radical_split(q: FormLike) -> tuple[GramMatrix, int, IsometryWitness]:
    """Split off the radical: q = M^t (q_nondeg _|_ 0) M with null_dim = n - rank.

    The returned witness has source = q and target = the split diagonal
    form with its zero block last.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    diag, w = diagonalize(gram)
    order = [i for i, a in enumerate(diag.entries) if not ctx.is_zero(a)] + [
        i for i, a in enumerate(diag.entries) if ctx.is_zero(a)
    ]
    perm = linalg.permutation_matrix(ctx, order)
    # columns of (w.matrix @ perm) reorder the diagonalizing basis: zeros last
    m_perm = linalg.mat_mul(ctx, w.matrix, perm)
    reordered = tuple(diag.entries[i] for i in order)
    nonzero = tuple(a for a in reordered if not ctx.is_zero(a))
    null_dim = gram.n - len(nonzero)
    target = DiagonalForm(ctx, reordered).gram()
    if gram.n:
        m_inv = linalg.inverse(ctx, m_perm)
    else:
        m_inv = ()
    witness = IsometryWitness(
        matrix=m_inv,
        source=gram,
        target=target,
        trace=w.trace + (f"radical: {null_dim} null direction(s) moved last",),
    )
    q_nondeg = DiagonalForm(ctx, nonzero).gram()
    return q_nondeg, null_dim, witness


def direct_sum(q1: FormLike, q2: FormLike) -> GramMatrix:
    """Orthogonal sum: block-diagonal Gram matrix."""
    g1, g2 = as_gram(q1), as_gram(q2)
    if g1.ctx != g2.ctx:
        raise FieldMismatch("direct sum needs both forms over the same field")
    return GramMatrix(g1.ctx, linalg.block_diag(g1.ctx, g1.entries, g2.entries))


def tensor_product(q1: FormLike, q2: FormLike) -> GramMatrix:
    """Tensor product: Kronecker product of Gram matrices (dim multiplies)."""
    g1, g2 = as_gram(q1), as_gram(q2)
    if g1.ctx != g2.ctx:
        raise FieldMismatch("tensor product needs both forms over the same field")
    return GramMatrix(g1.ctx, linalg.kron(g1.ctx, g1.entries, g2.entries))


def signed_discriminant(d: DiagonalForm) -> SquareClass:
    """Square class of (-1)^(n(n-1)/2) * a_1 ... a_n; needs a nondegenerate form."""
    ctx = d.ctx
    if not d.is_nondegenerate():
        raise DegenerateForm("signed discriminant needs all diagonal entries nonzero")
    prod = ctx.one()
    for a in d.entries:
        prod = ctx.mul(prod, a)
    if (d.n * (d.n - 1) // 2) % 2:
        prod = ctx.neg(prod)
    return square_class(ctx, prod)
