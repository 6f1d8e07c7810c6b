"""Seeded random instances for the property suites and the CLI.

Random isometries are built the way the theory builds them: as products
of hyperplane reflections with non-isotropic axes (optionally composed
with an entry-preserving permutation), which guarantees exact entries in
every supported field.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .cancellation import reflection_matrix
from .fields import FieldCtx, FieldKind
from .forms import DiagonalForm, FormLike, GramMatrix, as_gram, evaluate
from .linalg import Matrix

_Q_NUMERATORS = (-3, -2, -1, 1, 2, 3, 5)
_Q_DENOMINATORS = (1, 1, 1, 2, 3)


def random_nonzero_scalar(ctx: FieldCtx, rng: random.Random):
    if ctx.kind is FieldKind.PRIME:
        return rng.randrange(1, ctx.p)
    return Fraction(rng.choice(_Q_NUMERATORS), rng.choice(_Q_DENOMINATORS))


def random_scalar(ctx: FieldCtx, rng: random.Random):
    if ctx.kind is FieldKind.PRIME:
        return rng.randrange(ctx.p)
    return Fraction(rng.choice((-2, -1, 0, 0, 1, 2, 3)), rng.choice((1, 1, 2)))


def random_diagonal_form(ctx: FieldCtx, n: int, rng: random.Random) -> DiagonalForm:
    return DiagonalForm(ctx, tuple(random_nonzero_scalar(ctx, rng) for _ in range(n)))


def random_symmetric_gram(ctx: FieldCtx, n: int, rng: random.Random) -> GramMatrix:
    entries = [[ctx.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = ctx.coerce(random_scalar(ctx, rng))
            entries[i][j] = value
            entries[j][i] = value
    return GramMatrix(ctx, tuple(tuple(row) for row in entries))


def random_vector(ctx: FieldCtx, n: int, rng: random.Random):
    if ctx.kind is FieldKind.PRIME:
        return tuple(rng.randrange(ctx.p) for _ in range(n))
    return tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))


def random_self_isometry(
    q: FormLike, rng: random.Random, max_reflections: int = 6
) -> Matrix:
    """A product of 1..max_reflections reflections tau_u preserving q."""
    gram = as_gram(q)
    ctx = gram.ctx
    result = linalg.identity(ctx, gram.n)
    for _ in range(rng.randint(1, max_reflections)):
        while True:
            u = random_vector(ctx, gram.n, rng)
            if any(not ctx.is_zero(x) for x in u) and not ctx.is_zero(
                evaluate(gram, u)
            ):
                break
        result = linalg.mat_mul(ctx, result, reflection_matrix(gram, u))
    return result


def random_invertible(ctx: FieldCtx, n: int, rng: random.Random) -> Matrix:
    while True:
        candidate = tuple(
            tuple(ctx.coerce(random_scalar(ctx, rng)) for _ in range(n))
            for _ in range(n)
        )
        if n == 0 or not ctx.is_zero(linalg.det(ctx, candidate)):
            return candidate


def random_cancellation_instance(
    ctx: FieldCtx, n: int, rng: random.Random, max_reflections: int = 6
) -> tuple[DiagonalForm, DiagonalForm, Matrix]:
    """Forms a, b with a_1 = b_1 plus an exact isometry M (M^t B M = A).

    b permutes the tail of a; M is that permutation composed with a random
    self-isometry of b, so the congruence identity holds by construction.
    """
    a = random_diagonal_form(ctx, n, rng)
    tail = list(range(1, n))
    rng.shuffle(tail)
    sigma = [0] + tail  # b_{sigma(j)} = a_j
    b_entries = [ctx.zero()] * n
    for j, target in enumerate(sigma):
        b_entries[target] = a.entries[j]
    b = DiagonalForm(ctx, tuple(b_entries))
    perm = linalg.permutation_matrix(ctx, sigma)
    self_iso = random_self_isometry(b, rng, max_reflections)
    return a, b, linalg.mat_mul(ctx, self_iso, perm)
