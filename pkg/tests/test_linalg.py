"""Exact matrix helpers shared by the form machinery."""

import random
from fractions import Fraction
from itertools import permutations

from wittkit import prime_field, rationals
from wittkit.linalg import (
    coerce_matrix,
    det,
    identity,
    inverse,
    kernel_basis,
    mat_mul,
    mat_vec,
    rank,
)

Q = rationals()
F7 = prime_field(7)


def det_by_leibniz(ctx, m):
    n = len(m)
    total = ctx.zero()
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = ctx.one() if sign == 1 else ctx.neg(ctx.one())
        for i in range(n):
            term = ctx.mul(term, m[i][perm[i]])
        total = ctx.add(total, term)
    return total


def test_det_matches_leibniz_expansion():
    rng = random.Random(1)
    for ctx in (Q, F7):
        for _ in range(25):
            n = rng.randint(1, 4)
            m = coerce_matrix(
                ctx, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            )
            assert det(ctx, m) == det_by_leibniz(ctx, m)


def test_inverse_roundtrip():
    rng = random.Random(2)
    for ctx in (Q, F7):
        found = 0
        while found < 15:
            n = rng.randint(1, 4)
            m = coerce_matrix(
                ctx, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            )
            if ctx.is_zero(det(ctx, m)):
                continue
            found += 1
            assert mat_mul(ctx, m, inverse(ctx, m)) == identity(ctx, n)


def test_kernel_dimension_and_membership():
    m = coerce_matrix(Q, [[1, 1, 0], [2, 2, 0]])
    basis = kernel_basis(Q, m)
    assert len(basis) == 3 - rank(Q, m) == 2
    for vec in basis:
        assert mat_vec(Q, m, vec) == (Fraction(0), Fraction(0))


def test_empty_matrix_conventions():
    assert det(Q, ()) == 1
    assert identity(Q, 0) == ()
    assert mat_mul(Q, (), ()) == ()
