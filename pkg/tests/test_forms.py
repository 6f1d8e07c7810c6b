"""Gram matrices, diagonalization, congruence witnesses, sums and tensors."""

import random
from fractions import Fraction

import pytest

from wittkit import (
    DegenerateForm,
    DimensionMismatch,
    FieldMismatch,
    GramMatrix,
    apply_congruence,
    bilinear,
    diagonal,
    diagonalize,
    direct_sum,
    evaluate,
    prime_field,
    radical_split,
    rationals,
    real_field,
    signed_discriminant,
    square_class,
    symmetrize,
    tensor_product,
)
from wittkit.generators import random_symmetric_gram, random_vector
from wittkit.linalg import coerce_matrix, det, mat_mul

Q = rationals()
R = real_field()
F3 = prime_field(3)

FIELDS = (Q, prime_field(3), prime_field(5), prime_field(7), prime_field(13))


def test_symmetrize_footnote_conic():
    # 5 z1^2 - 2 z1 z2 + 5 z2^2 written with an asymmetric coefficient matrix
    gram = symmetrize(Q, ((5, -2), (0, 5)))
    assert gram.entries == coerce_matrix(Q, ((5, -1), (-1, 5)))


def test_symmetrize_fixed_point():
    gram = symmetrize(Q, ((1, 2), (2, 3)))
    assert gram.entries == coerce_matrix(Q, ((1, 2), (2, 3)))


def test_symmetrize_inverts_two_mod_three():
    gram = symmetrize(F3, ((0, 1), (0, 0)))
    assert gram.entries == ((0, 2), (2, 0))  # 1/2 = 2 in F_3


def test_gram_requires_symmetry():
    with pytest.raises(ValueError):
        GramMatrix(Q, ((0, 1), (0, 0)))


def test_evaluate_examples():
    assert evaluate(diagonal(Q, (1, -1)), (1, 1)) == 0
    assert evaluate(random_symmetric_gram(Q, 3, random.Random(0)), (0, 0, 0)) == 0
    assert evaluate(diagonal(F3, (1, 1, 1)), (1, 1, 1)) == 0


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(diagonal(Q, (1, 2)), (1, 2, 3))


def test_bilinear_examples():
    q = diagonal(Q, (1, 1))
    assert bilinear(q, (1, 0), (0, 1)) == 0
    # (1,0) . diag(1,1) . (1,-1) = 1, by direct matrix product
    assert bilinear(q, (1, 0), (1, -1)) == 1


def test_bilinear_diagonal_matches_evaluate_and_polarization():
    rng = random.Random(3)
    for ctx in FIELDS:
        q = random_symmetric_gram(ctx, 4, rng)
        for _ in range(10):
            x = random_vector(ctx, 4, rng)
            y = random_vector(ctx, 4, rng)
            assert bilinear(q, x, x) == evaluate(q, x)
            s = tuple(ctx.add(a, b) for a, b in zip(x, y))
            lhs = ctx.mul(ctx.coerce(2), bilinear(q, x, y))
            rhs = ctx.sub(ctx.sub(evaluate(q, s), evaluate(q, x)), evaluate(q, y))
            assert lhs == rhs


def test_apply_congruence_identity_and_rotation():
    q = diagonal(Q, (1, 1)).gram()
    identity = ((1, 0), (0, 1))
    assert apply_congruence(q, identity).entries == q.entries
    rotation = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(-4, 5), Fraction(3, 5)))
    assert apply_congruence(q, rotation).entries == q.entries


def test_apply_congruence_functorial():
    rng = random.Random(4)
    for ctx in (Q, F3):
        q = random_symmetric_gram(ctx, 3, rng)
        m = coerce_matrix(ctx, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        n = coerce_matrix(ctx, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        assert (
            apply_congruence(q, mat_mul(ctx, m, n)).entries
            == apply_congruence(apply_congruence(q, m), n).entries
        )


def test_diagonalize_footnote_instance():
    d, w = diagonalize(GramMatrix(Q, ((5, -1), (-1, 5))))
    assert d.entries == (5, Fraction(24, 5))
    assert w.check()


def test_diagonalize_already_diagonal():
    d, w = diagonalize(diagonal(Q, (2, -3)))
    assert d.entries == (2, -3)
    assert w.matrix == ((1, 0), (0, 1))


def test_diagonalize_antidiagonal_pivot_repair():
    d, w = diagonalize(GramMatrix(Q, ((0, 1), (1, 0))))
    assert d.entries == (2, Fraction(-1, 2))
    assert w.check()
    classes = {square_class(Q, a).rep for a in d.entries}
    # the two entries land in the square classes of 2 and -2: a scaled
    # hyperbolic plane, equivalent to <1, -1>
    assert classes == {2, -2}
    assert square_class(Q, d.entries[0] * d.entries[1]).rep == -1


def test_diagonalize_random_roundtrip():
    rng = random.Random(5)
    for ctx in FIELDS:
        for _ in range(50):
            n = rng.randint(0, 6)
            q = random_symmetric_gram(ctx, n, rng)
            d, w = diagonalize(q)
            assert w.check()
            assert apply_congruence(q, w.matrix).entries == d.gram().entries
            if n:
                assert not ctx.is_zero(det(ctx, w.matrix))


def test_footnote_ellipse_signature_profile():
    d, _ = diagonalize(GramMatrix(R, ((5, -1), (-1, 5))))
    profile = tuple(square_class(R, a).rep for a in d.entries)
    reference = tuple(square_class(R, a).rep for a in diagonal(R, (4, 6)).entries)
    assert profile == reference == (1, 1)


def test_radical_split_examples():
    q_nd, null_dim, w = radical_split(diagonal(Q, (1, 0, -2)))
    assert null_dim == 1
    assert tuple(q_nd.entries[i][i] for i in range(2)) == (1, -2)
    assert w.check()

    q = diagonal(Q, (1, -2)).gram()
    q_nd, null_dim, _ = radical_split(q)
    assert null_dim == 0
    assert q_nd.entries == q.entries

    q_nd, null_dim, w = radical_split(GramMatrix(Q, ((1, 1), (1, 1))))
    assert null_dim == 1
    assert q_nd.n == 1
    assert square_class(Q, q_nd.entries[0][0]).rep == 1
    assert w.check()


def test_direct_sum_and_tensor_examples():
    a = diagonal(Q, (2,))
    b = diagonal(Q, (3,))
    assert direct_sum(a, b).entries == coerce_matrix(Q, ((2, 0), (0, 3)))
    assert tensor_product(a, b).entries == ((Fraction(6),),)
    h = diagonal(Q, (1, -1))
    hh = tensor_product(h, h)
    assert tuple(hh.entries[i][i] for i in range(4)) == (1, -1, -1, 1)


def test_sum_tensor_dimensions_and_field_mismatch():
    rng = random.Random(6)
    q1 = random_symmetric_gram(Q, 2, rng)
    q2 = random_symmetric_gram(Q, 3, rng)
    assert direct_sum(q1, q2).n == 5
    assert tensor_product(q1, q2).n == 6
    with pytest.raises(FieldMismatch):
        direct_sum(q1, random_symmetric_gram(F3, 2, rng))
    with pytest.raises(FieldMismatch):
        tensor_product(q1, random_symmetric_gram(F3, 2, rng))


def test_signed_discriminant_examples():
    assert signed_discriminant(diagonal(Q, (1, -1))).rep == 1
    assert signed_discriminant(diagonal(R, (1, 1))).rep == -1
    assert signed_discriminant(diagonal(Q, (1,))).rep == 1
    with pytest.raises(DegenerateForm):
        signed_discriminant(diagonal(Q, (1, 0)))
