"""Both Witt cancellation constructions, reflections, transporters, homotopy."""

import random
from fractions import Fraction

import pytest

from wittkit import (
    IsotropicReflectionVector,
    PreconditionViolated,
    apply_congruence,
    cancel_first_algebraic,
    cancel_first_geometric,
    diagonal,
    evaluate,
    homotopy_check,
    prime_field,
    rationals,
    reflection_matrix,
    transporter,
)
from wittkit.generators import (
    random_cancellation_instance,
    random_diagonal_form,
    random_vector,
)
from wittkit.linalg import coerce_matrix, det, identity, mat_mul, mat_vec

Q = rationals()
F7 = prime_field(7)
F13 = prime_field(13)

ROTATION = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(-4, 5), Fraction(3, 5)))


def assert_cancellation_sound(ctx, a, b, result):
    a_rest = diagonal(ctx, a.entries[1:]).gram()
    b_rest = diagonal(ctx, b.entries[1:]).gram()
    assert apply_congruence(b_rest, result.n_matrix).entries == a_rest.entries
    assert not ctx.is_zero(det(ctx, result.n_matrix))
    assert result.witness.check()


# -- algebraic route ---------------------------------------------------------


def test_algebraic_identity_isometry_triggers_sign_flip():
    a = diagonal(Q, (1, 2))
    result = cancel_first_algebraic(a, a, identity(Q, 2))
    assert result.sign_flip_applied
    assert result.n_matrix == ((1,),)
    assert_cancellation_sound(Q, a, a, result)


def test_algebraic_rational_rotation():
    a = diagonal(Q, (1, 1))
    result = cancel_first_algebraic(a, a, ROTATION)
    assert not result.sign_flip_applied
    # substitution x1 = (4/5) x2 / (2/5) = 2 x2
    assert result.substitution == (2,)
    assert result.n_matrix == ((-1,),)
    assert_cancellation_sound(Q, a, a, result)


def test_algebraic_f7_reflection_isometry():
    rng = random.Random(7)
    a = diagonal(F7, (1, 3, 5))
    from wittkit.generators import random_self_isometry

    m = random_self_isometry(a, rng)
    # oracle: the generated matrix is an exact isometry
    assert apply_congruence(a, m).entries == a.gram().entries
    result = cancel_first_algebraic(a, a, m)
    assert_cancellation_sound(F7, a, a, result)


def test_preconditions_rejected():
    a = diagonal(Q, (1, 2))
    b = diagonal(Q, (2, 1))
    with pytest.raises(PreconditionViolated):  # a_1 != b_1
        cancel_first_algebraic(a, b, identity(Q, 2))
    with pytest.raises(PreconditionViolated):  # not an isometry
        cancel_first_algebraic(a, a, ((1, 1), (0, 1)))
    with pytest.raises(PreconditionViolated):  # degenerate
        cancel_first_algebraic(diagonal(Q, (1, 0)), diagonal(Q, (1, 0)), identity(Q, 2))
    with pytest.raises(PreconditionViolated):  # n <= 1
        cancel_first_algebraic(diagonal(Q, (1,)), diagonal(Q, (1,)), identity(Q, 1))
    with pytest.raises(PreconditionViolated):  # mixed fields
        cancel_first_algebraic(a, diagonal(F7, (1, 2)), identity(Q, 2))


# -- reflections -------------------------------------------------------------


def test_reflection_swaps_standard_basis():
    q = diagonal(Q, (1, 1))
    tau = reflection_matrix(q, (1, -1))
    assert tau == ((0, 1), (1, 0))


def test_reflection_negates_axis_and_is_involution():
    rng = random.Random(8)
    for ctx in (Q, F7):
        q = random_diagonal_form(ctx, 4, rng)
        for _ in range(10):
            u = random_vector(ctx, 4, rng)
            if all(ctx.is_zero(x) for x in u) or ctx.is_zero(evaluate(q, u)):
                continue
            tau = reflection_matrix(q, u)
            assert mat_vec(ctx, tau, u) == tuple(ctx.neg(x) for x in u)
            assert mat_mul(ctx, tau, tau) == identity(ctx, 4)
            assert apply_congruence(q, tau).entries == q.gram().entries


def test_reflection_fixes_orthogonal_hyperplane():
    q = diagonal(Q, (1, 2, 3))
    u = (1, 1, 0)
    tau = reflection_matrix(q, u)
    # v orthogonal to u: B(v, u) = v1 + 2 v2 = 0
    v = (2, -1, 5)
    assert mat_vec(Q, tau, coerce_matrix(Q, [v])[0]) == (2, -1, 5)


def test_reflection_rejects_isotropic_axis():
    with pytest.raises(IsotropicReflectionVector):
        reflection_matrix(diagonal(Q, (1, -1)), (1, 1))


# -- transporter -------------------------------------------------------------


def test_transporter_difference_branch():
    q = diagonal(Q, (1, 1))
    t, used_sum = transporter(q, (1, 0), (0, 1))
    assert not used_sum
    assert t == reflection_matrix(q, (1, -1))
    assert mat_vec(Q, t, (Fraction(1), Fraction(0))) == (0, 1)


def test_transporter_endpoint_uses_sum_branch():
    q = diagonal(Q, (1, 1))
    x = (Fraction(1), Fraction(2))
    t, used_sum = transporter(q, x, x)
    assert used_sum
    assert mat_vec(Q, t, x) == x
    assert apply_congruence(q, t).entries == q.gram().entries


def test_transporter_indefinite_example():
    q = diagonal(Q, (1, -1))
    x = (Fraction(5, 4), Fraction(3, 4))
    y = (Fraction(1), Fraction(0))
    assert evaluate(q, x) == evaluate(q, y) == 1
    t, _ = transporter(q, x, y)
    assert mat_vec(Q, t, x) == y
    assert apply_congruence(q, t).entries == q.gram().entries


def test_transporter_precondition():
    q = diagonal(Q, (1, 1))
    with pytest.raises(PreconditionViolated):
        transporter(q, (1, 0), (2, 0))  # values differ
    with pytest.raises(PreconditionViolated):
        transporter(diagonal(Q, (1, -1)), (1, 1), (1, 1))  # q(x) = 0


def test_lemma_parallelogram_identity():
    rng = random.Random(9)
    q = random_diagonal_form(Q, 4, rng)
    for _ in range(25):
        x = random_vector(Q, 4, rng)
        y = random_vector(Q, 4, rng)
        if evaluate(q, x) != evaluate(q, y):
            continue
        s = tuple(a + b for a, b in zip(x, y))
        d = tuple(a - b for a, b in zip(x, y))
        assert evaluate(q, s) + evaluate(q, d) == 4 * evaluate(q, x)


# -- geometric route and homotopy --------------------------------------------


def test_geometric_matches_algebraic_on_examples():
    a = diagonal(Q, (1, 1))
    alg = cancel_first_algebraic(a, a, ROTATION)
    geo = cancel_first_geometric(a, a, ROTATION)
    assert geo.n_matrix == alg.n_matrix == ((-1,),)
    assert_cancellation_sound(Q, a, a, geo)

    b = diagonal(Q, (1, 2, 5))
    geo_id = cancel_first_geometric(b, b, identity(Q, 3))
    assert geo_id.n_matrix == identity(Q, 2)


def test_both_routes_on_random_instances():
    rng = random.Random(10)
    for ctx in (Q, F7, F13):
        for _ in range(40):
            n = rng.randint(2, 5)
            a, b, m = random_cancellation_instance(ctx, n, rng)
            alg = cancel_first_algebraic(a, b, m)
            geo = cancel_first_geometric(a, b, m)
            assert_cancellation_sound(ctx, a, b, alg)
            assert_cancellation_sound(ctx, a, b, geo)
            # the section-4 identity makes the two matrices literally equal
            assert alg.n_matrix == geo.n_matrix


def test_homotopy_rotation_single_entry():
    a = diagonal(Q, (1, 1))
    report = homotopy_check(a, a, ROTATION)
    assert report.ok
    assert report.c_matrix == report.d_matrix == ((-1,),)
    # q(u) = 2 b_1 (1 - m_11) = 2 * (2/5) = 4/5
    assert report.q_u == Fraction(4, 5)


def test_homotopy_zero_offdiagonal_row_reduces_to_matrix_block():
    # m_12 = ... = m_1n = 0 forces c_ki = m_ik = d_ki
    m = coerce_matrix(Q, ((-1, 0, 0), (0, 0, 1), (0, 1, 0)))
    a = diagonal(Q, (1, 2, 2))
    report = homotopy_check(a, a, m)
    assert report.ok
    assert report.c_matrix == ((0, 1), (1, 0))


def test_homotopy_on_random_instances_including_flips():
    rng = random.Random(11)
    flips = 0
    for ctx in (Q, F7, F13):
        for _ in range(70):
            n = rng.randint(2, 5)
            a, b, m = random_cancellation_instance(ctx, n, rng)
            report = homotopy_check(a, b, m)
            assert report.entries_match
            assert report.q_u_match
            flips += report.sign_flip_applied
    assert flips > 0  # the preprocessed branch is exercised
