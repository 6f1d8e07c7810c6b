"""Field kernel: exact arithmetic, square classes, Legendre and Hilbert symbols."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittkit import (
    DivisionByZero,
    InfiniteSquareClassGroup,
    InvalidField,
    REAL_PLACE,
    ZeroScalar,
    field_arith,
    finite_place,
    hilbert_symbol,
    legendre,
    prime_field,
    rationals,
    real_field,
    relevant_places,
    square_class,
    square_class_group,
    squarefree_part,
)

Q = rationals()
R = real_field()


# -- independent oracles -----------------------------------------------------


def squares_mod(p):
    return {x * x % p for x in range(p)}


def squarefree_by_division(n):
    """Strip square factors by trial division (independent of sympy)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        exp = 0
        while n % d == 0:
            n //= d
            exp += 1
        if exp % 2:
            out *= d
        d += 1
    return sign * out * n


def three_squares_solvable_mod8():
    """Does x^2 + y^2 + z^2 = 0 mod 8 admit a solution with an odd coordinate?

    Oracle for the dyadic Hilbert symbol (-1, -1)_2: solvability of
    z^2 = -x^2 - y^2 over Q_2 reduces to this mod-8 question.
    """
    for x in range(8):
        for y in range(8):
            for z in range(8):
                if (x * x + y * y + z * z) % 8 == 0 and (x % 2 or y % 2 or z % 2):
                    return True
    return False


# -- arithmetic --------------------------------------------------------------


def test_field_arith_examples():
    assert field_arith(Q, "add", Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert field_arith(prime_field(7), "mul", 3, 5) == 1
    assert field_arith(prime_field(3), "div", 1, 2) == 2


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_arith(Q, "div", 1, 0)
    with pytest.raises(DivisionByZero):
        field_arith(prime_field(5), "div", 3, 0)


def test_prime_field_validation():
    for bad in (2, 4, 9, 1, -3):
        with pytest.raises(InvalidField):
            prime_field(bad)


@given(
    p=st.sampled_from([3, 5, 7, 13]),
    a=st.integers(-50, 50),
    b=st.integers(-50, 50),
)
def test_fp_arithmetic_matches_integers(p, a, b):
    ctx = prime_field(p)
    x, y = ctx.coerce(a), ctx.coerce(b)
    assert ctx.add(x, y) == (a + b) % p
    assert ctx.sub(x, y) == (a - b) % p
    assert ctx.mul(x, y) == (a * b) % p
    assert ctx.neg(x) == (-a) % p
    if b % p:
        assert ctx.mul(ctx.div(x, y), y) == x


def test_fp_coerces_fractions_via_inverse():
    ctx = prime_field(3)
    assert ctx.coerce(Fraction(1, 2)) == 2  # 2 * 2 = 1 mod 3


# -- square classes ----------------------------------------------------------


def test_square_class_examples():
    # real square class is the sign
    assert square_class(R, -3).rep == Fraction(-1)
    # 2 is a square mod 7: oracle is the brute-force square table
    assert 2 in squares_mod(7)
    assert square_class(prime_field(7), 2).rep == 1
    # 8/9 has squarefree part 2 (both oracle and sympy-backed path agree)
    assert squarefree_by_division(8 * 9) == 2
    assert square_class(Q, Fraction(8, 9)).rep == Fraction(2)


def test_square_class_zero_rejected():
    with pytest.raises(ZeroScalar):
        square_class(Q, 0)


@given(st.integers(-200, 200).filter(lambda n: n != 0))
def test_squarefree_part_matches_trial_division(n):
    assert squarefree_part(n) == squarefree_by_division(n)


@given(
    a=st.fractions(
        min_value=-20, max_value=20, max_denominator=12
    ).filter(lambda x: x != 0),
    b=st.fractions(
        min_value=-20, max_value=20, max_denominator=12
    ).filter(lambda x: x != 0),
)
def test_square_class_group_law_rationals(a, b):
    assert square_class(Q, a * b) == square_class(Q, a) * square_class(Q, b)
    assert square_class(Q, a * a * b) == square_class(Q, b)


@given(
    p=st.sampled_from([3, 5, 7, 11, 13]),
    a=st.integers(1, 200),
    b=st.integers(1, 200),
)
def test_square_class_group_law_fp(p, a, b):
    ctx = prime_field(p)
    if a % p == 0 or b % p == 0:
        return
    assert square_class(ctx, a * b) == square_class(ctx, a) * square_class(ctx, b)
    assert square_class(ctx, a * a * b) == square_class(ctx, b)


def test_square_class_group_enumeration():
    group5 = square_class_group(prime_field(5))
    assert [c.rep for c in group5] == [1, 2]  # 2 is the least nonresidue mod 5
    assert 2 not in squares_mod(5)
    group_r = square_class_group(R)
    assert [c.rep for c in group_r] == [1, -1]
    with pytest.raises(InfiniteSquareClassGroup):
        square_class_group(Q)


# -- Legendre symbol ---------------------------------------------------------


def test_legendre_examples():
    assert 2 in squares_mod(7)
    assert legendre(2, 7) == 1
    assert squares_mod(3) == {0, 1}
    assert legendre(2, 3) == -1
    assert legendre(21, 7) == 0


def test_legendre_against_square_tables_all_p_below_50():
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    for p in primes:
        table = squares_mod(p)
        for a in range(p):
            expected = 0 if a == 0 else (1 if a in table else -1)
            assert legendre(a, p) == expected


# -- Hilbert symbols ---------------------------------------------------------


def test_hilbert_symbol_real_place():
    # -x^2 - y^2 = z^2 forces x = y = z = 0 over the reals
    assert hilbert_symbol(-1, -1, REAL_PLACE) == -1
    assert hilbert_symbol(-1, 2, REAL_PLACE) == 1
    assert hilbert_symbol(2, 3, REAL_PLACE) == 1


def test_hilbert_symbol_trivial_first_argument():
    for b in (2, -3, Fraction(5, 7)):
        for v in (REAL_PLACE, finite_place(2), finite_place(3), finite_place(5)):
            assert hilbert_symbol(1, b, v) == 1


def test_hilbert_symbol_minus_one_minus_one_at_two():
    # mod-8 exhaustion shows x^2 + y^2 + z^2 = 0 has no unit solution
    assert not three_squares_solvable_mod8()
    assert hilbert_symbol(-1, -1, finite_place(2)) == -1


def test_hilbert_symbol_zero_rejected():
    with pytest.raises(ZeroScalar):
        hilbert_symbol(0, 1, REAL_PLACE)


@given(
    a=st.integers(-30, 30).filter(lambda n: n != 0),
    b=st.integers(-30, 30).filter(lambda n: n != 0),
    v=st.sampled_from([REAL_PLACE, finite_place(2), finite_place(3), finite_place(5), finite_place(7)]),
)
def test_hilbert_symbol_symmetric(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@given(
    a=st.integers(-20, 20).filter(lambda n: n != 0),
    a2=st.integers(-20, 20).filter(lambda n: n != 0),
    b=st.integers(-20, 20).filter(lambda n: n != 0),
    v=st.sampled_from([REAL_PLACE, finite_place(2), finite_place(3), finite_place(5)]),
)
def test_hilbert_symbol_bimultiplicative(a, a2, b, v):
    assert hilbert_symbol(a, b, v) * hilbert_symbol(a2, b, v) == hilbert_symbol(
        a * a2, b, v
    )


@given(
    a=st.integers(-30, 30).filter(lambda n: n != 0),
    b=st.integers(-30, 30).filter(lambda n: n != 0),
)
def test_hilbert_product_formula(a, b):
    product = 1
    for v in relevant_places((a, b)):
        product *= hilbert_symbol(a, b, v)
    assert product == 1
