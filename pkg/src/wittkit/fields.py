"""Exact arithmetic for the supported coefficient fields.

Three fields are available, all with characteristic != 2:

* ``Q``  -- the rationals, scalars are ``fractions.Fraction``;
* ``Fp`` -- a prime field of odd order p, scalars are residues in [0, p);
* ``R``  -- a sign-tracked real field: scalars are rationals, but square
  classes are decided by sign alone (every real decision in scope depends
  only on signs, so arithmetic stays exact).

No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from sympy import factorint, isprime

from .errors import (
    DivisionByZero,
    InfiniteSquareClassGroup,
    InvalidField,
    ZeroScalar,
)

Scalar = Union[int, Fraction]


class FieldKind(Enum):
    RATIONALS = "Q"
    PRIME = "Fp"
    REAL = "R"


@dataclass(frozen=True)
class FieldCtx:
    """Which exact field arithmetic is in force.

    Instances are immutable and shareable across threads; create them via
    :func:`rationals`, :func:`prime_field` or :func:`real_field`.
    """

    kind: FieldKind
    p: int | None = None

    @property
    def label(self) -> str:
        if self.kind is FieldKind.PRIME:
            return f"Fp({self.p})"
        return self.kind.value

    @property
    def uses_fractions(self) -> bool:
        return self.kind is not FieldKind.PRIME

    # -- scalar plumbing ---------------------------------------------------

    def coerce(self, value) -> Scalar:
        """Bring ``value`` (int, Fraction or scalar text) to canonical form."""
        if isinstance(value, str):
            value = parse_scalar_text(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot coerce {value!r} into {self.label}")
        if self.uses_fractions:
            return Fraction(value)
        frac = Fraction(value)
        if frac.denominator % self.p == 0:
            raise DivisionByZero(f"denominator of {value} vanishes mod {self.p}")
        return frac.numerator * pow(frac.denominator, -1, self.p) % self.p

    def zero(self) -> Scalar:
        return Fraction(0) if self.uses_fractions else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.uses_fractions else 1

    def is_zero(self, x: Scalar) -> bool:
        return x == 0

    # -- field operations --------------------------------------------------

    def add(self, x: Scalar, y: Scalar) -> Scalar:
        return x + y if self.uses_fractions else (x + y) % self.p

    def sub(self, x: Scalar, y: Scalar) -> Scalar:
        return x - y if self.uses_fractions else (x - y) % self.p

    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        return x * y if self.uses_fractions else (x * y) % self.p

    def neg(self, x: Scalar) -> Scalar:
        return -x if self.uses_fractions else (-x) % self.p

    def div(self, x: Scalar, y: Scalar) -> Scalar:
        if y == 0:
            raise DivisionByZero(f"division by zero in {self.label}")
        if self.uses_fractions:
            return Fraction(x) / y
        return x * pow(y, -1, self.p) % self.p

    def inv(self, x: Scalar) -> Scalar:
        return self.div(self.one(), x)

    def format_scalar(self, x: Scalar) -> str:
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def elements(self) -> Iterable[Scalar]:
        """All field elements; only available for prime fields."""
        if self.kind is not FieldKind.PRIME:
            raise InfiniteSquareClassGroup(f"{self.label} is infinite")
        return range(self.p)


def parse_scalar_text(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


@lru_cache(maxsize=None)
def rationals() -> FieldCtx:
    return FieldCtx(FieldKind.RATIONALS)


@lru_cache(maxsize=None)
def real_field() -> FieldCtx:
    return FieldCtx(FieldKind.REAL)


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldCtx:
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise InvalidField(f"prime field order must be an odd prime >= 3, got {p}")
    return FieldCtx(FieldKind.PRIME, p)


_ARITH_OPS = {"add", "sub", "mul", "div", "neg"}


def field_arith(ctx: FieldCtx, op: str, x, y=None) -> Scalar:
    """Uniform entry point for the five field operations."""
    if op not in _ARITH_OPS:
        raise ValueError(f"unknown field operation {op!r}")
    x = ctx.coerce(x)
    if op == "neg":
        return ctx.neg(x)
    y = ctx.coerce(y)
    return getattr(ctx, op)(x, y)


# ---------------------------------------------------------------------------
# Square classes
# ---------------------------------------------------------------------------


def legendre(a, p: int) -> int:
    """Legendre symbol (a|p) by the Euler criterion a^((p-1)/2) mod p."""
    a = Fraction(a)
    if a.denominator % p == 0:
        raise DivisionByZero(f"denominator of {a} vanishes mod {p}")
    res = a.numerator * pow(a.denominator, -1, p) % p
    if res == 0:
        return 0
    e = pow(res, (p - 1) // 2, p)
    return 1 if e == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


@lru_cache(maxsize=None)
def squarefree_part(n: int) -> int:
    """Signed squarefree part of a nonzero integer."""
    if n == 0:
        raise ZeroScalar("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    out = 1
    for prime, exp in factorint(abs(n)).items():
        if exp % 2:
            out *= prime
    return sign * out


@dataclass(frozen=True)
class SquareClass:
    """An element of F*/(F*)^2 by its canonical representative.

    Representatives: a squarefree integer over Q, 1 or the least positive
    nonresidue over Fp, and +-1 over the sign-tracked reals.  Classes form
    an elementary abelian 2-group under multiplication.
    """

    ctx: FieldCtx
    rep: Scalar

    @property
    def is_trivial(self) -> bool:
        return self.rep == self.ctx.one()

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.ctx != other.ctx:
            raise ValueError("square classes live over different fields")
        return square_class(self.ctx, self.ctx.mul(self.rep, other.rep))

    def inverse(self) -> "SquareClass":
        return self  # order <= 2

    def __str__(self) -> str:
        return self.ctx.format_scalar(self.rep)


def square_class(ctx: FieldCtx, a) -> SquareClass:
    a = ctx.coerce(a)
    if ctx.is_zero(a):
        raise ZeroScalar("the zero scalar has no square class")
    if ctx.kind is FieldKind.REAL:
        return SquareClass(ctx, Fraction(1 if a > 0 else -1))
    if ctx.kind is FieldKind.PRIME:
        rep = 1 if legendre(a, ctx.p) == 1 else least_nonresidue(ctx.p)
        return SquareClass(ctx, rep)
    sf = squarefree_part(a.numerator * a.denominator)
    return SquareClass(ctx, Fraction(sf))


def is_square(ctx: FieldCtx, a) -> bool:
    return square_class(ctx, a).is_trivial


def square_class_group(ctx: FieldCtx) -> tuple[SquareClass, ...]:
    """The full (finite) square-class group; both supported cases have order 2."""
    if ctx.kind is FieldKind.RATIONALS:
        raise InfiniteSquareClassGroup(
            "Q*/(Q*)^2 is infinite (one class per squarefree integer)"
        )
    if ctx.kind is FieldKind.REAL:
        return (SquareClass(ctx, Fraction(1)), SquareClass(ctx, Fraction(-1)))
    return (SquareClass(ctx, 1), SquareClass(ctx, least_nonresidue(ctx.p)))


# ---------------------------------------------------------------------------
# Places of Q and Hilbert symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """Evaluation place for Hilbert symbols: the real place or a finite prime."""

    q: int | None = None  # None marks the real place

    @property
    def is_real(self) -> bool:
        return self.q is None

    def __str__(self) -> str:
        return "infinity" if self.is_real else str(self.q)


REAL_PLACE = Place()


def finite_place(q: int) -> Place:
    if not isprime(q):
        raise InvalidField(f"finite place must be a prime, got {q}")
    return Place(q)


def _eps2(u: int) -> int:
    # (u - 1)/2 mod 2 for odd u
    return 1 if u % 4 == 3 else 0


def _omega2(u: int) -> int:
    # (u^2 - 1)/8 mod 2 for odd u
    return 1 if u % 8 in (3, 5) else 0


def _split_at(n: int, q: int) -> tuple[int, int]:
    # n squarefree, so the valuation is 0 or 1
    if n % q == 0:
        return 1, n // q
    return 0, n


def hilbert_symbol(a, b, place: Place) -> int:
    """Hilbert symbol (a, b) at a place of Q.

    Returns +1 iff z^2 = a*x^2 + b*y^2 has a nontrivial solution over the
    completion at ``place``, via the standard local formulas: the sign test
    at the real place, Legendre-symbol formulas at odd primes, and the
    mod-8 unit classification at 2.  Exact; depends only on square classes.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroScalar("Hilbert symbols need nonzero arguments")
    sa = squarefree_part(a.numerator * a.denominator)
    sb = squarefree_part(b.numerator * b.denominator)
    if place.is_real:
        return -1 if (sa < 0 and sb < 0) else 1
    q = place.q
    if q == 2:
        alpha, u = _split_at(abs(sa), 2)
        beta, w = _split_at(abs(sb), 2)
        u, w = u * (1 if sa > 0 else -1), w * (1 if sb > 0 else -1)
        exponent = _eps2(u % 8) * _eps2(w % 8) + alpha * _omega2(w % 8) + beta * _omega2(u % 8)
        return -1 if exponent % 2 else 1
    alpha, u = _split_at(abs(sa), q)
    beta, w = _split_at(abs(sb), q)
    u, w = u * (1 if sa > 0 else -1), w * (1 if sb > 0 else -1)
    result = 1
    if alpha * beta * ((q - 1) // 2) % 2:
        result = -result
    if beta % 2:
        result *= legendre(u, q)
    if alpha % 2:
        result *= legendre(w, q)
    return result


def relevant_places(values: Iterable[Scalar]) -> tuple[Place, ...]:
    """The real place, 2, and every odd prime dividing some value's squarefree part.

    Hilbert symbols of the given values are automatically +1 everywhere else.
    """
    odd_primes: set[int] = set()
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        for prime in factorint(abs(squarefree_part(v.numerator * v.denominator))):
            if prime != 2:
                odd_primes.add(prime)
    return (REAL_PLACE, finite_place(2)) + tuple(
        finite_place(q) for q in sorted(odd_primes)
    )
