"""Desk-scale Milnor triangle: reduced Milnor K-theory mod 2 with
brute-forced Steinberg relations, graded Witt quotients, the known mod-2
Galois cohomology dimensions of the supported fields, and the dimension /
generator matching between all three corners.

The supported fields (F_p and the sign-tracked reals) have exactly two
square classes, so every graded piece has F_2-dimension 0 or 1 and the
triangle can be checked exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InfiniteSquareClassGroup, UnsupportedField
from .fields import FieldCtx, FieldKind, SquareClass, square_class, square_class_group
from .wittring import (
    IdealFiltration,
    WittClass,
    ideal_filtration,
    pfister,
    witt_class,
)

# Pfister slot conventions for the symbol-to-form map: "negated" sends
# {a_1,...,a_n} to <1,-a_1>...<1,-a_n> (the normalization under which the
# map is an isomorphism for every supported field); "paper" uses the
# literal slots <1, a_i>.
CONVENTIONS = ("negated", "paper")
DEFAULT_CONVENTION = "negated"


@dataclass(frozen=True)
class F2Space:
    """An F_2 vector space presented by named generators and relation rows."""

    basis: tuple[tuple[str, ...], ...]
    relations: tuple[tuple[int, ...], ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        basis: dict[int, int] = {}  # leading-bit position -> reduced row
        for row in self.relations:
            value = 0
            for bit in row:
                value = (value << 1) | bit
            while value:
                lead = value.bit_length() - 1
                if lead in basis:
                    value ^= basis[lead]
                else:
                    basis[lead] = value
                    break
        return len(basis)

    @property
    def dimension(self) -> int:
        return self.ambient_dim - self.rank


@dataclass(frozen=True)
class KSymbol:
    """A length-n symbol {a_1, ..., a_n} recorded by square classes."""

    classes: tuple[SquareClass, ...]

    def __str__(self) -> str:
        return "{" + ",".join(str(c) for c in self.classes) + "}"


def steinberg_relation_pairs(ctx: FieldCtx) -> tuple[tuple, ...]:
    """All scalar pairs (a, b) with a + b = 1 and both square classes nontrivial.

    Enumerated exhaustively over F_p; over the sign-tracked reals a and
    1 - a cannot both be negative, so the list is empty.
    """
    if ctx.kind is FieldKind.REAL:
        return ()
    if ctx.kind is not FieldKind.PRIME:
        raise InfiniteSquareClassGroup("Steinberg enumeration needs a finite field")
    pairs = []
    for a in range(2, ctx.p):  # a != 0 and b = 1 - a != 0
        b = (1 - a) % ctx.p
        if not square_class(ctx, a).is_trivial and not square_class(ctx, b).is_trivial:
            pairs.append((a, b))
    return tuple(pairs)


def _nontrivial_classes(ctx: FieldCtx) -> tuple[SquareClass, ...]:
    return tuple(c for c in square_class_group(ctx) if not c.is_trivial)


def _basis_words(ctx: FieldCtx, n: int) -> tuple[tuple[SquareClass, ...], ...]:
    return tuple(itertools.product(_nontrivial_classes(ctx), repeat=n))


def milnor_k_mod2(ctx: FieldCtx, n: int) -> F2Space:
    """K_n(F)/2 presented on tensor words in the nontrivial square classes.

    Degree 0 is F_2.  A word dies when it contains, at any adjacent pair
    of positions, the classes of some a, b with a + b = 1 (the Steinberg
    relation); symbols containing a square are zero already because the
    basis alphabet omits the trivial class.
    """
    if ctx.kind is FieldKind.RATIONALS:
        raise InfiniteSquareClassGroup("K-theory mod 2 of Q is out of scope")
    if n < 0:
        raise ValueError("degree must be non-negative")
    words = _basis_words(ctx, n)
    names = tuple(tuple(str(c) for c in word) for word in words)
    if n < 2:
        return F2Space(names, ())
    index = {word: i for i, word in enumerate(words)}
    relation_pairs = {
        (square_class(ctx, a), square_class(ctx, b))
        for a, b in steinberg_relation_pairs(ctx)
    }
    rows = set()
    alphabet = _nontrivial_classes(ctx)
    for ca, cb in relation_pairs:
        for pos in range(n - 1):
            for rest in itertools.product(alphabet, repeat=n - 2):
                word = rest[:pos] + (ca, cb) + rest[pos:]
                row = [0] * len(words)
                row[index[word]] = 1
                rows.add(tuple(row))
    return F2Space(names, tuple(sorted(rows)))


def graded_witt_quotient(ctx: FieldCtx, n: int) -> F2Space:
    """I^n / I^(n+1) as an F_2 space, named by a generating Pfister class."""
    filt = ideal_filtration(ctx, n + 1)
    dim = filt.quotient_dims[n]
    if dim == 0:
        return F2Space((), ())
    if ctx.kind is FieldKind.REAL:
        return F2Space(((f"2^{n}<1>",),), ())
    generator = _graded_generator(ctx, filt, n)
    return F2Space(((str(generator),),), ())


def _graded_generator(ctx: FieldCtx, filt: IdealFiltration, n: int) -> WittClass:
    for element in sorted(filt.element_chain[n], key=lambda e: (e.dim, str(e))):
        if not filt.contains(element, n + 1):
            return element
    raise AssertionError("nonzero quotient had no generator")


def galois_cohomology_dims(ctx: FieldCtx, n: int) -> int:
    """dim_F2 H^n(F, F_2) for the supported fields (a table of known values).

    The absolute Galois group of F_p is procyclic, so the dimensions are
    (1, 1, 0, 0, ...); the real field has the order-2 group and dimension
    1 in every degree.  H^0 is always F_2.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if ctx.kind is FieldKind.PRIME:
        return 1 if n <= 1 else 0
    if ctx.kind is FieldKind.REAL:
        return 1
    raise UnsupportedField("Galois cohomology dimensions are tabulated for F_p and R only")


def nu_image(ctx: FieldCtx, word, convention: str = DEFAULT_CONVENTION) -> WittClass:
    """Image of a symbol word under nu: the class of the matching Pfister form."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    slots = [
        ctx.neg(c.rep) if convention == "negated" else c.rep for c in word
    ]
    return witt_class(pfister(ctx, slots).expanded)


@dataclass(frozen=True)
class TriangleDegree:
    n: int
    dim_k: int
    dim_graded_witt: int
    dim_h: int
    nu_bijective: bool
    commutes: bool
    steinberg_images_vanish: bool


@dataclass(frozen=True)
class TriangleReport:
    ctx: FieldCtx
    convention: str
    degrees: tuple[TriangleDegree, ...]

    @property
    def isomorphic(self) -> bool:
        return all(
            d.dim_k == d.dim_graded_witt == d.dim_h
            and d.nu_bijective
            and d.commutes
            and d.steinberg_images_vanish
            for d in self.degrees
        )


def triangle_check(
    ctx: FieldCtx, n_max: int, convention: str = DEFAULT_CONVENTION
) -> TriangleReport:
    """Check the triangle K_*(F)/2 -> gr W(F) -> H^*(F, F_2) degree by degree.

    Per degree: the three F_2 dimensions must agree; nu must kill the
    images of Steinberg relation words (they land in I^(n+1)) and carry
    surviving generators to classes that are nonzero in I^n/I^(n+1); and
    e(nu(w)) must match eta(w) under the canonical generator
    identifications.
    """
    if ctx.kind is FieldKind.RATIONALS:
        raise UnsupportedField("the triangle check runs over F_p and R only")
    filt = ideal_filtration(ctx, n_max + 1)
    degrees = []
    for n in range(n_max + 1):
        space = milnor_k_mod2(ctx, n)
        dim_k = space.dimension
        dim_w = filt.quotient_dims[n]
        dim_h = galois_cohomology_dims(ctx, n)
        words = _basis_words(ctx, n)
        killed = {i for row in space.relations for i, bit in enumerate(row) if bit}
        well_defined = True
        injective = True
        relations_vanish = True
        generator_match = True
        for i, word in enumerate(words):
            cls = nu_image(ctx, word, convention)
            in_n = filt.contains(cls, n)
            in_n1 = filt.contains(cls, n + 1)
            alive = i not in killed
            if not in_n:
                well_defined = False
            if alive and in_n1:
                injective = False
            if not alive and not in_n1:
                relations_vanish = False
            # eta sends an alive generator to the canonical H^n generator;
            # e identifies a nonzero graded class with the same generator.
            image_nonzero = not in_n1
            if alive:
                if not (image_nonzero and dim_h == 1):
                    generator_match = False
            elif image_nonzero:
                generator_match = False
        nu_bijective = (
            well_defined and injective and relations_vanish and dim_k == dim_w
        )
        commutes = generator_match and dim_w == dim_h
        degrees.append(
            TriangleDegree(
                n=n,
                dim_k=dim_k,
                dim_graded_witt=dim_w,
                dim_h=dim_h,
                nu_bijective=nu_bijective,
                commutes=commutes,
                steinberg_images_vanish=relations_vanish,
            )
        )
    return TriangleReport(ctx, convention, tuple(degrees))


def convention_survey(ctx: FieldCtx, n_max: int) -> dict[str, bool]:
    """Which Pfister slot convention makes the triangle an isomorphism."""
    return {
        convention: triangle_check(ctx, n_max, convention).isomorphic
        for convention in CONVENTIONS
    }
