"""The Witt ring W(F): similarity classes, ring arithmetic, enumeration,
Pfister forms, fundamental-ideal powers, and the invariants e0, e1, e2.

Classes are held by a canonical anisotropic diagonal representative.  Over
F_p the class of a form is read off the two complete invariants (dimension
parity, signed discriminant); over the sign-tracked reals it is the
signature.  Both shortcuts are cross-validated against the constructive
Witt decomposition in the test suite.  Over Q the decomposition itself is
used, and class equality is decided by the Hasse-Minkowski invariant
tuple (dimension, discriminant, signature, Hasse symbols).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import (
    DegenerateForm,
    FieldMismatch,
    InfiniteRing,
    NotInIdealPower,
    ZeroScalar,
)
from .fields import (
    FieldCtx,
    FieldKind,
    Place,
    REAL_PLACE,
    SquareClass,
    hilbert_symbol,
    relevant_places,
    square_class,
)
from .forms import (
    DiagonalForm,
    FormLike,
    GramMatrix,
    as_gram,
    diagonalize,
    direct_sum,
    signed_discriminant,
    tensor_product,
)
from .isotropy import witt_decompose


def _nondegenerate_entries(q: FormLike) -> tuple:
    """Diagonal entries of the non-degenerate part (zeros of the radical dropped)."""
    if isinstance(q, DiagonalForm):
        entries = q.entries
    else:
        gram = as_gram(q)
        if gram.is_diagonal():
            entries = tuple(gram.entries[i][i] for i in range(gram.n))
        else:
            entries = diagonalize(gram)[0].entries
    ctx = q.ctx
    return tuple(a for a in entries if not ctx.is_zero(a))


def _signature(entries) -> int:
    return sum(1 if a > 0 else -1 for a in entries)


@dataclass(frozen=True, eq=False)
class WittClass:
    """A similarity class, canonically represented by an anisotropic diagonal form."""

    ctx: FieldCtx
    rep: DiagonalForm

    @property
    def dim(self) -> int:
        return self.rep.n

    @property
    def is_zero(self) -> bool:
        return self.rep.n == 0

    @property
    def signature(self) -> int:
        if self.ctx.kind is FieldKind.PRIME:
            raise ValueError("signature is defined over Q and the reals only")
        return _signature(self.rep.entries)

    @cached_property
    def _invariant_key(self):
        if self.ctx.kind is not FieldKind.RATIONALS:
            return self.rep.entries
        entries = self.rep.entries
        disc = square_class(self.ctx, _product(self.ctx, entries)).rep if entries else 1
        hasse_negative = frozenset(
            v for v in relevant_places(entries) if _hasse_invariant(entries, v) == -1
        )
        return (self.dim, disc, _signature(entries), hasse_negative)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittClass):
            return NotImplemented
        return self.ctx == other.ctx and self._invariant_key == other._invariant_key

    def __hash__(self) -> int:
        return hash((self.ctx, self._invariant_key))

    def __add__(self, other: "WittClass") -> "WittClass":
        return wadd(self, other)

    def __neg__(self) -> "WittClass":
        return wneg(self)

    def __mul__(self, other: "WittClass") -> "WittClass":
        return wmul(self, other)

    def __str__(self) -> str:
        return str(self.rep) if not self.is_zero else "0"


def _product(ctx, entries):
    out = ctx.one()
    for a in entries:
        out = ctx.mul(out, a)
    return out


def _hasse_invariant(entries, place: Place) -> int:
    out = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            out *= hilbert_symbol(entries[i], entries[j], place)
    return out


def _canonical_fp(ctx: FieldCtx, entries) -> DiagonalForm:
    """Canonical anisotropic representative over F_p from (parity, signed disc)."""
    if not entries:
        return DiagonalForm(ctx, ())
    signed = signed_discriminant(DiagonalForm(ctx, entries))
    if len(entries) % 2 == 1:
        return DiagonalForm(ctx, (signed.rep,))
    if signed.is_trivial:
        return DiagonalForm(ctx, ())
    second = square_class(ctx, ctx.neg(signed.rep)).rep
    return DiagonalForm(ctx, (ctx.one(), second))


def _canonical_real(ctx: FieldCtx, entries) -> DiagonalForm:
    sig = _signature(entries)
    unit = ctx.one() if sig > 0 else ctx.neg(ctx.one())
    return DiagonalForm(ctx, (unit,) * abs(sig))


def witt_class(q: FormLike, budget: int | None = None) -> WittClass:
    """The similarity class of q (its radical contributes nothing).

    The canonical representative is: lexicographically least diagonal form
    with square-class entries over F_p, the signature normal form over the
    sign-tracked reals, and sorted squarefree integers over Q.
    """
    ctx = q.ctx
    if ctx.kind is FieldKind.PRIME:
        return WittClass(ctx, _canonical_fp(ctx, _nondegenerate_entries(q)))
    if ctx.kind is FieldKind.REAL:
        return WittClass(ctx, _canonical_real(ctx, _nondegenerate_entries(q)))
    decomposition = witt_decompose(q, budget)
    entries = sorted(
        decomposition.anisotropic_part.entries,
        key=lambda a: (1 if a > 0 else -1, abs(a)),
    )
    return WittClass(ctx, DiagonalForm(ctx, tuple(entries)))


def zero_class(ctx: FieldCtx) -> WittClass:
    return WittClass(ctx, DiagonalForm(ctx, ()))


def unit_class(ctx: FieldCtx) -> WittClass:
    return WittClass(ctx, DiagonalForm(ctx, (ctx.one(),)))


def _require_same_field(x: WittClass, y: WittClass):
    if x.ctx != y.ctx:
        raise FieldMismatch("Witt classes live over different fields")


def wadd(x: WittClass, y: WittClass) -> WittClass:
    _require_same_field(x, y)
    return witt_class(direct_sum(x.rep, y.rep))


def wneg(x: WittClass) -> WittClass:
    ctx = x.ctx
    negated = DiagonalForm(ctx, tuple(ctx.neg(a) for a in x.rep.entries))
    return witt_class(negated)


def wmul(x: WittClass, y: WittClass) -> WittClass:
    _require_same_field(x, y)
    return witt_class(tensor_product(x.rep, y.rep))


def is_similar(q1: FormLike, q2: FormLike, budget: int | None = None) -> bool:
    """Equality in W(F): the anisotropic parts are equivalent."""
    if q1.ctx != q2.ctx:
        raise FieldMismatch("similarity compares forms over one field")
    return witt_class(q1, budget) == witt_class(q2, budget)


# ---------------------------------------------------------------------------
# Ring enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WittRingTable:
    """Elements of W(F) with exact Cayley tables (None marks a truncated cell)."""

    ctx: FieldCtx
    truncation: int | None
    elements: tuple[WittClass, ...]
    add: tuple[tuple[int | None, ...], ...]
    mul: tuple[tuple[int | None, ...], ...]

    def index_of(self, x: WittClass) -> int:
        return self.elements.index(x)

    def additive_group(self) -> str:
        """Structure of (W, +) for the four-element prime-field case."""
        one = self.index_of(unit_class(self.ctx))
        order, acc = 1, one
        while self.elements[acc] != zero_class(self.ctx):
            acc = self.add[acc][one]
            order += 1
        return "Z/4" if order == 4 else "Z/2 x Z/2"


@lru_cache(maxsize=None)
def enumerate_witt_ring(
    ctx: FieldCtx, truncation: int | None = None
) -> WittRingTable:
    """All of W(F_p) (four elements), or W(R) truncated to |signature| <= bound.

    Results are memoized per context; the tables are exact and the
    returned object is immutable, so sharing across threads is safe.
    """
    if ctx.kind is FieldKind.RATIONALS:
        raise InfiniteRing("W(Q) is infinite")
    if ctx.kind is FieldKind.REAL:
        if truncation is None:
            raise InfiniteRing("W(R) is isomorphic to Z; pass a truncation")
        sigs = list(range(-truncation, truncation + 1))
        elements = tuple(
            WittClass(ctx, _canonical_real(ctx, (1,) * s if s >= 0 else (-1,) * (-s)))
            for s in sigs
        )

        def clip(value):
            return sigs.index(value) if -truncation <= value <= truncation else None

        add = tuple(tuple(clip(a + b) for b in sigs) for a in sigs)
        mul = tuple(tuple(clip(a * b) for b in sigs) for a in sigs)
        return WittRingTable(ctx, truncation, elements, add, mul)

    delta = square_class_nontrivial(ctx)
    # the unique anisotropic binary class: <1, x> with -x a nonsquare
    second = delta if square_class(ctx, ctx.neg(ctx.one())).is_trivial else ctx.one()
    elements = (
        zero_class(ctx),
        unit_class(ctx),
        WittClass(ctx, DiagonalForm(ctx, (delta,))),
        witt_class(DiagonalForm(ctx, (ctx.one(), second))),
    )
    index = {e: i for i, e in enumerate(elements)}
    add = tuple(tuple(index[wadd(a, b)] for b in elements) for a in elements)
    mul = tuple(tuple(index[wmul(a, b)] for b in elements) for a in elements)
    return WittRingTable(ctx, None, elements, add, mul)


def square_class_nontrivial(ctx: FieldCtx):
    from .fields import least_nonresidue

    if ctx.kind is FieldKind.PRIME:
        return least_nonresidue(ctx.p)
    if ctx.kind is FieldKind.REAL:
        return ctx.neg(ctx.one())
    raise InfiniteRing("Q has infinitely many square classes")


# ---------------------------------------------------------------------------
# Pfister forms and the fundamental ideal
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PfisterForm:
    """The n-fold form <1, a_1> x ... x <1, a_n>, kept with its expansion."""

    ctx: FieldCtx
    slots: tuple
    expanded: DiagonalForm


def pfister(ctx: FieldCtx, slots) -> PfisterForm:
    """Expand the iterated tensor of binary forms <1, a_i> (dimension 2^n).

    Tensoring diagonal forms interleaves entries, so the expansion is
    built directly on the diagonal (the equality with tensor_product on
    Gram matrices is covered by the test suite).
    """
    coerced = tuple(ctx.coerce(a) for a in slots)
    if any(ctx.is_zero(a) for a in coerced):
        raise ZeroScalar("Pfister slots must be nonzero")
    entries = [ctx.one()]
    for a in coerced:
        entries = [x for e in entries for x in (e, ctx.mul(e, a))]
    return PfisterForm(ctx, coerced, DiagonalForm(ctx, tuple(entries)))


@dataclass(frozen=True)
class IdealFiltration:
    """The chain I^0 >= I^1 >= ... with F_2 quotient dimensions.

    For F_p each level is an explicit element set; for the sign-tracked
    reals level n is the subgroup of signatures divisible by 2^n.
    """

    ctx: FieldCtx
    n_max: int
    element_chain: tuple[frozenset, ...] | None
    signature_moduli: tuple[int, ...] | None
    quotient_dims: tuple[int, ...]  # dims of I^n / I^(n+1) for n < n_max

    def contains(self, x: WittClass, n: int) -> bool:
        if n > self.n_max:
            raise ValueError(f"filtration computed only up to n = {self.n_max}")
        if self.element_chain is not None:
            return x in self.element_chain[n]
        return x.signature % self.signature_moduli[n] == 0

    def level_size(self, n: int) -> int:
        if self.element_chain is None:
            raise InfiniteRing("signature model levels are infinite")
        return len(self.element_chain[n])


def _additive_closure(ctx, generators) -> frozenset:
    closure = {zero_class(ctx)}
    frontier = set(generators)
    while frontier:
        new = set()
        for g in frontier:
            for e in list(closure):
                s = wadd(g, e)
                if s not in closure:
                    new.add(s)
        closure |= frontier
        closure |= new
        frontier = new
    return frozenset(closure)


def ideal_filtration(ctx: FieldCtx, n_max: int) -> IdealFiltration:
    """Powers of the fundamental ideal, I^n generated by n-fold Pfister forms.

    Over F_p the additive closure is taken inside the four-element ring
    with Pfister slots running over the square-class alphabet; over the
    sign-tracked reals I^n corresponds to 2^n Z under the signature.
    """
    if ctx.kind is FieldKind.RATIONALS:
        raise InfiniteRing("the ideal filtration of W(Q) is not enumerable")
    if ctx.kind is FieldKind.REAL:
        moduli = tuple(2**n for n in range(n_max + 1))
        return IdealFiltration(ctx, n_max, None, moduli, (1,) * n_max)
    table = enumerate_witt_ring(ctx)
    alphabet = (ctx.one(), square_class_nontrivial(ctx))
    levels = [frozenset(table.elements)]
    for n in range(1, n_max + 1):
        generators = {
            witt_class(pfister(ctx, slots).expanded)
            for slots in itertools.product(alphabet, repeat=n)
        }
        levels.append(_additive_closure(ctx, generators))
    dims = []
    for n in range(n_max):
        ratio = len(levels[n]) // len(levels[n + 1])
        dims.append(ratio.bit_length() - 1)  # |I^n|/|I^(n+1)| is a power of 2
    return IdealFiltration(ctx, n_max, tuple(levels), None, tuple(dims))


# ---------------------------------------------------------------------------
# Classical invariants
# ---------------------------------------------------------------------------


def e0(x: WittClass) -> int:
    """Dimension mod 2; a homomorphism W -> F_2."""
    return x.dim % 2


def e1(x: WittClass) -> SquareClass:
    """Signed discriminant on I/I^2; needs an even-dimensional class."""
    if e0(x) != 0:
        raise NotInIdealPower("e1 is defined on I (even-dimensional classes)")
    if x.is_zero:
        return square_class(x.ctx, x.ctx.one())
    return signed_discriminant(x.rep)


@dataclass(frozen=True)
class HasseProfile:
    """Hasse invariant prod_{i<j} (a_i, a_j)_v recorded per place.

    Places not listed carry +1; over F_p the profile is constantly +1
    (the Brauer group is trivial there).
    """

    negative_places: frozenset[Place]

    def at(self, place: Place) -> int:
        return -1 if place in self.negative_places else 1

    @property
    def is_trivial(self) -> bool:
        return not self.negative_places


def hasse_profile(q: FormLike) -> HasseProfile:
    """Hasse symbol profile of a concrete non-degenerate form."""
    ctx = q.ctx
    entries = _nondegenerate_entries(q)
    if len(entries) != (q.n if isinstance(q, DiagonalForm) else as_gram(q).n):
        raise DegenerateForm("Hasse profile needs a non-degenerate form")
    if ctx.kind is FieldKind.PRIME:
        return HasseProfile(frozenset())
    if ctx.kind is FieldKind.REAL:
        sign = _hasse_invariant(entries, REAL_PLACE)
        return HasseProfile(frozenset({REAL_PLACE} if sign == -1 else set()))
    negative = frozenset(
        v for v in relevant_places(entries) if _hasse_invariant(entries, v) == -1
    )
    return HasseProfile(negative)


def e2(x) -> HasseProfile:
    """Hasse profile on I^2/I^3 (concrete stand-in for the Clifford invariant).

    Accepts a WittClass or a concrete form.  Because the raw Hasse product
    of a form is only an invariant *within* I^2 mod I^3, the profile is
    computed from the representative handed in.
    """
    if isinstance(x, WittClass):
        probe, entries_holder = x, x.rep
    else:
        entries_holder = (
            x if isinstance(x, DiagonalForm) else diagonalize(as_gram(x))[0]
        )
        probe = None
    ctx = entries_holder.ctx
    entries = _nondegenerate_entries(entries_holder)
    dim = len(entries)
    if dim % 2 != 0:
        raise NotInIdealPower("e2 needs a class in I^2 (even dimension)")
    if dim and not signed_discriminant(DiagonalForm(ctx, entries)).is_trivial:
        raise NotInIdealPower("e2 needs a class in I^2 (trivial signed discriminant)")
    if probe is not None and probe.is_zero:
        return HasseProfile(frozenset())
    return hasse_profile(DiagonalForm(ctx, entries))
