"""Isotropy decisions, isotropic vector search, hyperbolic splitting, and
the full Witt decomposition V = H^k _|_ V_a.

Isotropy over Q is decided by Hasse-Minkowski via Hilbert-symbol local
conditions; the constructive vector search is a separate, height-bounded
enumeration so that an exhausted budget is never confused with a negative
decision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy.ntheory import sqrt_mod

from . import linalg
from .errors import (
    DegenerateForm,
    NotIsotropic,
    NotIsotropicVector,
    SearchBudgetExceeded,
    UnsupportedFieldForVectorSearch,
)
from .fields import (
    FieldCtx,
    FieldKind,
    hilbert_symbol,
    relevant_places,
    square_class,
    squarefree_part,
)
from .forms import (
    DiagonalForm,
    FormLike,
    GramMatrix,
    IsometryWitness,
    apply_congruence,
    as_gram,
    diagonalize,
    evaluate,
    radical_split,
)
from .linalg import Matrix, Vector

DEFAULT_SEARCH_BUDGET = 10_000


# ---------------------------------------------------------------------------
# Diagonal normal forms used by the searches
# ---------------------------------------------------------------------------


def _sqrt_in_fp(x: int, p: int) -> int:
    root = sqrt_mod(x, p)
    if root is None:
        raise ValueError(f"{x} is not a square mod {p}")
    return int(root)


def _normalize_diagonal(ctx: FieldCtx, entries) -> tuple[tuple, Matrix]:
    """Scale each nonzero diagonal entry to its square-class representative.

    Returns (reps, Z) with Z = diag(r_i) such that Z^t diag(reps) Z equals
    diag(entries); over the sign-tracked reals no rational scaling exists,
    so entries are returned unchanged with Z = I.
    """
    if ctx.kind is FieldKind.REAL:
        return tuple(entries), linalg.identity(ctx, len(entries))
    reps = []
    scales = []
    for d in entries:
        if ctx.is_zero(d):
            reps.append(d)
            scales.append(ctx.one())
            continue
        rep = square_class(ctx, d).rep
        ratio = ctx.div(d, rep)  # a square by construction
        if ctx.kind is FieldKind.PRIME:
            r = _sqrt_in_fp(ratio, ctx.p)
        else:
            r = Fraction(isqrt(ratio.numerator), isqrt(ratio.denominator))
        reps.append(rep)
        scales.append(r)
    n = len(entries)
    z = tuple(
        tuple(scales[i] if i == j else ctx.zero() for j in range(n)) for i in range(n)
    )
    return tuple(reps), z


def _squarefree_diagonalization(q: GramMatrix) -> tuple[tuple, Matrix]:
    """Diagonalize and normalize entries; returns (entries, M) with M^t q M diagonal."""
    ctx = q.ctx
    diag, w = diagonalize(q)
    reps, z = _normalize_diagonal(ctx, diag.entries)
    z_inv = tuple(
        tuple(ctx.inv(z[i][i]) if i == j and not ctx.is_zero(z[i][i]) else ctx.zero()
              for j in range(q.n))
        for i in range(q.n)
    )
    # diag = M^t q M and diag(reps) = Zinv^t diag Zinv, so (M Zinv)^t q (M Zinv) = reps
    m = linalg.mat_mul(ctx, w.matrix, z_inv)
    return reps, m


# ---------------------------------------------------------------------------
# Isotropy decisions
# ---------------------------------------------------------------------------


def _is_isotropic_fp_small(q: GramMatrix) -> bool:
    # brute force over the projective line / point for n <= 2
    ctx = q.ctx
    if q.n == 1:
        return False
    for t in range(ctx.p):
        if ctx.is_zero(evaluate(q, (1, t))):
            return True
    return ctx.is_zero(evaluate(q, (0, 1)))


def _local_square(d: int, place) -> bool:
    """Is the squarefree integer d a square in the completion at place?"""
    if place.is_real:
        return d > 0
    q = place.q
    if d % q == 0:
        return False  # odd valuation
    if q == 2:
        return d % 8 == 1
    from .fields import legendre

    return legendre(d, q) == 1


def _is_isotropic_rationals(entries: tuple[int, ...]) -> bool:
    """Hasse-Minkowski decision for a squarefree-integer diagonal form."""
    n = len(entries)
    if n <= 1:
        return False
    if n == 2:
        return squarefree_part(-entries[0] * entries[1]) == 1
    indefinite = any(d > 0 for d in entries) and any(d < 0 for d in entries)
    if not indefinite:
        return False
    if n >= 5:
        return True  # isotropic at every finite place once dim >= 5
    places = relevant_places(entries)
    finite = [v for v in places if not v.is_real]
    if n == 3:
        a, b, c = entries
        return all(
            hilbert_symbol(-a * c, -b * c, v) == 1 for v in finite
        )
    # n == 4: isotropic at v iff disc is a nonsquare there, or the Hasse
    # invariant matches (-1,-1)_v when the disc is a square.
    d = squarefree_part(entries[0] * entries[1] * entries[2] * entries[3])
    for v in finite:
        if _local_square(d, v):
            eps = 1
            for i in range(4):
                for j in range(i + 1, 4):
                    eps *= hilbert_symbol(entries[i], entries[j], v)
            if eps != hilbert_symbol(-1, -1, v):
                return False
    return True


def is_isotropic(q: FormLike) -> bool:
    """Exact isotropy decision for a non-degenerate form.

    F_p: brute force for n <= 2, constructive search for n >= 3 (which
    must succeed).  Sign-tracked reals: both signs appear among the
    diagonal entries.  Q: Hasse-Minkowski via local Hilbert-symbol
    criteria at the real place, 2, and the primes dividing the entries.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    if not gram.is_nondegenerate():
        raise DegenerateForm("isotropy is decided on non-degenerate forms")
    if gram.n == 0:
        return False
    if ctx.kind is FieldKind.PRIME:
        if gram.n <= 2:
            return _is_isotropic_fp_small(gram)
        vec = _search_fp(gram)
        if vec is None:  # cannot happen for n >= 3 over F_p
            raise AssertionError("ternary form over F_p had no isotropic vector")
        return True
    entries, _ = _squarefree_diagonalization(gram)
    if ctx.kind is FieldKind.REAL:
        return any(d > 0 for d in entries) and any(d < 0 for d in entries)
    return _is_isotropic_rationals(tuple(int(d) for d in entries))


# ---------------------------------------------------------------------------
# Constructive isotropic vectors
# ---------------------------------------------------------------------------


def _search_fp(q: GramMatrix) -> Vector | None:
    """Isotropic vector over F_p via the diagonal model; None if anisotropic."""
    ctx = q.ctx
    p = ctx.p
    entries, m = _squarefree_diagonalization(q)
    n = len(entries)
    found = None
    if n == 1:
        return None
    if n == 2:
        target = ctx.neg(ctx.div(entries[1], entries[0]))
        root = sqrt_mod(target, p)
        if root is None:
            return None
        found = (int(root), 1) + (0,) * (n - 2)
    else:
        # a_1 s^2 + a_2 t^2 + a_3 = 0 always has a solution over F_p
        for s in range(p):
            a1s2 = ctx.mul(entries[0], ctx.mul(s, s))
            for t in range(p):
                value = ctx.add(
                    a1s2, ctx.add(ctx.mul(entries[1], ctx.mul(t, t)), entries[2])
                )
                if ctx.is_zero(value):
                    found = (s, t, 1) + (0,) * (n - 3)
                    break
            if found:
                break
        if found is None:
            return None
    return linalg.mat_vec(ctx, m, linalg.coerce_vector(ctx, found))


def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _integral_primitive(ctx: FieldCtx, vec: Vector) -> Vector:
    from math import gcd

    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ctx.coerce(x) for x in ints)


def _search_rationals(entries: tuple[int, ...], budget: int):
    """Height-bounded search on a squarefree-integer diagonal form.

    Pairs <d_i, d_j> with -d_i d_j square give an immediate witness; the
    general tier enumerates every coordinate assignment of height exactly
    h (pivot coordinate solved by an exact square-root test) for h up to
    the budget.
    """
    n = len(entries)
    for i in range(n):
        for j in range(i + 1, n):
            s2 = -entries[i] * entries[j]
            if s2 >= 0 and isqrt(s2) ** 2 == s2:
                vec = [0] * n
                vec[i] = isqrt(s2)
                vec[j] = abs(entries[i])
                if vec[i] == 0:
                    continue
                return tuple(vec)
    pivot = max(range(n), key=lambda idx: (abs(entries[idx]), -idx))
    rest = [idx for idx in range(n) if idx != pivot]
    for h in range(1, budget + 1):
        for assignment in itertools.product(range(-h, h + 1), repeat=n - 1):
            if max((abs(c) for c in assignment), default=0) != h:
                continue
            residual = sum(
                entries[idx] * c * c for idx, c in zip(rest, assignment)
            )
            target = Fraction(-residual, entries[pivot])
            root = _rational_sqrt(target)
            if root is None:
                continue
            vec = [Fraction(0)] * n
            for idx, c in zip(rest, assignment):
                vec[idx] = Fraction(c)
            vec[pivot] = root
            return tuple(vec)
    return None


def find_isotropic_vector(q: FormLike, budget: int | None = None) -> Vector:
    """A nonzero v with q(v) = 0, exactly.

    F_p uses exhaustive search in a diagonal model; Q enumerates integer
    vectors by increasing height (the isotropy *decision* is made first by
    local conditions, so an exhausted budget raises SearchBudgetExceeded,
    never a wrong NotIsotropic).  Isotropic vectors over the sign-tracked
    reals need not be rational, so that field is rejected.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    if ctx.kind is FieldKind.REAL:
        raise UnsupportedFieldForVectorSearch(
            "isotropic vectors over the sign-tracked reals can be irrational"
        )
    if not gram.is_nondegenerate():
        raise DegenerateForm("isotropic vector search needs a non-degenerate form")
    if ctx.kind is FieldKind.PRIME:
        vec = _search_fp(gram)
        if vec is None:
            raise NotIsotropic(f"form is anisotropic over {ctx.label}")
        return vec
    if not is_isotropic(gram):
        raise NotIsotropic("form is anisotropic over Q")
    entries, m = _squarefree_diagonalization(gram)
    bound = DEFAULT_SEARCH_BUDGET if budget is None else budget
    diag_vec = _search_rationals(tuple(int(d) for d in entries), bound)
    if diag_vec is None:
        raise SearchBudgetExceeded(bound)
    ambient = linalg.mat_vec(ctx, m, linalg.coerce_vector(ctx, diag_vec))
    return _integral_primitive(ctx, ambient)


# ---------------------------------------------------------------------------
# Hyperbolic splitting and Witt decomposition
# ---------------------------------------------------------------------------


def split_hyperbolic(q: FormLike, v) -> tuple[GramMatrix, IsometryWitness]:
    """Split a hyperbolic plane off along the isotropic vector v.

    Picks w with B(v, w) != 0 (non-degeneracy), adjusts it to w' with
    q(w') = 0 and B(v, w') = 1, and diagonalizes the plane with the basis
    (v + w'/2, v - w'/2), whose Gram block is exactly diag(1, -1).  The
    witness exhibits q = M^t (<1,-1> _|_ complement) M.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    if not gram.is_nondegenerate():
        raise DegenerateForm("hyperbolic splitting needs a non-degenerate form")
    vec = linalg.coerce_vector(ctx, v)
    if len(vec) != gram.n:
        raise NotIsotropicVector("vector dimension does not match the form")
    if all(ctx.is_zero(x) for x in vec):
        raise NotIsotropicVector("the zero vector does not span a hyperbolic plane")
    if not ctx.is_zero(evaluate(gram, vec)):
        raise NotIsotropicVector("vector is not isotropic for the form")

    bv = linalg.mat_vec(ctx, gram.entries, vec)
    j = next(i for i, x in enumerate(bv) if not ctx.is_zero(x))
    w1 = tuple(
        ctx.div(ctx.one() if i == j else ctx.zero(), bv[j]) for i in range(gram.n)
    )
    half_qw1 = ctx.div(evaluate(gram, w1), ctx.add(ctx.one(), ctx.one()))
    w_prime = tuple(ctx.sub(a, ctx.mul(half_qw1, b)) for a, b in zip(w1, vec))
    half = ctx.div(ctx.one(), ctx.add(ctx.one(), ctx.one()))
    p1 = tuple(ctx.add(a, ctx.mul(half, b)) for a, b in zip(vec, w_prime))
    p2 = tuple(ctx.sub(a, ctx.mul(half, b)) for a, b in zip(vec, w_prime))

    bw = linalg.mat_vec(ctx, gram.entries, w_prime)
    complement_basis = linalg.kernel_basis(ctx, (bv, bw))
    p_matrix = linalg.from_columns((p1, p2) + complement_basis)
    transported = apply_congruence(gram, p_matrix)
    block = transported.entries
    one, zero = ctx.one(), ctx.zero()
    plane_ok = (
        block[0][0] == one
        and block[1][1] == ctx.neg(one)
        and ctx.is_zero(block[0][1])
        and all(
            ctx.is_zero(block[0][k]) and ctx.is_zero(block[1][k])
            for k in range(2, gram.n)
        )
    )
    if not plane_ok:
        raise AssertionError("hyperbolic plane construction produced a wrong block")
    complement = GramMatrix(
        ctx, tuple(tuple(block[i][k] for k in range(2, gram.n)) for i in range(2, gram.n))
    )
    witness = IsometryWitness(
        matrix=linalg.inverse(ctx, p_matrix),
        source=gram,
        target=transported,
        trace=(
            f"hyperbolic plane on isotropic v = ({', '.join(ctx.format_scalar(x) for x in vec)})",
            "plane basis (v + w'/2, v - w'/2) has Gram diag(1, -1)",
        ),
    )
    return complement, witness


@dataclass(frozen=True)
class WittDecomposition:
    """V = H^k _|_ V_a (with any radical split off first and reported)."""

    witt_index: int
    anisotropic_part: DiagonalForm
    null_dim: int
    witness: IsometryWitness

    @property
    def trace(self) -> tuple[str, ...]:
        return self.witness.trace


def _block_with_identity(ctx, m: Matrix, before: int, after: int) -> Matrix:
    return linalg.block_diag(
        ctx, linalg.block_diag(ctx, linalg.identity(ctx, before), m), linalg.identity(ctx, after)
    )


def witt_decompose(q: FormLike, budget: int | None = None) -> WittDecomposition:
    """Split hyperbolic planes until the rest is anisotropic.

    The radical is stripped first and reported via null_dim/trace.  Over
    the sign-tracked reals the planes are paired off at the square-class
    level: entries of one sign each pair with one of the other, and the
    stored witness maps onto the sign-paired rational diagonal.
    """
    gram = as_gram(q)
    ctx = gram.ctx
    q_nd, null_dim, w_rad = radical_split(gram)
    trace = [f"radical dimension {null_dim}"]
    nd = q_nd.n

    if ctx.kind is FieldKind.REAL:
        entries = tuple(q_nd.entries[i][i] for i in range(nd))
        pos = [i for i, d in enumerate(entries) if d > 0]
        neg = [i for i, d in enumerate(entries) if d < 0]
        k = min(len(pos), len(neg))
        order = []
        for idx in range(k):
            order.extend((pos[idx], neg[idx]))
        order.extend(pos[k:])
        order.extend(neg[k:])
        perm = linalg.permutation_matrix(ctx, order)
        t_matrix = linalg.inverse(ctx, perm) if nd else ()
        anis_entries = tuple(
            ctx.coerce(1 if entries[i] > 0 else -1) for i in order[2 * k:]
        )
        target_entries = tuple(entries[i] for i in order)
        trace.append(
            f"signature split: {len(pos)} positive, {len(neg)} negative, k = {k}"
        )
        trace.append(
            "square-class normalization diag(1/sqrt|d_i|) maps the paired "
            "diagonal to <1,-1>^k _|_ <+-1>^m (sign level, not a rational matrix)"
        )
        anis = DiagonalForm(ctx, anis_entries)
    else:
        current = q_nd
        t_matrix = linalg.identity(ctx, nd)
        k = 0
        while current.n and is_isotropic(current):
            try:
                vec = find_isotropic_vector(current, budget)
            except SearchBudgetExceeded as exc:
                raise SearchBudgetExceeded(
                    exc.bound,
                    tuple(trace) + (f"stalled after splitting {k} plane(s)",),
                ) from exc
            complement, w_split = split_hyperbolic(current, vec)
            t_matrix = linalg.mat_mul(
                ctx,
                _block_with_identity(ctx, w_split.matrix, 2 * k, 0),
                t_matrix,
            )
            trace.append(f"split hyperbolic plane #{k + 1}")
            current = complement
            k += 1
        diag_a, w_a = diagonalize(current)
        reps, z = _normalize_diagonal(ctx, diag_a.entries)
        # current = (M^{-1})^t diag_a M^{-1} and diag_a = Z^t diag(reps) Z
        y = linalg.mat_mul(ctx, z, linalg.inverse(ctx, w_a.matrix)) if current.n else ()
        t_matrix = linalg.mat_mul(
            ctx, _block_with_identity(ctx, y, 2 * k, 0), t_matrix
        )
        anis = DiagonalForm(ctx, reps)
        hyper = []
        for _ in range(k):
            hyper.extend((ctx.one(), ctx.neg(ctx.one())))
        target_entries = tuple(hyper) + anis.entries
        trace.append(f"anisotropic part of dimension {anis.n}")

    target = DiagonalForm(ctx, target_entries + (ctx.zero(),) * null_dim).gram()
    total = linalg.mat_mul(
        ctx,
        linalg.block_diag(ctx, t_matrix, linalg.identity(ctx, null_dim)),
        w_rad.matrix,
    )
    witness = IsometryWitness(
        matrix=total, source=gram, target=target, trace=tuple(trace)
    )
    return WittDecomposition(
        witt_index=k, anisotropic_part=anis, null_dim=null_dim, witness=witness
    )
