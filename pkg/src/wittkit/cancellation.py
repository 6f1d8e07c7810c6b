"""Constructive Witt cancellation, two ways, plus the check that they agree.

Given non-degenerate diagonal forms a = <a_1..a_n>, b = <b_1..b_n> with
a_1 = b_1 and a certified isometry M (meaning M^t B M = A for the diagonal
Gram matrices), both routes produce an (n-1) x (n-1) invertible N with
N^t B' N = A' for the truncated forms:

* the algebraic route substitutes x_1 = y/(1 - m_11) with
  y = m_12 x_2 + ... + m_1n x_n and reads N off the surviving identity;
* the geometric route reflects through the hyperplane orthogonal to
  u = e_1 - f_1 and restricts to the orthogonal complement.

The homotopy check computes the coefficient matrices of both routes
(c_ki from the reflection, d_ki from the substitution) and verifies they
agree entrywise, along with the identity q(u) = 2 b_1 (1 - m_11).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import IsotropicReflectionVector, PreconditionViolated
from .fields import Scalar
from .forms import (
    DiagonalForm,
    FormLike,
    GramMatrix,
    IsometryWitness,
    apply_congruence,
    as_gram,
    bilinear,
    evaluate,
)
from .linalg import Matrix, Vector


@dataclass(frozen=True)
class ReflectionVector:
    """A vector u with q(u) != 0, the axis of the reflection tau_u."""

    u: Vector
    q_u: Scalar

    @staticmethod
    def for_form(q: FormLike, u) -> "ReflectionVector":
        gram = as_gram(q)
        vec = linalg.coerce_vector(gram.ctx, u)
        value = evaluate(gram, vec)
        if gram.ctx.is_zero(value):
            raise IsotropicReflectionVector(
                "reflection axis must satisfy q(u) != 0"
            )
        return ReflectionVector(vec, value)


def reflection_matrix(q: FormLike, u) -> Matrix:
    """Matrix of tau_u : z |-> z - (2 B(z, u)/q(u)) u, an involutive isometry of q."""
    gram = as_gram(q)
    ctx = gram.ctx
    rv = u if isinstance(u, ReflectionVector) else ReflectionVector.for_form(gram, u)
    bu = linalg.mat_vec(ctx, gram.entries, rv.u)
    two_over = ctx.div(ctx.add(ctx.one(), ctx.one()), rv.q_u)
    n = gram.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            delta = ctx.one() if i == j else ctx.zero()
            row.append(ctx.sub(delta, ctx.mul(two_over, ctx.mul(rv.u[i], bu[j]))))
        rows.append(tuple(row))
    return tuple(rows)


def transporter(q: FormLike, x, y) -> tuple[Matrix, bool]:
    """An isometry T of q with T(x) = y, given q(x) = q(y) != 0.

    Since q(x+y) + q(x-y) = 4 q(x) != 0, at least one of the two candidate
    axes works: tau_{x-y} maps x to y directly, and -tau_{x+y} does when
    the difference is isotropic.  The difference branch is preferred when
    both are available.  Returns (matrix, used_sum_branch).
    """
    gram = as_gram(q)
    ctx = gram.ctx
    xv = linalg.coerce_vector(ctx, x)
    yv = linalg.coerce_vector(ctx, y)
    qx, qy = evaluate(gram, xv), evaluate(gram, yv)
    if qx != qy or ctx.is_zero(qx):
        raise PreconditionViolated(
            "transporter needs q(x) = q(y) != 0, got "
            f"q(x)={ctx.format_scalar(qx)}, q(y)={ctx.format_scalar(qy)}"
        )
    diff = tuple(ctx.sub(a, b) for a, b in zip(xv, yv))
    if not ctx.is_zero(evaluate(gram, diff)):
        return reflection_matrix(gram, diff), False
    total = tuple(ctx.add(a, b) for a, b in zip(xv, yv))
    tau = reflection_matrix(gram, total)
    negated = tuple(tuple(ctx.neg(e) for e in row) for row in tau)
    return negated, True


def _validate_inputs(a: DiagonalForm, b: DiagonalForm, m) -> tuple[Matrix, bool]:
    """Check the cancellation preconditions; return (M, sign_flip_applied).

    The returned matrix has its first row negated when m_11 was 1, which
    replaces z_1 by -z_1 and leaves the isometry identity intact.
    """
    if a.ctx != b.ctx:
        raise PreconditionViolated("forms live over different fields")
    ctx = a.ctx
    n = a.n
    if n <= 1:
        raise PreconditionViolated("cancellation requires dimension n > 1")
    if b.n != n:
        raise PreconditionViolated("forms must have equal dimension")
    if not a.is_nondegenerate() or not b.is_nondegenerate():
        raise PreconditionViolated("cancellation requires non-degenerate forms")
    if a.entries[0] != b.entries[0]:
        raise PreconditionViolated("first entries must agree (a_1 = b_1)")
    mm = linalg.coerce_matrix(ctx, m)
    if len(mm) != n or (mm and len(mm[0]) != n):
        raise PreconditionViolated("isometry matrix has the wrong shape")
    if apply_congruence(b.gram(), mm).entries != a.gram().entries:
        raise PreconditionViolated("matrix is not an isometry: M^t B M != A")
    flipped = False
    if mm[0][0] == ctx.one():
        mm = (tuple(ctx.neg(x) for x in mm[0]),) + mm[1:]
        flipped = True
    return mm, flipped


@dataclass(frozen=True)
class CancellationResult:
    n_matrix: Matrix
    substitution: Vector  # coefficients of x_2..x_n in x_1 = y/(1 - m_11)
    sign_flip_applied: bool
    witness: IsometryWitness

    @property
    def method(self) -> str:
        return self.witness.trace[0]


def _truncated(form: DiagonalForm) -> DiagonalForm:
    return DiagonalForm(form.ctx, form.entries[1:])


def _substitution_coefficients(ctx, m: Matrix) -> Vector:
    denom = ctx.sub(ctx.one(), m[0][0])
    return tuple(ctx.div(m[0][k], denom) for k in range(1, len(m)))


def cancel_first_algebraic(a: DiagonalForm, b: DiagonalForm, m) -> CancellationResult:
    """Cancel a_1 = b_1 via the substitution x_1 = y/(1 - m_11).

    The surviving identity in x_2..x_n is the isometry; its matrix is
    n_ik = m_ik + m_i1 m_1k / (1 - m_11) for i, k >= 2.
    """
    mm, flipped = _validate_inputs(a, b, m)
    ctx = a.ctx
    n = a.n
    denom = ctx.sub(ctx.one(), mm[0][0])
    rows = []
    for i in range(1, n):
        row = []
        for k in range(1, n):
            correction = ctx.div(ctx.mul(mm[i][0], mm[0][k]), denom)
            row.append(ctx.add(mm[i][k], correction))
        rows.append(tuple(row))
    n_matrix = tuple(rows)
    witness = IsometryWitness(
        matrix=n_matrix,
        source=_truncated(a).gram(),
        target=_truncated(b).gram(),
        trace=(
            "algebraic cancellation",
            f"sign flip applied: {flipped}",
            "substitution x1 = (m_12 x2 + ... + m_1n xn)/(1 - m_11)",
        ),
    )
    return CancellationResult(
        n_matrix=n_matrix,
        substitution=_substitution_coefficients(ctx, mm),
        sign_flip_applied=flipped,
        witness=witness,
    )


def cancel_first_geometric(a: DiagonalForm, b: DiagonalForm, m) -> CancellationResult:
    """Cancel a_1 = b_1 by reflecting e_1 onto f_1 and restricting to f_1-perp.

    Working in f-coordinates (where the Gram matrix is B = diag(b)), the
    column e_1 of M is carried to f_1 by tau_{e_1 - f_1}; the composite
    tau*M is block diagonal and its lower block is the isometry N.
    """
    mm, flipped = _validate_inputs(a, b, m)
    ctx = a.ctx
    n = a.n
    b_gram = b.gram()
    e1 = tuple(mm[i][0] for i in range(n))  # first column: e_1 in f-coords
    f1 = tuple(ctx.one() if i == 0 else ctx.zero() for i in range(n))
    axis = tuple(ctx.sub(p, q) for p, q in zip(e1, f1))
    tau = reflection_matrix(b_gram, axis)
    composite = linalg.mat_mul(ctx, tau, mm)
    # tau(e_1) = f_1 and tau maps e_1-perp onto f_1-perp, so the first row
    # and column of tau*M must be (1, 0, ..., 0); verify exactly.
    if composite[0][0] != ctx.one() or any(
        not ctx.is_zero(composite[0][k]) for k in range(1, n)
    ) or any(not ctx.is_zero(composite[i][0]) for i in range(1, n)):
        raise PreconditionViolated(
            "reflection composite is not block diagonal; inputs are inconsistent"
        )
    n_matrix = tuple(tuple(composite[i][k] for k in range(1, n)) for i in range(1, n))
    witness = IsometryWitness(
        matrix=n_matrix,
        source=_truncated(a).gram(),
        target=_truncated(b).gram(),
        trace=(
            "geometric cancellation",
            f"sign flip applied: {flipped}",
            "reflection tau_(e1 - f1) restricted to the orthogonal complement",
        ),
    )
    return CancellationResult(
        n_matrix=n_matrix,
        substitution=_substitution_coefficients(ctx, mm),
        sign_flip_applied=flipped,
        witness=witness,
    )


@dataclass(frozen=True)
class HomotopyReport:
    c_matrix: Matrix  # reflection-side coefficients c_ki, rows k, cols i (k, i >= 2)
    d_matrix: Matrix  # substitution-side coefficients d_ki
    entries_match: bool
    q_u: Scalar
    q_u_expected: Scalar  # 2 b_1 (1 - m_11)
    q_u_match: bool
    sign_flip_applied: bool

    @property
    def ok(self) -> bool:
        return self.entries_match and self.q_u_match


def homotopy_check(a: DiagonalForm, b: DiagonalForm, m) -> HomotopyReport:
    """Compare the reflection and substitution coefficient matrices entrywise.

    c_ki (coefficient of f_i in tau_u(e_k)) is computed from the actual
    reflection matrix; d_ki (coefficient of x_k in w_i) from the boxed
    substitution formula.  Both must agree exactly, and the axis must
    satisfy q(u) = 2 b_1 (1 - m_11).
    """
    mm, flipped = _validate_inputs(a, b, m)
    ctx = a.ctx
    n = a.n
    b_gram = b.gram()
    e1 = tuple(mm[i][0] for i in range(n))
    f1 = tuple(ctx.one() if i == 0 else ctx.zero() for i in range(n))
    axis = tuple(ctx.sub(p, q) for p, q in zip(e1, f1))
    q_u = evaluate(b_gram, axis)
    one_minus_m11 = ctx.sub(ctx.one(), mm[0][0])
    q_u_expected = ctx.mul(
        ctx.add(ctx.one(), ctx.one()), ctx.mul(b.entries[0], one_minus_m11)
    )

    tau = reflection_matrix(b_gram, axis)
    composite = linalg.mat_mul(ctx, tau, mm)
    # c_ki = f_i coefficient of tau_u(e_k) = (tau M)[i][k]
    c_rows = tuple(
        tuple(composite[i][k] for i in range(1, n)) for k in range(1, n)
    )
    d_rows = tuple(
        tuple(
            ctx.add(mm[i][k], ctx.div(ctx.mul(mm[i][0], mm[0][k]), one_minus_m11))
            for i in range(1, n)
        )
        for k in range(1, n)
    )
    return HomotopyReport(
        c_matrix=c_rows,
        d_matrix=d_rows,
        entries_match=c_rows == d_rows,
        q_u=q_u,
        q_u_expected=q_u_expected,
        q_u_match=q_u == q_u_expected,
        sign_flip_applied=flipped,
    )
