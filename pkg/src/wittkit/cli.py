"""Command-line front end.

Subcommands: diagonalize, cancel, reflect, decompose, class, add, mul,
similar, invariants, ring-table, ideal, milnor, triangle, verify.
Exit codes: 0 success, 1 domain error (the error name is printed),
2 parse or usage error.  ``--json PATH`` writes the machine-readable
certificate or report; rationals are serialized as "n/d" strings.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import linalg
from .cancellation import (
    cancel_first_algebraic,
    cancel_first_geometric,
    homotopy_check,
    reflection_matrix,
)
from .errors import ParseError, PreconditionViolated, WittError
from .fields import FieldCtx, FieldKind
from .formexpr import (
    FormExpression,
    parse_field_tag,
    parse_form,
    parse_matrix_text,
    parse_vector_text,
)
from .forms import (
    DiagonalForm,
    GramMatrix,
    apply_congruence,
    diagonalize,
    signed_discriminant,
)
from .generators import random_self_isometry
from .isotropy import is_isotropic, witt_decompose
from .milnor import (
    DEFAULT_CONVENTION,
    convention_survey,
    milnor_k_mod2,
    triangle_check,
)
from .serialize import (
    dump_json,
    load_json,
    matrix_from_payload,
    matrix_payload,
    vector_from_payload,
    vector_payload,
)
from .wittring import (
    WittClass,
    e0,
    e1,
    e2,
    enumerate_witt_ring,
    hasse_profile,
    ideal_filtration,
    is_similar,
    witt_class,
)

DEFAULT_BUDGET = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep usage failures as exceptions, exit code 2
        raise UsageError(message)


def _fmt_matrix(ctx: FieldCtx, m) -> str:
    rows = ",".join(
        "[" + ",".join(ctx.format_scalar(x) for x in row) + "]" for row in m
    )
    return f"[{rows}]"


def _fmt_vector(ctx: FieldCtx, v) -> str:
    return "(" + ",".join(ctx.format_scalar(x) for x in v) + ")"


def _fmt_class(cls: WittClass) -> str:
    return str(cls.rep) if not cls.is_zero else "<>"


def _fmt_profile(profile) -> str:
    if profile.is_trivial:
        return "+1 everywhere"
    places = sorted(profile.negative_places, key=lambda p: (not p.is_real, p.q or 0))
    return "-1 at " + ", ".join(str(p) for p in places) + ", +1 elsewhere"


def _require_diagonal(expr: FormExpression, role: str) -> DiagonalForm:
    diag = expr.as_diagonal()
    if diag is None:
        raise PreconditionViolated(f"{role} must be a plain diagonal form <...>")
    return diag


def build_parser() -> _Parser:
    parser = _Parser(prog="witt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", metavar="PATH", help="write the JSON certificate/report")
        return p

    p = add("diagonalize", "diagonalize a form with an exact congruence witness")
    p.add_argument("form")

    p = add("cancel", "run both Witt cancellation constructions and compare")
    p.add_argument("--form-a", required=True)
    p.add_argument("--form-b", required=True)
    p.add_argument("--matrix", help="isometry matrix [[...],...]; omit to generate one")
    p.add_argument("--seed", type=int, default=0, help="seed for a generated isometry")

    p = add("reflect", "matrix of the hyperplane reflection tau_u")
    p.add_argument("--form", required=True)
    p.add_argument("--vector", required=True)

    p = add("decompose", "Witt decomposition V = H^k _|_ V_a")
    p.add_argument("form")
    p.add_argument("--budget", type=int, help="height bound for Q vector searches")

    p = add("class", "canonical Witt class of a form")
    p.add_argument("form")
    p.add_argument("--budget", type=int)

    p = add("add", "Witt-ring sum of two forms' classes")
    p.add_argument("form_a")
    p.add_argument("form_b")
    p.add_argument("--budget", type=int)

    p = add("mul", "Witt-ring product of two forms' classes")
    p.add_argument("form_a")
    p.add_argument("form_b")
    p.add_argument("--budget", type=int)

    p = add("similar", "decide equality in the Witt ring")
    p.add_argument("form_a")
    p.add_argument("form_b")
    p.add_argument("--budget", type=int)

    p = add("invariants", "dimension, e0, e1, e2, discriminant, signature")
    p.add_argument("form")
    p.add_argument("--budget", type=int)

    p = add("ring-table", "enumerate W(F) with exact Cayley tables")
    p.add_argument("--field", required=True)
    p.add_argument("--truncation", type=int, help="signature bound, required for R")

    p = add("ideal", "fundamental ideal filtration I^0 >= I^1 >= ...")
    p.add_argument("--field", required=True)
    p.add_argument("--max-power", type=int, default=3)

    p = add("milnor", "reduced Milnor K-theory mod 2 in one degree")
    p.add_argument("--field", required=True)
    p.add_argument("--degree", type=int, required=True)

    p = add("triangle", "desk-scale Milnor triangle check")
    p.add_argument("--field", required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument(
        "--convention",
        choices=("negated", "paper"),
        default=DEFAULT_CONVENTION,
        help="Pfister slot convention for the symbol map",
    )

    p = sub.add_parser("verify", help="recheck an emitted JSON certificate")
    p.add_argument("certificate")

    return parser


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_diagonalize(args) -> int:
    expr = parse_form(args.form)
    gram = expr.build()
    diag, witness = diagonalize(gram)
    ctx = expr.ctx
    print(f"D = {diag}")
    print(f"M = {_fmt_matrix(ctx, witness.matrix)}")
    print("check M^t B M = diag(D): OK" if witness.check() else "check: FAILED")
    if args.json:
        dump_json(
            {
                "kind": "diagonalization",
                "field": ctx.label,
                "input": matrix_payload(ctx, gram.entries),
                "diagonal": vector_payload(ctx, diag.entries),
                "M": matrix_payload(ctx, witness.matrix),
                "trace": list(witness.trace),
            },
            args.json,
        )
    return 0


def _cmd_cancel(args) -> int:
    expr_a = parse_form(args.form_a)
    expr_b = parse_form(args.form_b)
    if expr_a.ctx != expr_b.ctx:
        raise PreconditionViolated("both forms must carry the same field tag")
    ctx = expr_a.ctx
    a = _require_diagonal(expr_a, "--form-a")
    b = _require_diagonal(expr_b, "--form-b")
    if args.matrix:
        matrix = parse_matrix_text(ctx, args.matrix)
    else:
        if a.entries != b.entries:
            raise PreconditionViolated(
                "--matrix is required unless the two forms are identical"
            )
        matrix = random_self_isometry(a, random.Random(args.seed))
    alg = cancel_first_algebraic(a, b, matrix)
    geo = cancel_first_geometric(a, b, matrix)
    hom = homotopy_check(a, b, matrix)
    agree = alg.n_matrix == geo.n_matrix
    print(
        f"N = {_fmt_matrix(ctx, alg.n_matrix)}, "
        + ("both methods agree" if agree else "methods differ")
    )
    checks = {
        "congruence": alg.witness.check() and geo.witness.check(),
        "det_nonzero": not ctx.is_zero(linalg.det(ctx, alg.n_matrix)),
        "homotopy_entries": hom.ok,
    }
    print(
        "checks: "
        + " ".join(f"{k}={'OK' if v else 'FAILED'}" for k, v in checks.items())
    )
    if args.json:
        dump_json(
            {
                "field": ctx.label,
                "a": vector_payload(ctx, a.entries),
                "b": vector_payload(ctx, b.entries),
                "M": matrix_payload(ctx, matrix),
                "sign_flip": alg.sign_flip_applied,
                "substitution": vector_payload(ctx, alg.substitution),
                "N": matrix_payload(ctx, alg.n_matrix),
                "checks": checks,
            },
            args.json,
        )
    return 0


def _cmd_reflect(args) -> int:
    expr = parse_form(args.form)
    gram = expr.build()
    ctx = expr.ctx
    vector = parse_vector_text(ctx, args.vector)
    tau = reflection_matrix(gram, vector)
    print(f"tau = {_fmt_matrix(ctx, tau)}")
    preserved = apply_congruence(gram, tau).entries == gram.entries
    square = linalg.mat_mul(ctx, tau, tau) == linalg.identity(ctx, gram.n)
    print(f"isometry: {'OK' if preserved else 'FAILED'}")
    print(f"involution: {'OK' if square else 'FAILED'}")
    if args.json:
        dump_json(
            {
                "kind": "reflection",
                "field": ctx.label,
                "form": matrix_payload(ctx, gram.entries),
                "vector": vector_payload(ctx, vector),
                "tau": matrix_payload(ctx, tau),
                "checks": {"isometry": preserved, "involution": square},
            },
            args.json,
        )
    return 0


def _cmd_decompose(args) -> int:
    expr = parse_form(args.form)
    gram = expr.build()
    ctx = expr.ctx
    decomposition = witt_decompose(gram, args.budget)
    anis = decomposition.anisotropic_part
    certificate_ok = decomposition.witness.check()
    line = (
        f"k={decomposition.witt_index}, anisotropic={anis if anis.n else '<>'}"
        f", certificate {'OK' if certificate_ok else 'FAILED'}"
    )
    if decomposition.null_dim:
        line += f" (radical dimension {decomposition.null_dim})"
    print(line)
    if args.json:
        dump_json(
            {
                "kind": "witt_decomposition",
                "field": ctx.label,
                "input": matrix_payload(ctx, gram.entries),
                "witt_index": decomposition.witt_index,
                "null_dim": decomposition.null_dim,
                "anisotropic": vector_payload(ctx, anis.entries),
                "M": matrix_payload(ctx, decomposition.witness.matrix),
                "target": matrix_payload(ctx, decomposition.witness.target.entries),
                "trace": list(decomposition.trace),
            },
            args.json,
        )
    return 0


def _class_payload(ctx, cls: WittClass) -> dict:
    return {
        "field": ctx.label,
        "class": vector_payload(ctx, cls.rep.entries),
    }


def _cmd_class(args) -> int:
    expr = parse_form(args.form)
    cls = witt_class(expr.build(), args.budget)
    print(f"class: {_fmt_class(cls)}")
    if args.json:
        dump_json(_class_payload(expr.ctx, cls), args.json)
    return 0


def _cmd_add(args) -> int:
    return _binary_class_op(args, lambda x, y: x + y)


def _cmd_mul(args) -> int:
    return _binary_class_op(args, lambda x, y: x * y)


def _binary_class_op(args, op) -> int:
    expr_a = parse_form(args.form_a)
    expr_b = parse_form(args.form_b)
    x = witt_class(expr_a.build(), args.budget)
    y = witt_class(expr_b.build(), args.budget)
    result = op(x, y)
    print(f"class: {_fmt_class(result)}")
    if args.json:
        dump_json(_class_payload(expr_a.ctx, result), args.json)
    return 0


def _cmd_similar(args) -> int:
    expr_a = parse_form(args.form_a)
    expr_b = parse_form(args.form_b)
    verdict = is_similar(expr_a.build(), expr_b.build(), args.budget)
    print(f"similar: {'yes' if verdict else 'no'}")
    if args.json:
        dump_json(
            {"field": expr_a.ctx.label, "similar": verdict},
            args.json,
        )
    return 0


def _cmd_invariants(args) -> int:
    expr = parse_form(args.form)
    gram = expr.build()
    ctx = expr.ctx
    cls = witt_class(gram, args.budget)
    print(f"dim = {gram.n}")
    print(f"class = {_fmt_class(cls)}")
    print(f"e0 = {e0(cls)}")
    payload = {
        "field": ctx.label,
        "dim": gram.n,
        "class": vector_payload(ctx, cls.rep.entries),
        "e0": e0(cls),
    }
    if e0(cls) == 0:
        disc = e1(cls)
        print(f"e1 = {disc}")
        payload["e1"] = str(disc)
        if disc.is_trivial:
            profile = e2(cls)
            print(f"e2 = {_fmt_profile(profile)}")
            payload["e2_negative_places"] = [str(p) for p in profile.negative_places]
        else:
            print("e2: not defined (class not in I^2)")
    else:
        print("e1: not defined (class not in I)")
    if gram.is_nondegenerate():
        if gram.n:
            diag, _ = diagonalize(gram)
            print(f"signed discriminant = {signed_discriminant(diag)}")
            payload["signed_discriminant"] = str(signed_discriminant(diag))
        profile = hasse_profile(gram) if gram.n else None
        if profile is not None and ctx.kind is not FieldKind.PRIME:
            print(f"hasse profile = {_fmt_profile(profile)}")
        print(f"isotropic = {'yes' if gram.n and is_isotropic(gram) else 'no'}")
    if ctx.kind is not FieldKind.PRIME:
        print(f"signature = {cls.signature}")
        payload["signature"] = cls.signature
    if args.json:
        dump_json(payload, args.json)
    return 0


def _cmd_ring_table(args) -> int:
    ctx = parse_field_tag(args.field)
    table = enumerate_witt_ring(ctx, args.truncation)
    print(f"W({ctx.label}): {len(table.elements)} elements")
    for i, element in enumerate(table.elements):
        print(f"  {i}: {_fmt_class(element)}")
    if ctx.kind is FieldKind.PRIME:
        print(f"additive group: {table.additive_group()}")
    print(f"add: {list(list(row) for row in table.add)}")
    print(f"mul: {list(list(row) for row in table.mul)}")
    if args.json:
        dump_json(
            {
                "field": ctx.label,
                "elements": [_fmt_class(e) for e in table.elements],
                "add": [list(row) for row in table.add],
                "mul": [list(row) for row in table.mul],
            },
            args.json,
        )
    return 0


def _cmd_ideal(args) -> int:
    ctx = parse_field_tag(args.field)
    filt = ideal_filtration(ctx, args.max_power)
    if filt.element_chain is not None:
        for n, level in enumerate(filt.element_chain):
            names = sorted(_fmt_class(e) for e in level)
            print(f"I^{n}: {len(level)} element(s): {', '.join(names)}")
    else:
        for n, modulus in enumerate(filt.signature_moduli):
            print(f"I^{n}: signatures divisible by {modulus}")
    print(f"quotient dims over F2: {list(filt.quotient_dims)}")
    if args.json:
        payload = {
            "field": ctx.label,
            "quotient_dims": list(filt.quotient_dims),
        }
        if filt.element_chain is not None:
            payload["levels"] = [
                sorted(_fmt_class(e) for e in level) for level in filt.element_chain
            ]
        else:
            payload["signature_moduli"] = list(filt.signature_moduli)
        dump_json(payload, args.json)
    return 0


def _cmd_milnor(args) -> int:
    ctx = parse_field_tag(args.field)
    space = milnor_k_mod2(ctx, args.degree)
    print(
        f"K_{args.degree}({ctx.label})/2: dimension {space.dimension} "
        f"(ambient {space.ambient_dim}, relation rank {space.rank})"
    )
    for word in space.basis:
        print("  generator {" + ",".join(word) + "}")
    if args.json:
        dump_json(
            {
                "field": ctx.label,
                "degree": args.degree,
                "dimension": space.dimension,
                "basis": [list(w) for w in space.basis],
                "relations": [list(r) for r in space.relations],
            },
            args.json,
        )
    return 0


def _cmd_triangle(args) -> int:
    ctx = parse_field_tag(args.field)
    report = triangle_check(ctx, args.max_degree, args.convention)
    for row in report.degrees:
        print(
            f"n={row.n}: dim_K={row.dim_k} dim_gradedW={row.dim_graded_witt} "
            f"dim_H={row.dim_h} nu_bijective={'yes' if row.nu_bijective else 'no'} "
            f"commutes={'yes' if row.commutes else 'no'}"
        )
    dims = tuple(row.dim_k for row in report.degrees)
    print(f"dims: {dims}")
    print(f"isomorphic: {'yes' if report.isomorphic else 'no'}")
    survey = convention_survey(ctx, args.max_degree)
    print(
        "conventions: "
        + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(survey.items()))
    )
    if args.json:
        dump_json(
            {
                "field": ctx.label,
                "convention": report.convention,
                "degrees": [
                    {
                        "n": row.n,
                        "dim_K": row.dim_k,
                        "dim_gradedW": row.dim_graded_witt,
                        "dim_H": row.dim_h,
                        "nu_bijective": row.nu_bijective,
                        "commutes": row.commutes,
                    }
                    for row in report.degrees
                ],
            },
            args.json,
        )
    return 0


def _verify_cancellation(cert: dict) -> bool:
    ctx = parse_field_tag(cert["field"])
    a = DiagonalForm(ctx, vector_from_payload(ctx, cert["a"]))
    b = DiagonalForm(ctx, vector_from_payload(ctx, cert["b"]))
    matrix = matrix_from_payload(ctx, cert["M"])
    stored_n = matrix_from_payload(ctx, cert["N"])
    alg = cancel_first_algebraic(a, b, matrix)
    hom = homotopy_check(a, b, matrix)
    a_rest = DiagonalForm(ctx, a.entries[1:]).gram()
    b_rest = DiagonalForm(ctx, b.entries[1:]).gram()
    recomputed = {
        "congruence": apply_congruence(b_rest, stored_n).entries == a_rest.entries,
        "det_nonzero": not ctx.is_zero(linalg.det(ctx, stored_n)),
        "homotopy_entries": hom.ok,
    }
    consistent = (
        stored_n == alg.n_matrix
        and bool(cert["sign_flip"]) == alg.sign_flip_applied
        and vector_from_payload(ctx, cert["substitution"]) == alg.substitution
    )
    stored_checks = {k: bool(v) for k, v in cert["checks"].items()}
    return consistent and recomputed == stored_checks and all(recomputed.values())


def _verify_congruence_cert(cert: dict) -> bool:
    ctx = parse_field_tag(cert["field"])
    source = GramMatrix(ctx, matrix_from_payload(ctx, cert["input"]))
    matrix = matrix_from_payload(ctx, cert["M"])
    if cert["kind"] == "diagonalization":
        target = source
        expected = DiagonalForm(ctx, vector_from_payload(ctx, cert["diagonal"])).gram()
        transported = apply_congruence(target, matrix)
        congruent = transported.entries == expected.entries
    else:
        target = GramMatrix(ctx, matrix_from_payload(ctx, cert["target"]))
        congruent = apply_congruence(target, matrix).entries == source.entries
        anis = DiagonalForm(ctx, vector_from_payload(ctx, cert["anisotropic"]))
        if anis.n and is_isotropic(anis.gram()):
            return False
    det_ok = source.n == 0 or not ctx.is_zero(linalg.det(ctx, matrix))
    return congruent and det_ok


def _cmd_verify(args) -> int:
    cert = load_json(args.certificate)
    if "N" in cert and "substitution" in cert:
        ok = _verify_cancellation(cert)
    elif cert.get("kind") in ("diagonalization", "witt_decomposition"):
        ok = _verify_congruence_cert(cert)
    else:
        raise PreconditionViolated("unrecognized certificate layout")
    print(f"verdict: {'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


_HANDLERS = {
    "diagonalize": _cmd_diagonalize,
    "cancel": _cmd_cancel,
    "reflect": _cmd_reflect,
    "decompose": _cmd_decompose,
    "class": _cmd_class,
    "add": _cmd_add,
    "mul": _cmd_mul,
    "similar": _cmd_similar,
    "invariants": _cmd_invariants,
    "ring-table": _cmd_ring_table,
    "ideal": _cmd_ideal,
    "milnor": _cmd_milnor,
    "triangle": _cmd_triangle,
    "verify": _cmd_verify,
}


def run_command(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "budget", None) is None and hasattr(args, "budget"):
            env_budget = os.environ.get("WITT_BUDGET")
            args.budget = int(env_budget) if env_budget else DEFAULT_BUDGET
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error ParseError: {exc}", file=sys.stderr)
        return 2
    except WittError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
