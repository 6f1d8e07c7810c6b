"""Text syntax for quadratic forms.

Grammar (whitespace insensitive)::

    expression := form '@' field
    form       := term ('+' term)*
    term       := atom ('*' atom)*
    atom       := '<' scalar (',' scalar)* '>'
                | 'mat' '[' row (',' row)* ']'
                | 'pfister' '(' scalar (',' scalar)* ')'
    row        := '[' scalar (',' scalar)* ']'
    scalar     := integer | integer '/' integer
    field      := 'Q' | 'R' | 'Fp' '(' integer ')'

'*' (tensor product) binds tighter than '+' (orthogonal sum).  Matrix
literals are symmetrized on build, which represents the same polynomial
since the fields have characteristic != 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidField, ParseError, ZeroEntry
from .fields import FieldCtx, prime_field, rationals, real_field
from .forms import DiagonalForm, GramMatrix, direct_sum, symmetrize, tensor_product


@dataclass(frozen=True)
class DiagNode:
    entries: tuple[Fraction, ...]


@dataclass(frozen=True)
class MatNode:
    rows: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class PfisterNode:
    slots: tuple[Fraction, ...]


@dataclass(frozen=True)
class SumNode:
    left: "FormNode"
    right: "FormNode"


@dataclass(frozen=True)
class ProdNode:
    left: "FormNode"
    right: "FormNode"


FormNode = Union[DiagNode, MatNode, PfisterNode, SumNode, ProdNode]


@dataclass(frozen=True)
class FormExpression:
    node: FormNode
    ctx: FieldCtx

    def build(self) -> GramMatrix:
        return _build(self.node, self.ctx)

    def as_diagonal(self) -> DiagonalForm | None:
        """The literal diagonal form, when the expression is a plain <...>."""
        if isinstance(self.node, DiagNode):
            return DiagonalForm(self.ctx, self.node.entries)
        return None


def _build(node: FormNode, ctx: FieldCtx) -> GramMatrix:
    if isinstance(node, DiagNode):
        return DiagonalForm(ctx, node.entries).gram()
    if isinstance(node, MatNode):
        if any(len(row) != len(node.rows) for row in node.rows):
            raise ParseError("matrix literal must be square", 0)
        return symmetrize(ctx, node.rows)
    if isinstance(node, PfisterNode):
        from .wittring import pfister

        if any(ctx.is_zero(ctx.coerce(a)) for a in node.slots):
            raise ZeroEntry("pfister slots must be nonzero")
        return pfister(ctx, node.slots).expanded.gram()
    if isinstance(node, SumNode):
        return direct_sum(_build(node.left, ctx), _build(node.right, ctx))
    return tensor_product(_build(node.left, ctx), _build(node.right, ctx))


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>-?\d+(?:/-?\d+)?)|(?P<name>[A-Za-z]+)|(?P<punct>[<>\[\](),+*@]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number' | 'name' | punctuation literal | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_pos = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad_pos]!r}", bad_pos)
        if match.group("number") is not None:
            tokens.append(_Token("number", match.group("number"), match.start("number")))
        elif match.group("name") is not None:
            tokens.append(_Token("name", match.group("name"), match.start("name")))
        else:
            punct = match.group("punct")
            tokens.append(_Token(punct, punct, match.start("punct")))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> _Token:
        if self.current.kind != kind:
            raise ParseError(
                f"expected {what}, found {self.current.text or 'end of input'!r}",
                self.current.pos,
            )
        return self.advance()

    def parse_expression(self) -> FormExpression:
        node = self.parse_form()
        self.expect("@", "'@' and a field tag")
        ctx = self.parse_field()
        if self.current.kind != "end":
            raise ParseError(
                f"trailing input {self.current.text!r}", self.current.pos
            )
        return FormExpression(node, ctx)

    def parse_form(self) -> FormNode:
        node = self.parse_term()
        while self.current.kind == "+":
            self.advance()
            node = SumNode(node, self.parse_term())
        return node

    def parse_term(self) -> FormNode:
        node = self.parse_atom()
        while self.current.kind == "*":
            self.advance()
            node = ProdNode(node, self.parse_atom())
        return node

    def parse_atom(self) -> FormNode:
        token = self.current
        if token.kind == "<":
            self.advance()
            entries = [self.parse_scalar()]
            while self.current.kind == ",":
                self.advance()
                entries.append(self.parse_scalar())
            self.expect(">", "',' or '>'")
            return DiagNode(tuple(entries))
        if token.kind == "name" and token.text == "mat":
            self.advance()
            self.expect("[", "'['")
            rows = [self.parse_row()]
            while self.current.kind == ",":
                self.advance()
                rows.append(self.parse_row())
            self.expect("]", "',' or ']'")
            return MatNode(tuple(rows))
        if token.kind == "name" and token.text == "pfister":
            self.advance()
            self.expect("(", "'('")
            slots = [self.parse_scalar()]
            while self.current.kind == ",":
                self.advance()
                slots.append(self.parse_scalar())
            self.expect(")", "',' or ')'")
            return PfisterNode(tuple(slots))
        raise ParseError(
            f"expected a form, found {token.text or 'end of input'!r}", token.pos
        )

    def parse_row(self) -> tuple[Fraction, ...]:
        self.expect("[", "'['")
        entries = [self.parse_scalar()]
        while self.current.kind == ",":
            self.advance()
            entries.append(self.parse_scalar())
        self.expect("]", "',' or ']'")
        return tuple(entries)

    def parse_scalar(self) -> Fraction:
        token = self.expect("number", "a scalar")
        num, _, den = token.text.partition("/")
        if den:
            if int(den) == 0:
                raise ParseError("scalar denominator is zero", token.pos)
            return Fraction(int(num), int(den))
        return Fraction(int(num))

    def parse_field(self) -> FieldCtx:
        token = self.expect("name", "a field tag (Q, R, or Fp(p))")
        if token.text == "Q":
            return rationals()
        if token.text == "R":
            return real_field()
        if token.text == "Fp":
            self.expect("(", "'('")
            p_token = self.expect("number", "a prime")
            self.expect(")", "')'")
            if "/" in p_token.text:
                raise InvalidField(f"field order must be an integer, got {p_token.text}")
            return prime_field(int(p_token.text))
        raise InvalidField(f"unknown field tag {token.text!r}")


def parse_form(text: str) -> FormExpression:
    """Parse ``<form> @ <field>``; raises ParseError with a 0-based position."""
    return _Parser(text).parse_expression()


def parse_field_tag(text: str) -> FieldCtx:
    parser = _Parser(text)
    ctx = parser.parse_field()
    if parser.current.kind != "end":
        raise ParseError(f"trailing input {parser.current.text!r}", parser.current.pos)
    return ctx


def parse_matrix_text(ctx: FieldCtx, text: str):
    """Parse a bare matrix literal like [[3/5,4/5],[-4/5,3/5]]."""
    parser = _Parser(text)
    parser.expect("[", "'['")
    rows = [parser.parse_row()]
    while parser.current.kind == ",":
        parser.advance()
        rows.append(parser.parse_row())
    parser.expect("]", "',' or ']'")
    if parser.current.kind != "end":
        raise ParseError(f"trailing input {parser.current.text!r}", parser.current.pos)
    from . import linalg

    return linalg.coerce_matrix(ctx, rows)


def parse_vector_text(ctx: FieldCtx, text: str):
    """Parse a vector literal like [1,-1] or (1,-1)."""
    parser = _Parser(text)
    opener = parser.current.kind
    if opener not in ("[", "("):
        raise ParseError("expected '[' or '(' to open a vector", parser.current.pos)
    closer = "]" if opener == "[" else ")"
    parser.advance()
    entries = [parser.parse_scalar()]
    while parser.current.kind == ",":
        parser.advance()
        entries.append(parser.parse_scalar())
    parser.expect(closer, f"',' or '{closer}'")
    if parser.current.kind != "end":
        raise ParseError(f"trailing input {parser.current.text!r}", parser.current.pos)
    return tuple(ctx.coerce(x) for x in entries)


# ---------------------------------------------------------------------------
# Formatting (round-trips through parse_form)
# ---------------------------------------------------------------------------


def _fmt_scalar(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def format_node(node: FormNode) -> str:
    if isinstance(node, DiagNode):
        return "<" + ",".join(_fmt_scalar(e) for e in node.entries) + ">"
    if isinstance(node, MatNode):
        rows = ",".join(
            "[" + ",".join(_fmt_scalar(e) for e in row) + "]" for row in node.rows
        )
        return f"mat[{rows}]"
    if isinstance(node, PfisterNode):
        return "pfister(" + ",".join(_fmt_scalar(s) for s in node.slots) + ")"
    if isinstance(node, SumNode):
        return f"{format_node(node.left)} + {format_node(node.right)}"
    # grammar has no parentheses, so products of sums are not expressible
    if isinstance(node.left, SumNode) or isinstance(node.right, SumNode):
        raise ValueError("cannot format a product of sums in this grammar")
    return f"{format_node(node.left)} * {format_node(node.right)}"


def format_form(expr: FormExpression) -> str:
    return f"{format_node(expr.node)} @ {expr.ctx.label}"
