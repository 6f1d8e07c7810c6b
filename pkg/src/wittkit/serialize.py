"""JSON encoding for certificates and reports.

Rationals serialize as strings ("n" or "n/d") so no precision is ever
lost; F_p residues serialize as their decimal text.
"""

from __future__ import annotations

import json
from typing import Sequence

from .fields import FieldCtx
from .linalg import Matrix, Vector


def scalar_text(ctx: FieldCtx, x) -> str:
    return ctx.format_scalar(x)


def scalar_from_text(ctx: FieldCtx, text: str):
    return ctx.coerce(text)


def vector_payload(ctx: FieldCtx, v: Sequence) -> list[str]:
    return [scalar_text(ctx, x) for x in v]


def vector_from_payload(ctx: FieldCtx, payload: Sequence[str]) -> Vector:
    return tuple(ctx.coerce(x) for x in payload)


def matrix_payload(ctx: FieldCtx, m: Matrix) -> list[list[str]]:
    return [[scalar_text(ctx, x) for x in row] for row in m]


def matrix_from_payload(ctx: FieldCtx, payload) -> Matrix:
    return tuple(tuple(ctx.coerce(x) for x in row) for row in payload)


def dump_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=2)
        handle.write("\n")


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
