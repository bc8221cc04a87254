"""Syntax tree for ``.surf`` scripts.

Every node carries a ``pos`` (line, column) that is excluded from equality so
that ``parse(print(tree)) == tree`` holds regardless of layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Pos = tuple[int, int]


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Pos = _pos()


@dataclass(frozen=True)
class Name:
    id: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Str:
    value: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Bool:
    value: bool
    pos: Pos = _pos()


@dataclass(frozen=True)
class Neg:
    operand: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str                 # + - * /
    left: Expr
    right: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Dot:
    left: Expr
    right: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Index:
    base: Expr
    key: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple[Expr, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class PicPull:
    """``p*(c)``: pullback of a Pic0 class along the ruling."""
    arg: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pair:
    first: Expr
    second: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class SetLit:
    items: tuple[str, ...]
    pos: Pos = _pos()


Expr = Num | Name | Str | Bool | Neg | BinOp | Dot | Index | Call | PicPull | Pair | SetLit


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class BaseDecl:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pic0Decl:
    names: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class RelationDecl:
    lhs: Expr
    rhs: Expr | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class SurfaceDecl:
    name: str
    points: tuple[str, str]
    pos: Pos = _pos()


@dataclass(frozen=True)
class CenterMeet:
    first: str
    second: str


@dataclass(frozen=True)
class CenterPoint:
    label: str
    curve: str


@dataclass(frozen=True)
class CenterGeneral:
    pass


@dataclass(frozen=True)
class Blowup:
    name: str
    center: CenterMeet | CenterPoint | CenterGeneral
    pos: Pos = _pos()


@dataclass(frozen=True)
class DivisorDef:
    name: str
    expr: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Contract:
    name: str
    items: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assert:
    lhs: Expr
    op: str | None = None       # == | != | None for a bare predicate
    rhs: Expr | None = None
    cite: str | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Query:
    expr: Expr
    cite: str | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Report:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Cover:
    name: str
    base: str
    degree: Expr
    polarization: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class FiberProduct:
    name: str
    cover: str
    over: str
    pos: Pos = _pos()


Statement = (BaseDecl | Pic0Decl | RelationDecl | SurfaceDecl | Blowup | DivisorDef
             | Contract | Assert | Query | Report | Cover | FiberProduct)


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]

    def __iter__(self):
        return iter(self.statements)

    def __len__(self):
        return len(self.statements)
