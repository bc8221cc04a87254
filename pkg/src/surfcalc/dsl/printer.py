"""Canonical text for scripts: one statement per line, minimal parentheses."""
from __future__ import annotations

from fractions import Fraction

from . import ast

# Binding strength; higher binds tighter.
_ADD, _MUL, _UNARY, _POSTFIX, _ATOM = 1, 2, 3, 4, 5


def _num(q: Fraction) -> str:
    return str(q)


def _string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _prec(e) -> int:
    if isinstance(e, ast.BinOp):
        return _ADD if e.op in "+-" else _MUL
    if isinstance(e, ast.Neg):
        return _UNARY
    if isinstance(e, ast.Num) and e.value < 0:
        return _UNARY
    if isinstance(e, (ast.Dot, ast.Index)):
        return _POSTFIX
    return _ATOM


def _wrap(e, minimum: int) -> str:
    text = print_expr(e)
    return f"({text})" if _prec(e) < minimum else text


def print_expr(e) -> str:
    if isinstance(e, ast.Num):
        return _num(e.value)
    if isinstance(e, ast.Name):
        return e.id
    if isinstance(e, ast.Str):
        return _string(e.value)
    if isinstance(e, ast.Bool):
        return "true" if e.value else "false"
    if isinstance(e, ast.Neg):
        return "-" + _wrap(e.operand, _UNARY)
    if isinstance(e, ast.BinOp):
        level = _prec(e)
        left = _wrap(e.left, level)
        right = _wrap(e.right, level + 1)
        if e.op == "*":
            return f"{left}*{right}"
        return f"{left} {e.op} {right}"
    if isinstance(e, ast.Dot):
        return f"{_wrap(e.left, _POSTFIX)}.{_wrap(e.right, _ATOM)}"
    if isinstance(e, ast.Index):
        return f"{_wrap(e.base, _POSTFIX)}[{e.key}]"
    if isinstance(e, ast.Call):
        return f"{e.func}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, ast.PicPull):
        return f"p*({print_expr(e.arg)})"
    if isinstance(e, ast.Pair):
        return f"({print_expr(e.first)}, {print_expr(e.second)})"
    if isinstance(e, ast.SetLit):
        return "{" + ", ".join(e.items) + "}"
    raise TypeError(f"not an expression node: {e!r}")


def _center(c) -> str:
    if isinstance(c, ast.CenterMeet):
        return f"{c.first} * {c.second}"
    if isinstance(c, ast.CenterPoint):
        return f"point {c.label} on {c.curve}"
    return "general"


def _cite(c) -> str:
    return "" if c is None else f" cite {_string(c)}"


def print_statement(s) -> str:
    if isinstance(s, ast.BaseDecl):
        body = f"base {s.name}"
    elif isinstance(s, ast.Pic0Decl):
        body = f"pic0 {', '.join(s.names)}"
    elif isinstance(s, ast.SurfaceDecl):
        body = f"ruled {s.name} over {s.points[0]}, {s.points[1]}"
    elif isinstance(s, ast.RelationDecl):
        body = f"relation {print_expr(s.lhs)}"
        if s.rhs is not None:
            body += f" == {print_expr(s.rhs)}"
    elif isinstance(s, ast.Blowup):
        body = f"blowup {s.name} at {_center(s.center)}"
    elif isinstance(s, ast.DivisorDef):
        body = f"divisor {s.name} = {print_expr(s.expr)}"
    elif isinstance(s, ast.Contract):
        body = f"contract {s.name} = {', '.join(s.items)}"
    elif isinstance(s, ast.Assert):
        body = f"assert {print_expr(s.lhs)}"
        if s.op is not None:
            body += f" {s.op} {print_expr(s.rhs)}"
        body += _cite(s.cite)
    elif isinstance(s, ast.Query):
        body = f"query {print_expr(s.expr)}{_cite(s.cite)}"
    elif isinstance(s, ast.Report):
        body = f"report {s.name}"
    elif isinstance(s, ast.Cover):
        body = (f"cover {s.name} = {s.base}, {print_expr(s.degree)}, "
                f"{print_expr(s.polarization)}")
    elif isinstance(s, ast.FiberProduct):
        body = f"cover {s.name} = {s.cover} over {s.over}"
    else:
        raise TypeError(f"not a statement node: {s!r}")
    return body + ";"


def print_script(script: ast.Script) -> str:
    return "".join(print_statement(s) + "\n" for s in script)
