"""Recursive-descent parser for ``.surf`` scripts.

Grammar (statements end with ``;``, ``#`` starts a comment)::

    base C;                       pic0 e, f;
    ruled S over x, xp;           relation xi_x - xi_xp == 7*e;
    blowup E1 at B * F;           blowup E at point q on B;    blowup E at general;
    divisor D = 3*Bp + F;         contract pi = B, E1;
    assert D.D == 4 cite "...";   query disc(pi)[B];           report pi;
    cover Z = pi, 2, 3*Bp + F;    cover Zt = Z over pit;

Expressions are Q-linear combinations with ``.`` for intersection, ``p*(c)``
for pullbacks of Pic0 classes, ``[Curve]`` indexing, ``(deg, c)`` pairs,
``{A, B}`` curve sets and builtin calls such as ``disc(pi)``.
"""
from __future__ import annotations

import sys

from . import ast
from .diagnostics import (
    Diagnostic, ScriptError, REDEFINITION, SYNTAX, UNDEFINED, UNKNOWN_FUNCTION, LEXICAL,
)
from .lexer import Token, tokenize

# name -> (min args, max args)
FUNCTIONS = {
    "pull": (1, 1), "disc": (1, 1), "tdot": (3, 3), "pullback": (2, 2),
    "obstruction": (1, 1), "restrict": (2, 2), "singularity": (1, 1),
    "mmp": (1, 1), "zerolocus": (1, 1), "nklt": (1, 1), "nef": (1, 2),
    "nef_tracked": (1, 1), "big": (1, 1), "qgor": (1, 1), "negdef": (1, 1),
    "semiample": (5, 5), "ramification": (1, 1), "verdict": (1, 1),
    "numtriv": (1, 1),
}

STATEMENT_KEYWORDS = ("base", "pic0", "relation", "ruled", "blowup", "divisor",
                      "contract", "assert", "query", "report", "cover")

MAX_DEPTH = 200
CANONICAL = "K"
RESERVED_NAMES = frozenset({"K", "p"})


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.depth = 0

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def fail(self, expected, message=None):
        t = self.tok
        msg = message or f"unexpected {t.describe()}"
        raise ScriptError([Diagnostic(SYNTAX, msg, t.line, t.col, tuple(expected))])

    def at_op(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def at_word(self, text: str) -> bool:
        return self.tok.kind in ("IDENT", "KEYWORD") and self.tok.text == text

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            self.fail([repr(text)])
        return self.advance()

    def expect_word(self, text: str) -> Token:
        if not self.at_word(text):
            self.fail([repr(text)])
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "IDENT":
            self.fail(["identifier"])
        return self.advance()

    def ident_list(self) -> tuple[str, ...]:
        names = [self.ident().text]
        while self.at_op(","):
            self.advance()
            names.append(self.ident().text)
        return tuple(names)

    def cite(self):
        if self.at_word("cite"):
            self.advance()
            if self.tok.kind != "STRING":
                self.fail(["string"])
            return self.advance().value
        return None

    # -- statements -------------------------------------------------------
    def script(self) -> ast.Script:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return ast.Script(tuple(stmts))

    def statement(self):
        t = self.tok
        if t.kind != "KEYWORD" or t.text not in STATEMENT_KEYWORDS:
            self.fail([repr(k) for k in STATEMENT_KEYWORDS], f"unexpected {t.describe()}")
        kw = self.advance().text
        pos = t.pos
        if kw == "base":
            node = ast.BaseDecl(self.ident().text, pos)
        elif kw == "pic0":
            node = ast.Pic0Decl(self.ident_list(), pos)
        elif kw == "ruled":
            name = self.ident().text
            self.expect_word("over")
            x = self.ident().text
            self.expect_op(",")
            xp = self.ident().text
            node = ast.SurfaceDecl(name, (x, xp), pos)
        elif kw == "relation":
            lhs = self.expr()
            rhs = None
            if self.at_op("=="):
                self.advance()
                rhs = self.expr()
            node = ast.RelationDecl(lhs, rhs, pos)
        elif kw == "blowup":
            name = self.ident().text
            if not (self.tok.kind == "KEYWORD" and self.tok.text == "at"):
                self.fail(["'at'"])
            self.advance()
            node = ast.Blowup(name, self.center(), pos)
        elif kw == "divisor":
            name = self.ident().text
            self.expect_op("=")
            node = ast.DivisorDef(name, self.expr(), pos)
        elif kw == "contract":
            name = self.ident().text
            self.expect_op("=")
            node = ast.Contract(name, self.ident_list(), pos)
        elif kw == "assert":
            lhs = self.expr()
            op = rhs = None
            if self.at_op("==") or self.at_op("!="):
                op = self.advance().text
                rhs = self.expr()
            node = ast.Assert(lhs, op, rhs, self.cite(), pos)
        elif kw == "query":
            e = self.expr()
            node = ast.Query(e, self.cite(), pos)
        elif kw == "report":
            node = ast.Report(self.ident().text, pos)
        else:  # cover
            name = self.ident().text
            self.expect_op("=")
            base = self.ident().text
            if self.at_word("over"):
                self.advance()
                node = ast.FiberProduct(name, base, self.ident().text, pos)
            else:
                self.expect_op(",")
                degree = self.expr()
                self.expect_op(",")
                node = ast.Cover(name, base, degree, self.expr(), pos)
        self.expect_op(";")
        return node

    def center(self):
        if self.at_word("general") and self.peek().kind == "OP" and self.peek().text == ";":
            self.advance()
            return ast.CenterGeneral()
        if self.at_word("point") and self.peek().kind == "IDENT" and \
                self.peek(2).kind == "IDENT" and self.peek(2).text == "on":
            self.advance()
            label = self.ident().text
            self.advance()
            return ast.CenterPoint(label, self.ident().text)
        if self.tok.kind != "IDENT":
            self.fail(["identifier", "'point'", "'general'"])
        a = self.ident().text
        self.expect_op("*")
        return ast.CenterMeet(a, self.ident().text)

    # -- expressions ------------------------------------------------------
    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail([], "expression nested too deeply")

    def expr(self):
        self.enter()
        left = self.term()
        while self.at_op("+") or self.at_op("-"):
            t = self.advance()
            left = ast.BinOp(t.text, left, self.term(), t.pos)
        self.depth -= 1
        return left

    def term(self):
        left = self.unary()
        while self.at_op("*") or self.at_op("/"):
            t = self.advance()
            left = ast.BinOp(t.text, left, self.unary(), t.pos)
        return left

    def unary(self):
        if self.at_op("-"):
            t = self.advance()
            self.enter()
            operand = self.unary()
            self.depth -= 1
            if isinstance(operand, ast.Num):
                return ast.Num(-operand.value, t.pos)
            return ast.Neg(operand, t.pos)
        return self.postfix()

    def postfix(self):
        node = self.primary()
        while True:
            if self.at_op("."):
                t = self.advance()
                node = ast.Dot(node, self.primary(), t.pos)
            elif self.at_op("["):
                t = self.advance()
                key = self.ident().text
                self.expect_op("]")
                node = ast.Index(node, key, t.pos)
            else:
                return node

    def primary(self):
        t = self.tok
        if t.kind == "NUMBER":
            self.advance()
            return ast.Num(t.value, t.pos)
        if t.kind == "STRING":
            self.advance()
            return ast.Str(t.value, t.pos)
        if t.kind == "KEYWORD" and t.text in ("true", "false"):
            self.advance()
            return ast.Bool(t.text == "true", t.pos)
        if t.kind == "IDENT" and t.text == "p" and self.peek().text == "*" \
                and self.peek(2).text == "(":
            self.advance()
            self.advance()
            self.advance()
            arg = self.expr()
            self.expect_op(")")
            return ast.PicPull(arg, t.pos)
        if (t.kind == "IDENT" or (t.kind == "KEYWORD" and t.text == "verdict")) \
                and self.peek().kind == "OP" and self.peek().text == "(":
            self.advance()
            self.advance()
            args = []
            if not self.at_op(")"):
                args.append(self.expr())
                while self.at_op(","):
                    self.advance()
                    args.append(self.expr())
            self.expect_op(")")
            return ast.Call(t.text, tuple(args), t.pos)
        if t.kind == "IDENT":
            self.advance()
            return ast.Name(t.text, t.pos)
        if self.at_op("("):
            self.advance()
            first = self.expr()
            if self.at_op(","):
                self.advance()
                second = self.expr()
                self.expect_op(")")
                return ast.Pair(first, second, t.pos)
            self.expect_op(")")
            return first
        if self.at_op("{"):
            self.advance()
            items = () if self.at_op("}") else self.ident_list()
            self.expect_op("}")
            return ast.SetLit(items, t.pos)
        self.fail(["number", "identifier", "string", "'('", "'{'", "'p*('"])


# -- name resolution ----------------------------------------------------------

def _walk(e):
    yield e
    if isinstance(e, ast.Neg):
        yield from _walk(e.operand)
    elif isinstance(e, (ast.BinOp, ast.Dot)):
        yield from _walk(e.left)
        yield from _walk(e.right)
    elif isinstance(e, ast.Index):
        yield from _walk(e.base)
    elif isinstance(e, ast.Call):
        for a in e.args:
            yield from _walk(a)
    elif isinstance(e, ast.PicPull):
        yield from _walk(e.arg)
    elif isinstance(e, ast.Pair):
        yield from _walk(e.first)
        yield from _walk(e.second)


def expressions(stmt):
    for attr in ("lhs", "rhs", "expr", "degree", "polarization"):
        e = getattr(stmt, attr, None)
        if e is not None:
            yield e


def check_names(script: ast.Script) -> list[Diagnostic]:
    """Static checks: single assignment, declaration before use, known calls."""
    defined: dict[str, str] = {CANONICAL: "canonical"}
    diags: list[Diagnostic] = []

    def define(name, kind, pos):
        if name in defined or name in RESERVED_NAMES:
            diags.append(Diagnostic(REDEFINITION, f"{name!r} is already defined", *pos))
        else:
            defined[name] = kind

    def use(name, pos, kinds=None):
        if name not in defined:
            diags.append(Diagnostic(UNDEFINED, f"{name!r} used before definition", *pos))
        elif kinds and defined[name] not in kinds:
            diags.append(Diagnostic(UNDEFINED, f"{name!r} is a {defined[name]}, "
                                    f"expected {' or '.join(kinds)}", *pos))

    for s in script:
        for e in expressions(s):
            for node in _walk(e):
                if isinstance(node, ast.Name):
                    use(node.id, node.pos)
                elif isinstance(node, ast.Index):
                    use(node.key, node.pos, ("curve",))
                elif isinstance(node, ast.SetLit):
                    for item in node.items:
                        use(item, node.pos, ("curve",))
                elif isinstance(node, ast.Call):
                    arity = FUNCTIONS.get(node.func)
                    if arity is None:
                        diags.append(Diagnostic(UNKNOWN_FUNCTION,
                                                f"unknown function {node.func!r}", *node.pos))
                    elif not arity[0] <= len(node.args) <= arity[1]:
                        diags.append(Diagnostic(SYNTAX, f"{node.func}() takes "
                                                f"{arity[0]}..{arity[1]} arguments", *node.pos))
        if isinstance(s, ast.BaseDecl):
            define(s.name, "base curve", s.pos)
        elif isinstance(s, ast.Pic0Decl):
            for n in s.names:
                define(n, "symbol", s.pos)
        elif isinstance(s, ast.SurfaceDecl):
            define(s.name, "surface", s.pos)
            for x in s.points:
                define(x, "point", s.pos)
                define(f"xi_{x}", "symbol", s.pos)
            for c in ("B", "Bp", "F", "Fp"):
                define(c, "curve", s.pos)
        elif isinstance(s, ast.Blowup):
            c = s.center
            if isinstance(c, ast.CenterMeet):
                use(c.first, s.pos, ("curve",))
                use(c.second, s.pos, ("curve",))
            elif isinstance(c, ast.CenterPoint):
                use(c.curve, s.pos, ("curve",))
                if c.label not in defined:
                    define(c.label, "point", s.pos)
                    define(f"xi_{c.label}", "symbol", s.pos)
                else:
                    use(c.label, s.pos, ("point",))
            define(s.name, "curve", s.pos)
        elif isinstance(s, ast.DivisorDef):
            define(s.name, "divisor", s.pos)
        elif isinstance(s, ast.Contract):
            for item in s.items:
                use(item, s.pos, ("curve", "contraction"))
            define(s.name, "contraction", s.pos)
        elif isinstance(s, ast.Report):
            use(s.name, s.pos)
        elif isinstance(s, ast.Cover):
            use(s.base, s.pos, ("contraction",))
            define(s.name, "cover", s.pos)
        elif isinstance(s, ast.FiberProduct):
            use(s.cover, s.pos, ("cover",))
            use(s.over, s.pos, ("contraction",))
            define(s.name, "cover", s.pos)
    return diags


def parse(text: str | bytes, check: bool = True) -> ast.Script:
    """Parse and (unless ``check`` is false) statically check a script;
    raises :class:`ScriptError`."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            head = bytes(text[:exc.start])
            line = head.count(b"\n") + 1
            col = exc.start - (head.rfind(b"\n") + 1) + 1
            raise ScriptError([Diagnostic(LEXICAL, "input is not valid UTF-8",
                                          line, col)]) from None
    tokens = tokenize(text)
    # each nesting level costs a handful of frames; leave room for MAX_DEPTH
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, old + 8 * MAX_DEPTH))
    try:
        script = _Parser(tokens).script()
    finally:
        sys.setrecursionlimit(old)
    diags = check_names(script) if check else []
    if diags:
        raise ScriptError(diags)
    return script
