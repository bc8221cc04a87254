from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .diagnostics import Diagnostic, ScriptError, LEXICAL

KEYWORDS = frozenset({
    "base", "pic0", "relation", "ruled", "blowup", "at", "divisor", "contract",
    "assert", "query", "report", "cover", "verdict", "true", "false",
})

OPERATORS = ("==", "!=", ";", ",", "=", "+", "-", "*", "/", ".", "(", ")",
             "[", "]", "{", "}")


@dataclass(frozen=True)
class Token:
    kind: str      # IDENT NUMBER STRING KEYWORD OP EOF
    text: str
    line: int
    col: int
    value: object = None

    @property
    def pos(self):
        return (self.line, self.col)

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+(?:/[0-9]+)?")
_SPACE = re.compile(r"[ \t\r\f\v]+")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        m = _SPACE.match(text, i)
        if m:
            col += m.end() - i
            i = m.end()
            continue
        if ch == "#":
            j = text.find("\n", i)
            j = n if j < 0 else j
            col += j - i
            i = j
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            kind = "KEYWORD" if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, line, col))
            col += len(word)
            i = m.end()
            continue
        m = _NUMBER.match(text, i)
        if m:
            lit = m.group()
            num, _, den = lit.partition("/")
            if den and int(den) == 0:
                raise ScriptError([Diagnostic(LEXICAL, "zero denominator in literal", line, col)])
            tokens.append(Token("NUMBER", lit, line, col, Fraction(int(num), int(den or 1))))
            col += len(lit)
            i = m.end()
            continue
        if ch == '"':
            j, buf = i + 1, []
            while True:
                if j >= n or text[j] == "\n":
                    raise ScriptError([Diagnostic(LEXICAL, "unterminated string", line, col)])
                c = text[j]
                if c == "\\" and j + 1 < n and text[j + 1] in '"\\':
                    buf.append(text[j + 1])
                    j += 2
                    continue
                if c == '"':
                    break
                buf.append(c)
                j += 1
            tokens.append(Token("STRING", text[i:j + 1], line, col, "".join(buf)))
            col += j + 1 - i
            i = j + 1
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("OP", op, line, col))
                i += len(op)
                col += len(op)
                break
        else:
            raise ScriptError([Diagnostic(LEXICAL, f"unexpected character {ch!r}", line, col)])
    tokens.append(Token("EOF", "", line, col))
    return tokens
