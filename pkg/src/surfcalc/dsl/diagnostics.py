from __future__ import annotations

from dataclasses import dataclass

from ..errors import SurfcalcError

LEXICAL = "E100"
SYNTAX = "E200"
REDEFINITION = "E300"
UNDEFINED = "E301"
UNKNOWN_FUNCTION = "E302"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int
    col: int
    expected: tuple[str, ...] = ()

    def __str__(self):
        text = f"{self.line}:{self.col}: {self.code} {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text


class ScriptError(SurfcalcError):
    """Raised by :func:`parse`; carries one or more positioned diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
