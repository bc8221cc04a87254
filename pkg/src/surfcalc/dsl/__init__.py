"""The ``.surf`` scenario language."""
from . import ast
from .diagnostics import Diagnostic, ScriptError
from .parser import parse
from .printer import print_expr, print_script

__all__ = ["ast", "Diagnostic", "ScriptError", "parse", "print_expr", "print_script"]
