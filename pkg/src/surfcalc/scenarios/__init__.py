"""Builtin scenario suites shipped as ``.surf`` fixtures."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..dsl import ast, parse
from ..dsl.printer import print_expr
from ..errors import UsageError

NAMES = ("section4_X", "section4_Xtilde", "section4_mmp", "section5_cover")


@dataclass(frozen=True)
class GoldenSuite:
    name: str
    script: ast.Script
    expectations: tuple[tuple[str, str, str], ...]
    source: str = ""

    def expectation(self, query: str) -> tuple[str, str]:
        for q, expected, cite in self.expectations:
            if q == query:
                return expected, cite
        raise KeyError(query)


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise UsageError(f"unknown suite {name!r}; known suites: {', '.join(NAMES)}")
    return resources.files(__package__).joinpath("data", f"{name}.surf").read_text("utf-8")


def builtin(name: str) -> GoldenSuite:
    text = fixture_text(name)
    script = parse(text)
    expectations = []
    for s in script:
        if isinstance(s, ast.Assert):
            expected = print_expr(s.rhs) if s.rhs is not None else "true"
            expectations.append((print_expr(s.lhs), expected, s.cite or ""))
    return GoldenSuite(name, script, tuple(expectations), text)


def all_suites() -> list[GoldenSuite]:
    return [builtin(n) for n in NAMES]
