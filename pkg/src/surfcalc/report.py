"""Run reports and their JSON / Markdown renderings.

Every number is rendered as an exact ``p/q`` string.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class ResultLine:
    query: str
    value: str
    expected: str | None = None
    passed: bool | None = None        # None for plain queries
    citation: str = ""
    line: int = 0
    kind: str = "assert"              # assert | query | report
    message: str = ""

    def to_dict(self) -> dict:
        d = {"query": self.query, "value": self.value, "expected": self.expected,
             "pass": self.passed, "citation": self.citation, "line": self.line,
             "kind": self.kind}
        if self.message:
            d["message"] = self.message
        return d


@dataclass
class Report:
    scenario: str
    results: list[ResultLine] = field(default_factory=list)
    axioms_used: list[str] = field(default_factory=list)
    verdict_summary: dict = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def use_axiom(self, text: str):
        if text not in self.axioms_used:
            self.axioms_used.append(text)

    @property
    def failures(self) -> list[ResultLine]:
        return [r for r in self.results if r.passed is False]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.errors

    def to_dict(self) -> dict:
        d = {"scenario": self.scenario,
             "results": [r.to_dict() for r in self.results],
             "axioms_used": list(self.axioms_used),
             "verdict_summary": self.verdict_summary}
        if self.errors:
            d["errors"] = list(self.errors)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_markdown(self) -> str:
        out = [f"# {self.scenario}", ""]
        if self.results:
            out += ["| line | check | value | expected | status | source |",
                    "|---|---|---|---|---|---|"]
            for r in self.results:
                status = {True: "pass", False: "FAIL", None: r.kind}[r.passed]
                out.append(f"| {r.line} | `{_cell(r.query)}` | `{_cell(r.value)}` | "
                           f"{'`' + _cell(r.expected) + '`' if r.expected is not None else ''} | "
                           f"{status} | {_cell(r.citation)} |")
            out.append("")
        failures = self.failures
        if failures:
            out.append("## Failures")
            for r in failures:
                out.append(f"- line {r.line}: `{r.query}` expected `{r.expected}`, "
                           f"actual `{r.value}`" + (f" ({r.message})" if r.message else ""))
            out.append("")
        if self.errors:
            out.append("## Errors")
            out += [f"- {e}" for e in self.errors]
            out.append("")
        if self.verdict_summary:
            out.append("## Summary")
            for name, entries in self.verdict_summary.items():
                if isinstance(entries, dict):
                    body = ", ".join(f"{k} = {v}" for k, v in entries.items())
                else:
                    body = str(entries)
                out.append(f"- **{name}**: {body}")
            out.append("")
        if self.axioms_used:
            out.append("## Axioms and conventions used")
            out += [f"- {a}" for a in self.axioms_used]
            out.append("")
        total = sum(r.passed is not None for r in self.results)
        out.append(f"{total - len(failures)}/{total} checks passed")
        return "\n".join(out) + "\n"


def _cell(s: str) -> str:
    return str(s).replace("|", "\\|")
