"""``surfcalc`` command line: run scripts and builtin suites.

Exit codes: 0 success, 1 assertion failure (or axiom use under ``--strict``),
2 usage, parse or execution error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import scenarios
from .dsl import ScriptError, parse, print_script
from .dsl.interpret import run_script
from .errors import UsageError
from .report import Report

OK, FAILED, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _add_output_flags(p):
    p.add_argument("--format", choices=("md", "json"), default="md")
    p.add_argument("--strict", action="store_true",
                   help="treat every axiom or heuristic invocation as a failure")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surfcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", help="run builtin golden suites")
    v.add_argument("suites", nargs="*", metavar="SUITE")
    v.add_argument("--list", action="store_true", help="list builtin suites and exit")
    v.add_argument("--all", action="store_true", help="run every builtin suite")
    _add_output_flags(v)

    r = sub.add_parser("run", help="run a .surf script")
    r.add_argument("path")
    _add_output_flags(r)

    pr = sub.add_parser("print", help="print a script in canonical form")
    pr.add_argument("path")
    return parser


def _status(report: Report, strict: bool) -> int:
    if report.errors:
        return USAGE
    if report.failures or (strict and report.axioms_used):
        return FAILED
    return OK


def _emit(reports: list[Report], fmt: str, strict: bool, out) -> None:
    if fmt == "json":
        payload = [r.to_dict() for r in reports]
        out.write(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n")
    else:
        out.write("\n\n".join(r.to_markdown() for r in reports) + "\n")
    if strict:
        for r in reports:
            for a in r.axioms_used:
                sys.stderr.write(f"strict: {r.scenario} uses {a}\n")


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _parse_file(path: str):
    try:
        return parse(_read(path))
    except ScriptError as exc:
        for d in exc.diagnostics:
            sys.stderr.write(f"{path}:{d}\n")
        return None


def cmd_verify(args, out) -> int:
    if args.list:
        for name in scenarios.NAMES:
            out.write(name + "\n")
        return OK
    names = list(scenarios.NAMES) if args.all else args.suites
    if not names:
        sys.stderr.write("surfcalc verify: name at least one suite, or pass --all\n")
        return USAGE
    try:
        suites = [scenarios.builtin(n) for n in names]
    except UsageError as exc:
        sys.stderr.write(f"surfcalc verify: {exc}\n")
        return USAGE
    reports = [run_script(s.script, s.name) for s in suites]
    _emit(reports, args.format, args.strict, out)
    return max(_status(r, args.strict) for r in reports)


def cmd_run(args, out) -> int:
    try:
        script = _parse_file(args.path)
    except UsageError as exc:
        sys.stderr.write(f"surfcalc run: {exc}\n")
        return USAGE
    if script is None:
        return USAGE
    report = run_script(script, args.path)
    _emit([report], args.format, args.strict, out)
    for err in report.errors:
        sys.stderr.write(f"{args.path}:{err}\n")
    return _status(report, args.strict)


def cmd_print(args, out) -> int:
    try:
        script = _parse_file(args.path)
    except UsageError as exc:
        sys.stderr.write(f"surfcalc print: {exc}\n")
        return USAGE
    if script is None:
        return USAGE
    out.write(print_script(script))
    return OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return USAGE
    handler = {"verify": cmd_verify, "run": cmd_run, "print": cmd_print}[args.command]
    return handler(args, out)


if __name__ == "__main__":
    sys.exit(main())
