"""Command-line front end.

    engelkit engel S3 --json
    engelkit series M53
    engelkit verify baer catalog
    engelkit verify-example primes=[3,5] exps=[2,3]
    engelkit catalog > groups.def
    engelkit --defs groups.def series F1

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 capacity exceeded
or infinite group.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .core import (
    DEFAULT_ANALYSIS_CAP,
    DEFAULT_ENUMERATION_CAP,
    HARD_CEILING,
    CapacityError,
    Element,
    Group,
    InfiniteGroupError,
)
from .definitions import DefinitionError, build_groups, definitions_text, parse_definitions
from .engel import classify
from .example import ExampleGroup
from .series import series_report
from .verify import CheckReport, catalog, check_example, run_checks

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunResult:
    code: int
    output: str = ""
    error: str = ""


def _canonical(elems) -> list[str]:
    return [str(g) for g in sorted(elems)]


def _degrees(d: dict[Element, int]) -> dict[str, int]:
    return {str(g): d[g] for g in sorted(d)}


def _group_header(G: Group) -> dict:
    return {"name": G.name, "order": G.order if G.finite else "infinite"}


def engel_report(G: Group) -> dict:
    cl = classify(G)
    return {
        "group": _group_header(G),
        "engel": {
            "left": _canonical(cl.left),
            "bounded_left": _degrees(cl.bounded_left),
            "right": _canonical(cl.right),
            "bounded_right": _degrees(cl.bounded_right),
        },
    }


def series_dict(G: Group) -> dict:
    return {"group": _group_header(G), "series": series_report(G).as_dict()}


def checks_dict(G_name: str, order, reports: list[CheckReport], timing: bool) -> dict:
    return {"group": {"name": G_name, "order": order},
            "checks": [r.as_dict(timing) for r in reports]}


# ---------------------------------------------------------------------------
# text rendering


def _text_engel(rep: dict) -> str:
    g, e = rep["group"], rep["engel"]
    lines = [f"{g['name']}  order {g['order']}"]
    lines.append(f"left Engel ({len(e['left'])}): " + ", ".join(e["left"]))
    lines.append(f"bounded left Engel ({len(e['bounded_left'])}): "
                 + ", ".join(f"{k} [{v}]" for k, v in e["bounded_left"].items()))
    lines.append(f"right Engel ({len(e['right'])}): " + ", ".join(e["right"]))
    lines.append(f"bounded right Engel ({len(e['bounded_right'])}): "
                 + ", ".join(f"{k} [{v}]" for k, v in e["bounded_right"].items()))
    return "\n".join(lines) + "\n"


def _text_series(rep: dict) -> str:
    g, s = rep["group"], rep["series"]
    lines = [f"{g['name']}  order {g['order']}"]
    for key, value in s.items():
        if isinstance(value, list):
            value = " < ".join(map(str, value)) if key.startswith("upper") else \
                " > ".join(map(str, value))
        lines.append(f"{key.replace('_', ' ')}: {'none' if value is None else value}")
    return "\n".join(lines) + "\n"


def _text_checks(reports: list[CheckReport], timing: bool) -> str:
    lines = []
    for r in reports:
        line = r.line()
        if timing:
            line += f"  ({r.elapsed:.3f}s)"
        lines.append(line)
    failed = sum(not r.passed for r in reports)
    lines.append(f"{len(reports) - failed}/{len(reports)} checks passed")
    return "\n".join(lines) + "\n"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, default=str) + "\n"


# ---------------------------------------------------------------------------
# argument handling


def _common(parser: argparse.ArgumentParser, top: bool = False):
    kw = {} if top else {"default": argparse.SUPPRESS}
    parser.add_argument("--json", action="store_true", help="machine-readable output", **kw)
    parser.add_argument("--max-order", type=int, metavar="CAP",
                        help=f"enumeration and set-analysis cap (at most {HARD_CEILING})", **kw)
    parser.add_argument("--defs", metavar="FILE", help="group definition file ('-' for stdin)", **kw)
    parser.add_argument("--out", metavar="FILE", help="write the report to FILE", **kw)
    parser.add_argument("--timing", action="store_true", help="include per-check timings", **kw)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="engelkit", description="Engel elements and radicals of concrete groups.")
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("engel", help="left/right and bounded Engel elements")
    p.add_argument("name")
    p = sub.add_parser("series", help="central series, Fitting, Baer and rho subgroups")
    p.add_argument("name")
    p = sub.add_parser("verify", help="run harness checks on a group or the catalog")
    p.add_argument("which", choices=("baer", "heineken", "rho", "all"))
    p.add_argument("target", nargs="?", default="catalog")
    p = sub.add_parser("verify-example", help="verify the metabelian example group")
    p.add_argument("params", nargs="*",
                   help="e.g. primes=[3,5,7] exps=[2,3,4] N=3 (default parameters if empty)")
    p = sub.add_parser("catalog", help="print the built-in catalog as definitions")
    for name in ("engel", "series", "verify", "verify-example", "catalog"):
        _common(sub.choices[name])
    return parser


def _caps(max_order: int | None) -> dict:
    if max_order is None:
        return {"enumeration_cap": DEFAULT_ENUMERATION_CAP, "analysis_cap": DEFAULT_ANALYSIS_CAP}
    if max_order < 1:
        raise InputError("--max-order must be positive")
    cap = min(max_order, HARD_CEILING)
    return {"enumeration_cap": cap, "analysis_cap": cap}


def _lookup(groups: dict[str, Group], name: str) -> Group:
    try:
        return groups[name]
    except KeyError:
        known = ", ".join(groups)
        raise InputError(f"unknown group {name!r}; known groups: {known}") from None


def _execute(args, definitions: str, source: str) -> tuple[int, str]:
    caps = _caps(args.max_order)
    if args.command == "catalog":
        return EXIT_OK, definitions_text(catalog())

    if args.command == "verify-example":
        text = "group example = example " + " ".join(args.params) if args.params else ""
        try:
            defs = parse_definitions(text)
            params = build_groups(defs)["example"].params if defs else None
        except DefinitionError as exc:
            # column relative to the parameter text
            raise InputError(f"parameters, column {max(exc.column - 24, 1)}: {exc.message}") from None
        rep = check_example(params)
        name = rep.details.get("params", "example")
        return _checks_output(args, [checks_dict(name, "infinite", [rep], args.timing)], [rep])

    builtin = {G.name: G for G in catalog(**caps)}
    try:
        defs = parse_definitions(definitions, predefined=builtin)
        groups = build_groups(defs, predefined=builtin, **caps)
    except DefinitionError as exc:
        raise InputError(f"{source}:{exc.line}:{exc.column}: {exc.message}") from None

    if args.command == "engel":
        rep = engel_report(_lookup(groups, args.name))
        return EXIT_OK, _dump(rep) if args.json else _text_engel(rep)
    if args.command == "series":
        rep = series_dict(_lookup(groups, args.name))
        return EXIT_OK, _dump(rep) if args.json else _text_series(rep)

    # verify
    targets = list(builtin.values()) if args.target == "catalog" else [_lookup(groups, args.target)]
    blocks, reports = [], []
    for G in targets:
        if isinstance(G, ExampleGroup) and args.which == "all":
            rs = [check_example(G.params)]
        else:
            rs = run_checks(args.which, [G])
        reports += rs
        blocks.append(checks_dict(G.name, G.order if G.finite else "infinite", rs, args.timing))
    if args.target != "catalog":
        blocks = blocks[0]
    return _checks_output(args, blocks, reports)


def _checks_output(args, blocks, reports: list[CheckReport]) -> tuple[int, str]:
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED
    if args.json:
        return code, _dump(blocks)
    return code, _text_checks(reports, args.timing)


def run(argv: Sequence[str], definitions: str | None = None) -> RunResult:
    """Execute one command; ``definitions`` overrides ``--defs``."""
    try:
        args = build_parser().parse_args(list(argv))
        source = "<input>"
        if definitions is None:
            definitions = ""
            if args.defs:
                source = args.defs
                try:
                    if args.defs == "-":
                        definitions, source = sys.stdin.read(), "<stdin>"
                    else:
                        with open(args.defs, encoding="utf-8") as fh:
                            definitions = fh.read()
                except OSError as exc:
                    raise InputError(f"cannot read {args.defs}: {exc.strerror}") from None
        code, output = _execute(args, definitions, source)
    except InputError as exc:
        return RunResult(EXIT_INPUT, error=str(exc))
    except InfiniteGroupError as exc:
        return RunResult(EXIT_CAPACITY, error=str(exc))
    except CapacityError as exc:
        return RunResult(EXIT_CAPACITY, error=f"{exc}; raise --max-order (at most {HARD_CEILING})")
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(output)
        except OSError as exc:
            return RunResult(EXIT_INPUT, error=f"cannot write {args.out}: {exc.strerror}")
        output = ""
    return RunResult(code, output)


def main(argv: Sequence[str] | None = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    if res.output:
        sys.stdout.write(res.output)
    if res.error:
        print(f"engelkit: error: {res.error}", file=sys.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
