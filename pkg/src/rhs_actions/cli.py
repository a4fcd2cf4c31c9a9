"""Command-line front end: ``rhs-actions <command> <spec> [options]``."""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from itertools import product
from typing import Any, Callable

import numpy as np

from . import __version__
from .catalog import enumerate_catalog
from .cohomology import h2_trivial
from .dsl import elaborate, normalize, parse_group_spec
from .errors import BudgetError, InputError, RHSError
from .structure import period
from .theorems import classify, theorem_A_search, theorem_B_verdict

SCHEMA_VERSION = 1
EXIT_OK, EXIT_OBSTRUCTION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True, default=_plain)


def render_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {canonical_json(value)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for item in obj:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {canonical_json(item)}")
        return "\n".join(lines)
    return f"{pad}{canonical_json(obj)}"


def _document(args, spec: str, normalized: str | None, report: Any, errors: list) -> dict:
    stamp = None if args.deterministic else _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "input": spec,
        "normalized": normalized,
        "report": report,
        "errors": errors,
        "timestamp": stamp,
    }


def _cocycle_record(coords, f) -> dict:
    return {"coordinates": [int(c) for c in coords], "values": f.values.tolist()}


# ---------------------------------------------------------------- commands


def _cmd_classify(args, G):
    rep = classify(G, m_bound=args.m_bound, theorem_b_bound=args.bound)
    return rep.as_dict(), rep.errors, rep.data["verdict"]["tag"]


def _cmd_period(args, G):
    return period(G).as_dict(), [], None


def _cmd_h2(args, G):
    H = h2_trivial(G, args.mod, enumerate=args.enumerate)
    report = {"m": args.mod, "factors": H.factors, "order": H.order,
              "generators": [f.values.tolist() for f in H.representatives]}
    if args.enumerate:
        coords = product(*(range(d) for d in H.factors))
        report["classes"] = [_cocycle_record(c, f) for c, f in zip(coords, H.classes)]
    return report, [], None


def _cmd_extensions(args, G):
    ws = theorem_A_search(G, args.mod)
    return {"m": args.mod, "witnesses": [w.as_dict() for w in ws]}, [], None


def _cmd_theorem_b(args, G):
    v = theorem_B_verdict(G, args.bound)
    return v.as_dict(), [], v.tag


COMMANDS: dict[str, Callable] = {
    "classify": _cmd_classify,
    "period": _cmd_period,
    "h2": _cmd_h2,
    "extensions": _cmd_extensions,
    "theoremB": _cmd_theorem_b,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="plain-text rendering of the same report")
    common.set_defaults(text=False)
    common.add_argument("--deterministic", action="store_true", help="omit the timestamp")
    common.add_argument("--fail-on-obstruction", action="store_true", help="exit 1 on a cannot_act verdict")
    common.add_argument("--bound", type=int, default=None, help="order bound for the Theorem B search")
    common.add_argument("--m-bound", type=int, default=None, help="largest kernel order tried for Theorem A")

    parser = argparse.ArgumentParser(prog="rhs-actions", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("classify", "period", "theoremB"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
    for name in ("h2", "extensions"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
        p.add_argument("--mod", type=int, required=True)
        if name == "h2":
            p.add_argument("--enumerate", action="store_true")
    p = sub.add_parser("catalog", parents=[common])
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--type", choices=["A", "B", "C", "hopf"], default=None)
    return parser


def _emit(args, payload: Any, out) -> None:
    out.write((render_text(payload) if args.text else canonical_json(payload)) + "\n")


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for opt in ("bound", "m_bound", "mod", "max_order"):
        value = getattr(args, opt, None)
        if value is not None and value < 1:
            err.write(f"error: --{opt.replace('_', '-')} must be positive\n")
            return EXIT_INPUT
    try:
        if args.command == "catalog":
            lines = [e.as_dict() for e in enumerate_catalog(args.max_order, args.type)]
            for entry in lines:
                _emit(args, entry, out)
            return EXIT_OK
        ast = parse_group_spec(args.spec)
        normalized = normalize(ast)
        G = elaborate(ast)
        report, errors, tag = COMMANDS[args.command](args, G)
        doc = _document(args, args.spec, normalized, report, errors)
        text = render_text(doc) if args.text else canonical_json(doc)
    except BudgetError as exc:
        err.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (InputError, RHSError, ValueError) as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    out.write(text + "\n")
    if args.fail_on_obstruction and tag == "cannot_act":
        return EXIT_OBSTRUCTION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    return run(argv)
