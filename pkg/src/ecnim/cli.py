"""Command line front door.

One subcommand per verb: classify, eval, moves, best, grundy, table,
verify, serve.  Human-readable output by default, ``--json`` for machines.
Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import solver
from .core import Move, Ruleset, RulesetError, apply_move, legal_moves
from .notation import format_position, format_ruleset, parse_position, parse_ruleset
from .reductions import best_move, classify, evaluate, resolution_doc
from .solver import BudgetError, CapacityError, Outcome
from .verify import export_report, verify_all, verify_predicate, verify_resolution

CACHE_ENV = "ECNIM_CACHE_DIR"
_CACHE_VERSION = 1


def _add_common(sub: argparse.ArgumentParser, *, pos: bool = True) -> None:
    sub.add_argument("--ruleset", required=True, help='e.g. "ECN(6_{1,2},3)"')
    if pos:
        sub.add_argument("--pos", required=True, help='e.g. "0,4,4,1,3,4,4"')
    sub.add_argument("--json", action="store_true", dest="as_json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecnim",
        description="solve, classify and verify circular nim variants",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="how a ruleset gets decided")
    _add_common(p, pos=False)

    p = subs.add_parser("eval", help="outcome of a position")
    _add_common(p)
    p.add_argument("--max-entries", type=int, default=solver.DEFAULT_MAX_ENTRIES)

    p = subs.add_parser("moves", help="list legal moves")
    _add_common(p)
    p.add_argument("--limit", type=int, default=0, help="0 means no limit")

    p = subs.add_parser("best", help="a winning move, when one exists")
    _add_common(p)
    p.add_argument("--max-entries", type=int, default=solver.DEFAULT_MAX_ENTRIES)

    p = subs.add_parser("grundy", help="Grundy value of a position")
    _add_common(p)
    p.add_argument("--max-entries", type=int, default=solver.DEFAULT_MAX_ENTRIES)

    p = subs.add_parser("table", help="build and export a full table")
    _add_common(p, pos=False)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--kind", choices=("outcome", "grundy"), default="outcome")
    p.add_argument("--format", choices=("bin", "csv"), default="csv")
    p.add_argument("--out", type=Path)
    p.add_argument("--max-entries", type=int, default=solver.DEFAULT_MAX_ENTRIES)

    p = subs.add_parser("verify", help="sweep claims against solved tables")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--ruleset")
    group.add_argument("--predicate", help="closed-form id, e.g. ECN6123")
    group.add_argument("--all", action="store_true")
    p.add_argument("--bound", type=int)
    p.add_argument("--quick", action="store_true", help="shrink bounds (with --all)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", type=Path)

    p = subs.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _emit(doc: dict, human: str, as_json: bool) -> None:
    print(json.dumps(doc, indent=2) if as_json else human, file=sys.stdout)


def _move_doc(move: Move, pos) -> dict:
    return {
        "removals": {str(p): a for p, a in move.removals},
        "support": sorted(move.support),
        "result": format_position(apply_move(pos, move)),
    }


def _move_text(move: Move, pos) -> str:
    body = ", ".join(f"{a} from pile {p}" for p, a in move.removals)
    return f"take {body} -> {format_position(apply_move(pos, move))}"


def _method_text(method: tuple[str, ...]) -> str:
    # budget-bounded search is brute force; say so
    return " -> ".join("oracle(search)" if t == "search" else t for t in method)


def _cmd_classify(args) -> int:
    rs = parse_ruleset(args.ruleset)
    res = classify(rs)
    doc = {"ruleset": format_ruleset(rs), **resolution_doc(res)}
    _emit(doc, f"{format_ruleset(rs)}: {json.dumps(resolution_doc(res))}", args.as_json)
    return 0


def _cmd_eval(args) -> int:
    rs = parse_ruleset(args.ruleset)
    pos = parse_position(args.pos)
    ev = evaluate(rs, pos, max_entries=args.max_entries)
    doc = {
        "ruleset": format_ruleset(rs),
        "position": format_position(pos),
        "outcome": ev.outcome.value,
        "method": list(ev.method),
        "witness": None if ev.witness is None else
        {"reflected": ev.witness.reflected, "start": ev.witness.start},
        "grundy": ev.grundy,
    }
    human = f"{ev.outcome.value}  (method: {_method_text(ev.method)}"
    if ev.witness is not None:
        human += f"; image: start {ev.witness.start}" + (
            ", reflected" if ev.witness.reflected else ""
        )
    if ev.grundy is not None:
        human += f"; grundy: {ev.grundy}"
    _emit(doc, human + ")", args.as_json)
    return 0


def _cmd_moves(args) -> int:
    rs = parse_ruleset(args.ruleset)
    pos = parse_position(args.pos)
    moves = legal_moves(rs, pos)
    total = len(moves)
    if args.limit:
        moves = moves[: args.limit]
    if args.as_json:
        _emit(
            {"total": total, "moves": [_move_doc(mv, pos) for mv in moves]},
            "", True,
        )
    else:
        for mv in moves:
            print(_move_text(mv, pos))
        if len(moves) < total:
            print(f"... {total - len(moves)} more")
    return 0


def _cmd_best(args) -> int:
    rs = parse_ruleset(args.ruleset)
    pos = parse_position(args.pos)
    mv = best_move(rs, pos, max_entries=args.max_entries)
    if mv is None:
        _emit({"outcome": "P", "move": None},
              "position is P (no winning move)", args.as_json)
    else:
        _emit({"outcome": "N", "move": _move_doc(mv, pos)},
              f"winning move: {_move_text(mv, pos)}", args.as_json)
    return 0


def _cmd_grundy(args) -> int:
    rs = parse_ruleset(args.ruleset)
    pos = parse_position(args.pos)
    ev = evaluate(rs, pos, max_entries=args.max_entries)
    value = ev.grundy
    if value is None:
        entries = 1
        for h in pos:
            entries *= h + 1
        if entries > args.max_entries:
            raise CapacityError(entries, args.max_entries)
        value = solver.grundy(rs, pos)
    _emit({"ruleset": format_ruleset(rs), "position": format_position(pos),
           "grundy": value}, str(value), args.as_json)
    return 0


def _cache_path(rs: Ruleset, bound: int, kind: str) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    slug = re.sub(r"[^A-Za-z0-9]+", "_", format_ruleset(rs)).strip("_")
    return Path(root) / f"{slug}-b{bound}-{kind}-v{_CACHE_VERSION}.tbl"


def _build_table(rs: Ruleset, bound: int, kind: str, max_entries: int):
    cache = _cache_path(rs, bound, kind)
    if cache is not None and cache.exists():
        table = solver.load_table(cache.read_bytes())
        if table.ruleset == rs and table.bound == bound:
            return table
    builder = (
        solver.build_outcome_table if kind == "outcome" else solver.build_grundy_table
    )
    table = builder(rs, bound, max_entries=max_entries)
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        cache.write_bytes(solver.dump_table(table))
    return table


def _cmd_table(args) -> int:
    rs = parse_ruleset(args.ruleset)
    table = _build_table(rs, args.bound, args.kind, args.max_entries)
    if args.format == "bin":
        if args.out is None:
            raise RulesetError("binary output needs --out PATH")
        args.out.write_bytes(solver.dump_table(table))
        print(f"wrote {args.out}")
    else:
        doc = solver.table_to_csv(table)
        if args.out is None:
            sys.stdout.write(doc)
        else:
            args.out.write_text(doc)
            print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    if args.all:
        reports = verify_all(quick=args.quick)
    elif args.predicate:
        reports = (verify_predicate(args.predicate, bound=args.bound),)
    else:
        rs = parse_ruleset(args.ruleset)
        reports = (verify_resolution(rs, bound=args.bound),)
    if args.format:
        doc = export_report(reports, args.format)
        if args.out is None:
            sys.stdout.write(doc)
        else:
            args.out.write_text(doc)
            print(f"wrote {args.out}")
    else:
        for r in reports:
            line = (
                f"{r.status:10} {r.subject:28} {r.ruleset:20} B={r.bound} "
                f"{r.positions_checked} positions  {r.wall_time:.2f}s"
            )
            if r.note:
                line += f"  [{r.note}]"
            print(line)
        fails = sum(r.status == "FAIL" for r in reports)
        print(f"{len(reports)} reports, {fails} failures")
    return 1 if any(r.status == "FAIL" for r in reports) else 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_HANDLERS = {
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "moves": _cmd_moves,
    "best": _cmd_best,
    "grundy": _cmd_grundy,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValueError as exc:
        # RulesetError, PositionError, IllegalMoveError, PredicateError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, BudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
