"""Command-line interface: ``superdd <command> ...``.

Exit status is 0 when every check passes, 1 on a verification or bound
failure and 2 on usage or input errors.  ``-`` stands for standard input or
output wherever a file is expected.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .compose import CompositionError, parse_recipe, wilson_compose
from .core import format_design, parse_design
from .devel import DSLError, develop, parse_catalog
from .trades import defining_bound, find_cycles, hits_all_trades, is_defining_set, trade_graph
from .verify import verify_design

KINDS = ("DD", "DGDD", "GDD", "TD", "PBD", "BIBD")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _design(path: str):
    try:
        return parse_design(_read(path))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _budget(args) -> dict:
    return {"budget_nodes": args.budget_nodes, "budget_seconds": args.budget_seconds}


def _catalog():
    from .catalog import builtin
    return builtin()


# ---------------------------------------------------------------------------
# commands

def cmd_develop(args) -> int:
    try:
        specs = parse_catalog(_read(args.spec))
    except DSLError as exc:
        raise UsageError(str(exc)) from None
    if not specs:
        raise UsageError("no construction in input")
    cat = _catalog()
    out = []
    for s in specs:
        try:
            out.append(format_design(develop(s, cat.design)))
        except (DSLError, LookupError) as exc:
            raise UsageError(f"{s.name}: {exc}") from None
    _write(args.output, "\n".join(out))
    return 0


def cmd_verify(args) -> int:
    d = _design(args.design)
    if args.kind:
        ordered = d.ordered if args.kind in ("DD", "DGDD") else False
        d = type(d)(d.space, d.blocks, d.groups, d.lam, args.kind, ordered, d.name)
    try:
        report = verify_design(d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


def cmd_bound(args) -> int:
    d = _design(args.design)
    cert = defining_bound(d, args.mode, **_budget(args))
    sys.stdout.write(cert.render(None if d.space.is_plain() else d.space.labels))
    sys.stdout.write(f"FRACTION {cert.bound}/{cert.blocks}\n")
    if args.min is not None and cert.fraction < Fraction(args.min):
        return 1
    return 0


def cmd_trades(args) -> int:
    d = _design(args.design)
    g = trade_graph(d)
    lines = [f"TRADES {len(g.edges)} BLOCKS {d.b}"]
    if args.cycles:
        lines += ["CYCLE " + " ".join(map(str, c)) for c in find_cycles(g)]
    else:
        for i, j in g.edges:
            c1, c2 = g.witness[(i, j)]
            lines.append(f"EDGE {i} {j} : ({','.join(map(str, c1))}) ({','.join(map(str, c2))})")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_defining(args) -> int:
    d = _design(args.design)
    try:
        S = [int(x) for x in args.blocks.split(",") if x.strip()]
        hits = hits_all_trades(d, S)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"--blocks: {exc}") from None
    sys.stdout.write(f"HITS_ALL_TRADES {'yes' if hits else 'no'}\n")
    ok = hits
    if args.complete:
        res = is_defining_set(d, S, **_budget(args))
        sys.stdout.write(res.render())
        ok = ok and res.verdict == "1"
    return 0 if ok else 1


def cmd_compose(args) -> int:
    text = _read(args.recipe)
    base = Path(args.recipe).parent if args.recipe != "-" else Path.cwd()
    try:
        recipe = parse_recipe(text, _catalog().design, base)
        d = wilson_compose(recipe)
    except CompositionError as exc:
        if exc.report is not None:
            sys.stdout.write(exc.report.render())
            print(f"superdd: {exc}", file=sys.stderr)
            return 1
        raise UsageError(str(exc)) from None
    _write(args.output, format_design(d))
    return 0


def cmd_catalog(args) -> int:
    from .catalog import audit_all
    cat = _catalog()
    if args.action == "list":
        lines = []
        for name, e in cat.entries.items():
            claim = f"{e.fnum}/{e.fden}" if e.fnum is not None else "-"
            source = "recipe" if e.recipe else "spec"
            lines.append(f"{name}\tblocks={e.blocks}\tclaim={claim}\t{source}")
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    if args.action == "show":
        if not args.name:
            raise UsageError("catalog show needs an entry name")
        try:
            entry = cat.lookup(int(args.name) if args.name.isdigit() else args.name)
        except LookupError as exc:
            raise UsageError(str(exc)) from None
        _write(args.output, format_design(cat.design(entry.name)))
        return 0
    names = [args.name] if args.name else None
    try:
        rows = audit_all(None, bounds=not args.no_bounds, names=names, workers=args.threads,
                         **_budget(args))
    except LookupError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write("".join(r.render() + "\n" for r in rows))
    bad = sum(not r.ok for r in rows)
    sys.stdout.write(f"SUMMARY {len(rows) - bad} pass {bad} fail\n")
    return 0 if bad == 0 else 1


def cmd_spectrum(args) -> int:
    from .catalog.spectrum import PlanError, spectrum_plan
    try:
        plan = spectrum_plan(args.v, ceiling=args.ceiling)
    except PlanError as exc:
        raise UsageError(str(exc)) from None
    if not args.build or args.output not in (None, "-"):
        sys.stdout.write(plan.render())
    if not args.build:
        return 0
    try:
        d = plan.build()
    except PlanError as exc:
        print(f"superdd: {exc}", file=sys.stderr)
        return 1
    report = verify_design(d)
    if not report.passed:
        sys.stdout.write(report.render())
        return 1
    _write(args.output, format_design(d))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=None,
                        help="node budget for exact vertex cover and completion search")
    common.add_argument("--budget-seconds", type=float, default=None,
                        help="time budget in seconds (makes results timing dependent)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for catalog audit")

    p = argparse.ArgumentParser(prog="superdd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"superdd {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("develop", parents=[common], help="develop a construction spec")
    s.add_argument("spec")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_develop)

    s = sub.add_parser("verify", parents=[common], help="verify a design file")
    s.add_argument("design")
    s.add_argument("--kind", choices=KINDS, help="check as this kind instead of the declared one")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bound", parents=[common], help="defining-set lower bound certificate")
    s.add_argument("design")
    s.add_argument("--mode", choices=("matching", "exactvc"), default="exactvc")
    s.add_argument("--min", help="exit 1 when the bound fraction is below this (e.g. 1/2)")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("trades", parents=[common], help="list volume-two trades")
    s.add_argument("design")
    s.add_argument("--cycles", action="store_true", help="print cyclic components only")
    s.set_defaults(func=cmd_trades)

    s = sub.add_parser("defining", parents=[common], help="test a candidate defining set")
    s.add_argument("design")
    s.add_argument("--blocks", required=True, help="comma separated block indices")
    s.add_argument("--complete", action="store_true", help="also count completions")
    s.set_defaults(func=cmd_defining)

    s = sub.add_parser("compose", parents=[common], help="run a composition recipe")
    s.add_argument("recipe")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("catalog", parents=[common], help="built-in catalog")
    s.add_argument("action", choices=("audit", "list", "show"))
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output")
    s.add_argument("--no-bounds", action="store_true", help="audit without bound certificates")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("spectrum", parents=[common], help="construction plan for v")
    s.add_argument("v", type=int)
    s.add_argument("--build", action="store_true", help="run an executable plan")
    s.add_argument("--ceiling", type=int, default=1000)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.budget_nodes is None:
        args.budget_nodes = 10**8 if args.command == "defining" else 20_000
    if args.command == "defining" and args.budget_seconds is None:
        args.budget_seconds = 120.0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"superdd: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
