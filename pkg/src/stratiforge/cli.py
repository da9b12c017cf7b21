"""Command-line front end.

Subcommands: universe, eval, stratify, expand, verify, repl. Exit status is
0 on success, 1 when verification finds an unexpected refutation, 2 on usage,
parse or size errors and 3 when a term cannot be evaluated in the chosen frame.
Diagnostics go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .errors import ParseError, SchemaError, StratiforgeError, Unrepresentable
from .evaluate import eval_term
from .lemmas import (
    default_suite, load_expected, load_suite, parse_frame, run_suite, unexpected_refutations,
)
from .oracle import ORACLES, oracle_class
from .stratify import ConflictWitness, stratify_formula
from .syntax.formulas import parse_formula
from .syntax.prelude import default_prelude, expand
from .syntax.terms import free_vars, parse_term, print_shared
from .universe import Frame, build_universe, load_digraph_json, make_frame

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _diag(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit on its own
        raise UsageError(message)


def _add_universe_args(p: argparse.ArgumentParser, headroom: bool = True) -> None:
    p.add_argument("--atoms", type=int)
    p.add_argument("--depth", type=int)
    if headroom:
        p.add_argument("--headroom", type=int, default=0)
    p.add_argument("--digraph", type=Path, help="JSON membership table instead of atoms/depth")


def _frame(args) -> Frame:
    if args.digraph is not None:
        if args.atoms is not None or args.depth is not None:
            raise UsageError("give either --digraph or --atoms/--depth, not both")
        universe = load_digraph_json(args.digraph.read_text())
        return Frame(universe, universe.all, 0, str(args.digraph))
    if args.atoms is None or args.depth is None:
        raise UsageError("--atoms and --depth are required")
    return make_frame(args.atoms, args.depth, getattr(args, "headroom", 0))


def _choices(pairs: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in pairs:
        name, sep, k = item.partition("=")
        if not sep or not k.strip().isdigit():
            raise UsageError(f"variant choice must look like name=k, got {item!r}")
        out[name.strip()] = int(k)
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stratiforge", description="Finite workbench for stratified set algebra.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("universe", help="build a universe and print its size")
    _add_universe_args(p, headroom=False)
    p.add_argument("--list", action="store_true", help="also print every element")

    p = sub.add_parser("eval", help="evaluate a term in a frame")
    _add_universe_args(p)
    p.add_argument("term")
    p.add_argument("--let", action="append", default=[], metavar="NAME=TERM")
    p.add_argument("--variant", action="append", default=[], metavar="NAME=K")
    p.add_argument("--system", choices=["A", "B"], default="A")

    p = sub.add_parser("stratify", help="type-check a formula for stratification")
    p.add_argument("formula")

    p = sub.add_parser("expand", help="rewrite a term to primitives")
    p.add_argument("term")
    p.add_argument("--variant", action="append", default=[], metavar="NAME=K")
    p.add_argument("--system", choices=["A", "B"], default="A")

    p = sub.add_parser("verify", help="run the lemma harness")
    p.add_argument("--suite", type=Path)
    p.add_argument("--lemma", action="append", default=[])
    p.add_argument("--frames", action="append", default=[], metavar="A,D[,H]")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.add_argument("--expected", type=Path, help="report or {lemma: status} map of known verdicts")
    p.add_argument("--timings", action="store_true", help="record wall-clock millis in the report")

    p = sub.add_parser("repl", help="interactive evaluator")
    _add_universe_args(p)
    p.add_argument("--system", choices=["A", "B"], default="A")
    return ap


# --- subcommands -----------------------------------------------------------------

def cmd_universe(args, out: TextIO) -> int:
    if args.digraph is not None:
        universe = _frame(args).universe
    else:
        if args.atoms is None or args.depth is None:
            raise UsageError("--atoms and --depth are required")
        universe = build_universe(args.atoms, args.depth)
    print(f"size {len(universe)}", file=out)
    if args.list:
        for i, el in enumerate(universe.elements):
            print(f"{i}\t{el.kind.value}\trank {el.rank}\t{universe.show(i)}", file=out)
    return EXIT_OK


def evaluate_text(text: str, frame: Frame, env: dict[str, frozenset],
                  system: str = "A", choices: dict[str, int] | None = None) -> frozenset:
    t = expand(parse_term(text), default_prelude(), choices, system, bound=tuple(env))
    unbound = free_vars(t) - set(env)
    if unbound:
        raise UsageError(f"unbound name(s): {', '.join(sorted(unbound))}")
    return eval_term(t, frame, env)


def cmd_eval(args, out: TextIO) -> int:
    frame = _frame(args)
    choices = _choices(args.variant)
    env: dict[str, frozenset] = {}
    for item in args.let:
        name, sep, text = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--let expects name=term, got {item!r}")
        env[name.strip()] = evaluate_text(text, frame, env, args.system, choices)
    result = evaluate_text(args.term, frame, env, args.system, choices)
    print(frame.universe.show_class(result), file=out)
    return EXIT_OK


def stratify_text(text: str) -> str:
    res = stratify_formula(parse_formula(text))
    if isinstance(res, ConflictWitness):
        return "not stratified: " + res.describe()
    levels = ", ".join(f"{v}: {k}" for v, k in sorted(res.levels.items()))
    return "stratified: " + levels


def cmd_stratify(args, out: TextIO) -> int:
    print(stratify_text(args.formula), file=out)
    return EXIT_OK


def cmd_expand(args, out: TextIO) -> int:
    t = expand(parse_term(args.term), default_prelude(), _choices(args.variant), args.system)
    print(print_shared(t), file=out)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    registry = load_suite(args.suite.read_text()) if args.suite else default_suite()
    if args.lemma:
        known = {s.id for s in registry}
        missing = [i for i in args.lemma if i not in known]
        if missing:
            raise UsageError(f"unknown lemma id(s): {', '.join(missing)}")
        registry = [s for s in registry if s.id in set(args.lemma)]
    try:
        frames = [parse_frame(f) for f in args.frames] or None
    except ValueError as e:
        raise UsageError(str(e)) from None
    expected = load_expected(args.expected.read_text()) if args.expected else {}
    report = run_suite(registry, frames, args.seed, max(1, args.jobs))
    text = report.to_json(args.timings)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    for row in report.summary:
        via = f" via {row['variant']}" if row["variant"] else ""
        print(f"{row['lemma']}\t{row['status']}{via}", file=out)
    counts = report.counts()
    print("total " + ", ".join(f"{k} {v}" for k, v in counts.items()), file=out)
    bad = unexpected_refutations(report, expected)
    for lemma in bad:
        _diag("UnexpectedRefutation", lemma)
    return EXIT_REFUTED if bad else EXIT_OK


# --- repl ------------------------------------------------------------------------

class Repl:
    """Line-oriented session over one frame.

    ``let x = term`` binds a result, a bare term prints its value, and
    ``:stratify``, ``:expand``, ``:oracle``, ``:frame``, ``:env`` are meta commands.
    """

    def __init__(self, frame: Frame, system: str = "A"):
        self.frame = frame
        self.system = system
        self.env: dict[str, frozenset] = {}

    def show(self, c: frozenset) -> str:
        return self.frame.universe.show_class(c)

    def handle(self, line: str) -> str | None:
        line = line.strip()
        if not line or line.startswith("#"):
            return None
        if line.startswith(":"):
            cmd, _, rest = line[1:].partition(" ")
            return self._meta(cmd, rest.strip())
        if line.startswith("let "):
            name, sep, text = line[4:].partition("=")
            name = name.strip()
            if not sep or not name.isidentifier():
                raise UsageError("let expects: let name = term")
            self.env[name] = evaluate_text(text, self.frame, self.env, self.system)
            return f"{name} = {self.show(self.env[name])}"
        return self.show(evaluate_text(line, self.frame, self.env, self.system))

    def _meta(self, cmd: str, rest: str) -> str:
        if cmd == "stratify":
            return stratify_text(rest)
        if cmd == "expand":
            t = expand(parse_term(rest), default_prelude(), None, self.system, bound=tuple(self.env))
            return print_shared(t)
        if cmd == "oracle":
            parts = shlex.split(rest)
            if not parts or parts[0] not in ORACLES:
                raise UsageError(f"oracle kinds: {', '.join(sorted(ORACLES))}")
            params = [int(p) if p.lstrip("-").isdigit() else self._bound(p) for p in parts[1:]]
            return self.show(oracle_class(parts[0], self.frame, *params))
        if cmd == "frame":
            try:
                a, d, h = parse_frame(rest)
            except ValueError as e:
                raise UsageError(str(e)) from None
            self.frame = make_frame(a, d, h)
            self.env.clear()
            return f"frame {self.frame.key()}: |U| = {len(self.frame.universe)}, |W| = {len(self.frame.W)}"
        if cmd == "env":
            return "\n".join(f"{k} = {self.show(v)}" for k, v in sorted(self.env.items())) or "(empty)"
        if cmd == "help":
            return "let x = term | term | :stratify F | :expand T | :oracle kind args | :frame a,d,h | :env | :quit"
        raise UsageError(f"unknown command :{cmd}")

    def _bound(self, name: str) -> frozenset:
        if name not in self.env:
            raise UsageError(f"unbound name {name}")
        return self.env[name]

    def run(self, stream: TextIO, out: TextIO, prompt: str = "") -> None:
        while True:
            if prompt:
                print(prompt, end="", file=out, flush=True)
            line = stream.readline()
            if not line or line.strip() in (":quit", ":q"):
                return
            try:
                reply = self.handle(line)
            except ParseError as e:
                reply = f"error: {e.msg} at position {e.pos}"
            except (UsageError, StratiforgeError, ValueError) as e:
                reply = f"error: {e}"
            if reply is not None:
                print(reply, file=out)


def cmd_repl(args, out: TextIO) -> int:
    frame = _frame(args) if (args.atoms is not None or args.digraph) else make_frame(2, 2, 1)
    Repl(frame, args.system).run(sys.stdin, out, "> " if sys.stdin.isatty() else "")
    return EXIT_OK


COMMANDS = {"universe": cmd_universe, "eval": cmd_eval, "stratify": cmd_stratify,
            "expand": cmd_expand, "verify": cmd_verify, "repl": cmd_repl}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.cmd](args, out)
    except UsageError as e:
        _diag("UsageError", str(e))
    except ParseError as e:
        _diag("ParseError", f"{e.msg} at position {e.pos}")
    except SchemaError as e:
        _diag(type(e).__name__, str(e))
    except Unrepresentable as e:
        _diag(type(e).__name__, str(e))
        return EXIT_EVAL
    except StratiforgeError as e:
        _diag(type(e).__name__, str(e))
    except (OSError, ValueError) as e:
        _diag(type(e).__name__, str(e))
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
