"""Definition tables and expansion of derived operators to primitives.

Prelude files hold one definition per line::

    [variant K [default]:] name(params) := term ;

Names may be qualified by system (``a.1``, ``b.pow1``). An unqualified name
resolves to the active system's qualified entry first, then to the shared
entry of that name.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from ..errors import ParseError, UnknownOperator, UnresolvedVariant
from .terms import (
    BigUnion, Comp, Compl, Empty, Named, PairSet, Preprod, Sheffer, Sing, Term, Var,
    children, free_vars, parse_term,
)

PRELUDE_ENV = "STRATIFORGE_PRELUDE"


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple[str, ...]
    body: Term
    variant: int = 1
    default: bool = False
    source: str = ""


@dataclass
class DefinitionTable:
    entries: dict[str, list[Definition]] = field(default_factory=dict)

    def add(self, d: Definition) -> None:
        variants = self.entries.setdefault(d.name, [])
        if any(v.variant == d.variant for v in variants):
            raise ValueError(f"duplicate variant {d.variant} for {d.name}")
        if variants and variants[0].params != d.params:
            raise ValueError(f"variants of {d.name} disagree on parameters")
        variants.append(d)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self) -> list[str]:
        return sorted(self.entries)

    def resolve(self, name: str, system: str) -> str | None:
        if re.match(r"^[ab]\.", name):
            return name if name in self.entries else None
        qualified = f"{system.lower()}.{name}"
        if qualified in self.entries:
            return qualified
        return name if name in self.entries else None

    def choose(self, name: str, variant_choice: Mapping[str, int]) -> Definition:
        variants = self.entries[name]
        short = name.split(".", 1)[1] if re.match(r"^[ab]\.", name) else None
        pick = variant_choice.get(name, variant_choice.get(short) if short else None)
        if pick is not None:
            for d in variants:
                if d.variant == pick:
                    return d
            raise UnresolvedVariant(f"{name} has no variant {pick}")
        if len(variants) == 1:
            return variants[0]
        for d in variants:
            if d.default:
                return d
        raise UnresolvedVariant(f"{name} has {len(variants)} variants and none was chosen")

    def variant_bearing(self) -> list[str]:
        return sorted(n for n, v in self.entries.items() if len(v) > 1)


_LINE = re.compile(
    r"""^\s*(?:variant\s+(?P<k>\d+)(?P<default>\s+default)?\s*:\s*)?
        (?P<name>[^\s(:]+)\s*(?:\((?P<params>[^)]*)\))?\s*:=\s*(?P<body>.*?)\s*;\s*$""",
    re.VERBOSE,
)


def parse_prelude(text: str) -> DefinitionTable:
    table = DefinitionTable()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("#") else ""
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise ParseError(f"line {lineno}: expected 'name(params) := term ;'", raw, 0)
        params = tuple(p.strip() for p in (m["params"] or "").split(",") if p.strip())
        try:
            body = parse_term(m["body"])
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e.msg}", raw, m.start("body") + e.pos) from None
        table.add(Definition(m["name"], params, body, int(m["k"] or 1),
                             bool(m["default"]), raw.strip()))
    return table


def load_prelude(path: str | os.PathLike | None = None) -> DefinitionTable:
    """Load the prelude from ``path``, $STRATIFORGE_PRELUDE, or the packaged copy."""
    path = path or os.environ.get(PRELUDE_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            return parse_prelude(fh.read())
    return parse_prelude(resources.files(__package__).joinpath("prelude.txt").read_text("utf-8"))


_default: DefinitionTable | None = None


def default_prelude() -> DefinitionTable:
    global _default
    if _default is None:
        _default = load_prelude()
    return _default


# System-specific rewrites of primitive constructors that the system derives.
_DERIVED_PRIMS = {Compl: "compl", PairSet: "pairset", Empty: "empty"}


class _Expander:
    def __init__(self, defs: DefinitionTable, variant_choice: Mapping[str, int],
                 system: str, opaque: Iterable[str]):
        self.defs = defs
        self.choice = dict(variant_choice)
        self.system = system.lower()
        self.opaque = set(opaque)
        self.memo: dict[tuple, Term] = {}
        self.keep: list[object] = []

    def opaque_name(self, raw: str, resolved: str | None) -> str | None:
        if raw in self.opaque:
            return raw
        if resolved is not None and resolved in self.opaque:
            return resolved
        return None

    def call(self, raw: str, args: tuple[Term, ...]) -> Term:
        resolved = self.defs.resolve(raw, self.system)
        hidden = self.opaque_name(raw, resolved)
        if hidden is not None:
            return Named(hidden, args) if args else Var(hidden)
        if resolved is None:
            raise UnknownOperator(raw)
        d = self.defs.choose(resolved, self.choice)
        if len(d.params) != len(args):
            raise UnknownOperator(f"{raw} expects {len(d.params)} arguments, got {len(args)}")
        key = (resolved, d.variant, tuple(id(a) for a in args))
        hit = self.memo.get(key)
        if hit is None:
            self.keep.append(args)
            hit = self.go(d.body, dict(zip(d.params, args)))
            self.memo[key] = hit
        return hit

    def go(self, t: Term, scope: dict[str, Term] | None) -> Term:
        """Expand ``t``; ``scope`` maps parameter names, or is None at top level."""
        if isinstance(t, Var):
            if scope is not None and t.name in scope:
                return scope[t.name]
            if scope is None and t.name in self.top_bound:
                return t
            resolved = self.defs.resolve(t.name, self.system)
            if resolved is not None and not self.defs.entries[resolved][0].params:
                return self.call(t.name, ())
            if self.opaque_name(t.name, resolved):
                return Var(t.name)
            if scope is None:
                return t
            raise UnknownOperator(f"free name {t.name!r} in a definition body")
        if isinstance(t, Named):
            args = tuple(self.go(a, scope) for a in t.args)
            return self.call(t.op, args)
        prim = _DERIVED_PRIMS.get(type(t))
        if prim is not None:
            name = f"{self.system}.{prim}"
            if name in self.defs and self.opaque_name(name, name) is None:
                return self.call(name, tuple(self.go(c, scope) for c in children(t)))
        if isinstance(t, (Sheffer, Comp, PairSet, Preprod)):
            return type(t)(self.go(t.left, scope), self.go(t.right, scope))
        if isinstance(t, (Sing, BigUnion, Compl)):
            return type(t)(self.go(t.arg, scope))
        return t

    top_bound: frozenset[str] = frozenset()


def expand(t: Term, defs: DefinitionTable | None = None,
           variant_choice: Mapping[str, int] | None = None, system: str = "A",
           bound: Iterable[str] = (), opaque: Iterable[str] = ()) -> Term:
    """Rewrite ``t`` to primitive constructors only.

    ``bound`` names stay variables even when a constant of that name exists.
    ``opaque`` names (resolved or raw) are never unfolded, anywhere: nullary
    ones become variables for the caller to bind, applied ones stay as
    ``Named`` nodes over expanded arguments for an evaluator hook.
    """
    ex = _Expander(defs or default_prelude(), variant_choice or {}, system, opaque)
    ex.top_bound = frozenset(bound)
    return ex.go(t, None)


def check_definition(defs: DefinitionTable, name: str, system: str,
                     variant_choice: Mapping[str, int] | None = None) -> set[str]:
    """Expand one entry applied to its own parameters; return the free variables."""
    d = defs.choose(name, variant_choice or {})
    head: Term = Named(name, tuple(Var(p) for p in d.params))
    if not d.params:
        head = Named(name)
    return free_vars(expand(head, defs, variant_choice, system, bound=d.params))


__all__ = [
    "Definition", "DefinitionTable", "parse_prelude", "load_prelude", "default_prelude",
    "expand", "check_definition", "PRELUDE_ENV",
]
