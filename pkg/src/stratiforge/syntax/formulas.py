"""FOL(=, ∈) formulas.

Grammar (ASCII first, Unicode aliases accepted)::

    iff     := imp ( '<->' | '↔' | '⇔' ) imp
    imp     := or ( '->' | '→' | '⇒' ) imp        right associative
    or      := and ( '|' | '∨' ) and ...
    and     := unary ( '&' | '∧' ) unary ...
    unary   := ('~' | '¬') unary
             | ('forall' | '∀' | 'exists' | '∃') var [('in' | '∈') var] unary
             | atom | '(' iff ')'
    atom    := var ('in' | '∈') var | var '=' var | var ('!=' | '≠') var
             | var ('notin' | '∉') var | 'pair' '(' var ',' var ',' var ')'

Bounded quantifiers are sugar: ``forall m in y φ`` is ``forall m (m in y -> φ)``
and ``exists m in y φ`` is ``exists m (m in y & φ)``. ``pair(x, a, b)`` is kept
as an atom; :func:`unfold_pair` gives its first-order definition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Union

from ..errors import ParseError


@dataclass(frozen=True)
class Mem:
    elem: str
    cls: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Pair:
    x: str
    a: str
    b: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Mem, Eq, Pair, Not, And, Or, Implies, Iff, Forall, Exists]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym><->|->|!=|[↔⇔→⇒∨∧¬~&|=∈∉≠∀∃(),])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
_ALIASES = {"↔": "<->", "⇔": "<->", "→": "->", "⇒": "->", "∨": "|", "∧": "&",
            "¬": "~", "∈": "in", "∉": "notin", "≠": "!=", "∀": "forall", "∃": "exists"}
_KEYWORDS = {"in", "notin", "forall", "exists", "pair"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            tok = m.group()
            out.append((_ALIASES.get(tok, tok), pos))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def fail(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.toks[self.i][1])

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise self.fail(f"expected {tok!r}, found {self.peek() or 'end of input'!r}")
        self.take()

    def var(self) -> str:
        tok = self.peek()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in _KEYWORDS:
            raise self.fail(f"expected a variable, found {tok or 'end of input'!r}")
        return self.take()

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek():
            raise self.fail(f"unexpected {self.peek()!r}")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.take()
            v = self.var()
            bound = None
            if self.peek() == "in":
                self.take()
                bound = self.var()
            body = self.unary()
            if tok == "forall":
                return Forall(v, body if bound is None else Implies(Mem(v, bound), body))
            return Exists(v, body if bound is None else And(Mem(v, bound), body))
        if tok == "(":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if tok == "pair":
            self.take()
            self.expect("(")
            x = self.var()
            self.expect(",")
            a = self.var()
            self.expect(",")
            b = self.var()
            self.expect(")")
            return Pair(x, a, b)
        left = self.var()
        op = self.take()
        if op == "in":
            return Mem(left, self.var())
        if op == "notin":
            return Not(Mem(left, self.var()))
        if op == "=":
            return Eq(left, self.var())
        if op == "!=":
            return Not(Eq(left, self.var()))
        self.i -= 1
        raise self.fail(f"expected a relation after {left!r}")


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def print_formula(f: Formula) -> str:
    if isinstance(f, Mem):
        return f"{f.elem} in {f.cls}"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Pair):
        return f"pair({f.x}, {f.a}, {f.b})"
    if isinstance(f, Not):
        return f"~{_wrap(f.body)}"
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"{q} {f.var} {_wrap(f.body)}"
    sym = {And: "&", Or: "|", Implies: "->", Iff: "<->"}[type(f)]
    return f"{_wrap(f.left)} {sym} {_wrap(f.right)}"


def _wrap(f: Formula) -> str:
    if isinstance(f, (Mem, Eq, Pair, Not, Forall, Exists)):
        return print_formula(f)
    return f"({print_formula(f)})"


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Mem):
        return {f.elem, f.cls}
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, Pair):
        return {f.x, f.a, f.b}
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def all_vars(f: Formula) -> list[str]:
    """Every variable name, bound or free, in first-occurrence order."""
    out: dict[str, None] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, Mem):
            out.update({g.elem: None, g.cls: None})
        elif isinstance(g, Eq):
            out.update({g.left: None, g.right: None})
        elif isinstance(g, Pair):
            out.update({g.x: None, g.a: None, g.b: None})
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (Forall, Exists)):
            out[g.var] = None
            walk(g.body)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(out)


_fresh = count()


def unfold_pair(f: Formula) -> Formula:
    """Replace every pair(x, a, b) by forall t (t in x <-> t = a | t = b)."""
    if isinstance(f, Pair):
        t = f"_t{next(_fresh)}"
        return Forall(t, Iff(Mem(t, f.x), Or(Eq(t, f.a), Eq(t, f.b))))
    if isinstance(f, (Mem, Eq)):
        return f
    if isinstance(f, Not):
        return Not(unfold_pair(f.body))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, unfold_pair(f.body))
    return type(f)(unfold_pair(f.left), unfold_pair(f.right))
