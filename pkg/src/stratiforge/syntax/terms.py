"""Term AST, parser and printer for the operator language.

Concrete syntax (Unicode forms in brackets are accepted aliases)::

    postfix   t'  [t′]   t^1   t^pair   t^k   t^-1
    prefix    ∪t  (big union)
    infix     :  !  *  ×[><]  |  ∖[\\]  ∩[/\\]  ∪[\\/]
    primary   name  name(args)  a.1  0..9  1*  V  ∅[{}]  {∩}[{cap}]  CapB
              [=]  [∩][[cap]]  {t}  {t, u}  sheffer(t, u)  (t)

All infix operators share one precedence level and associate left; mixing
two different infix operators without parentheses is a syntax error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class VTerm:
    pass


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Sheffer:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sing:
    arg: "Term"


@dataclass(frozen=True)
class BigUnion:
    arg: "Term"


@dataclass(frozen=True)
class Comp:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class CapA:
    pass


@dataclass(frozen=True)
class Compl:
    arg: "Term"


@dataclass(frozen=True)
class PairSet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Frege1Star:
    pass


@dataclass(frozen=True)
class Preprod:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class CapB:
    pass


@dataclass(frozen=True)
class Named:
    op: str
    args: tuple["Term", ...] = ()


Term = Union[
    Var, VTerm, Empty, Sheffer, Sing, BigUnion, Comp, CapA, Compl, PairSet,
    Frege1Star, Preprod, CapB, Named,
]

V = VTerm()
PRIMITIVES = (VTerm, Empty, Sheffer, Sing, BigUnion, Comp, CapA, Compl, PairSet,
              Frege1Star, Preprod, CapB, Var)

# infix symbol -> Named op (or primitive class); first spelling is canonical
INFIX = {
    ":": Comp,
    "!": Preprod,
    "*": "uprod",
    "×": "cart",
    "|": "relprod",
    "∖": "diff",
    "∩": "inter",
    "∪": "union",
}
INFIX_ALIASES = {"><": "×", "\\/": "∪", "/\\": "∩", "\\": "∖"}
POSTFIX = {"^1": "pow1", "^pair": "pairpow", "^k": "kimg", "^-1": "conv"}
_INFIX_BY_OP = {v: k for k, v in INFIX.items() if isinstance(v, str)}
_POSTFIX_BY_OP = {v: k for k, v in POSTFIX.items()}
CONSTANTS = {"[=]": "[=]", "[∩]": "[∩]", "[cap]": "[∩]"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<frege1>1\*(?![\w(\[{]))
  | (?P<post>\^pair|\^-1|\^1|\^k)
  | (?P<const>\[=\]|\[∩\]|\[cap\]|\{∩\}|\{cap\}|\{\})
  | (?P<qual>[ab]\.[0-9]+)
  | (?P<num>[0-9])
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?)
  | (?P<op>><|\\/|/\\|\\|[:!*×|∖∩∪])
  | (?P<prime>['′])
  | (?P<punct>[(){},])
  | (?P<empty>∅)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", self.text, pos)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> Term:
        t = self.infix()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return t

    def infix(self) -> Term:
        left = self.postfix()
        first = None
        while self.peek()[0] == "op":
            _, sym, pos = self.take()
            sym = INFIX_ALIASES.get(sym, sym)
            if first is None:
                first = sym
            elif sym != first:
                raise ParseError(f"mix of {first!r} and {sym!r} needs parentheses", self.text, pos)
            right = self.postfix()
            op = INFIX[sym]
            left = op(left, right) if not isinstance(op, str) else Named(op, (left, right))
        return left

    def postfix(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "op" and val == "∪":
            self.take()
            t: Term = BigUnion(self.postfix())
        else:
            t = self.primary()
        while True:
            kind, val, _ = self.peek()
            if kind == "prime":
                self.take()
                t = Compl(t)
            elif kind == "post":
                self.take()
                t = Named(POSTFIX[val], (t,))
            else:
                return t

    def args(self) -> list[Term]:
        self.expect("(")
        if self.peek()[1] == ")":
            self.take()
            return []
        out = [self.infix()]
        while self.peek()[1] == ",":
            self.take()
            out.append(self.infix())
        self.expect(")")
        return out

    def primary(self) -> Term:
        kind, val, pos = self.take()
        if kind == "frege1":
            return Frege1Star()
        if kind == "empty":
            return Empty()
        if kind == "const":
            if val in ("{∩}", "{cap}"):
                return CapA()
            if val == "{}":
                return Empty()
            return Named(CONSTANTS[val])
        if kind in ("num", "qual"):
            return Named(val)
        if kind == "name":
            if val == "V":
                return V
            if val == "CapB":
                return CapB()
            if self.peek()[1] == "(":
                args = self.args()
                if val == "sheffer":
                    if len(args) != 2:
                        raise ParseError("sheffer takes two arguments", self.text, pos)
                    return Sheffer(*args)
                return Named(val, tuple(args))
            return Var(val)
        if val == "(":
            t = self.infix()
            self.expect(")")
            return t
        if val == "{":
            first = self.infix()
            if self.peek()[1] == ",":
                self.take()
                second = self.infix()
                self.expect("}")
                return PairSet(first, second)
            self.expect("}")
            return Sing(first)
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_term(text: str) -> Term:
    return _Parser(text).parse()


def _infix_parts(t: Term) -> tuple[str, Term, Term] | None:
    if isinstance(t, Comp):
        return ":", t.left, t.right
    if isinstance(t, Preprod):
        return "!", t.left, t.right
    if isinstance(t, Named) and t.op in _INFIX_BY_OP and len(t.args) == 2:
        return _INFIX_BY_OP[t.op], t.args[0], t.args[1]
    return None


def print_term(t: Term) -> str:
    parts = _infix_parts(t)
    if parts is not None:
        sym, left, right = parts
        lp = _infix_parts(left)
        ls = print_term(left) if lp is None or lp[0] == sym else f"({print_term(left)})"
        rs = print_term(right) if _infix_parts(right) is None else f"({print_term(right)})"
        return f"{ls} {sym} {rs}"
    return _print_tight(t)


def _print_operand(t: Term) -> str:
    if isinstance(t, BigUnion):
        return f"({_print_tight(t)})"
    return _print_tight(t)


def _print_tight(t: Term) -> str:
    if _infix_parts(t) is not None:
        return f"({print_term(t)})"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, VTerm):
        return "V"
    if isinstance(t, Empty):
        return "∅"
    if isinstance(t, CapA):
        return "{∩}"
    if isinstance(t, CapB):
        return "CapB"
    if isinstance(t, Frege1Star):
        return "1*"
    if isinstance(t, Sheffer):
        return f"sheffer({print_term(t.left)}, {print_term(t.right)})"
    if isinstance(t, Sing):
        return "{" + print_term(t.arg) + "}"
    if isinstance(t, PairSet):
        return "{" + print_term(t.left) + ", " + print_term(t.right) + "}"
    if isinstance(t, BigUnion):
        return f"∪({print_term(t.arg)})"
    if isinstance(t, Compl):
        return _print_operand(t.arg) + "'"
    if isinstance(t, Named):
        if t.op in _POSTFIX_BY_OP and len(t.args) == 1:
            return _print_operand(t.args[0]) + _POSTFIX_BY_OP[t.op]
        if not t.args:
            if t.op in ("[=]", "[∩]") or re.fullmatch(r"[0-9]|[ab]\.[0-9]+", t.op):
                return t.op
            return f"{t.op}()"
        return f"{t.op}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def _rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, (Sheffer, Comp, PairSet, Preprod)):
        return type(t)(*kids)
    if isinstance(t, (Sing, BigUnion, Compl)):
        return type(t)(kids[0])
    if isinstance(t, Named):
        return Named(t.op, kids)
    return t


def print_shared(t: Term, prefix: str = "$") -> str:
    """Print a term DAG with each repeated compound subterm named once.

    Expanded terms share subterms heavily, so the plain tree print can be
    exponentially long. Output is ``$k := ...`` lines (dependencies first)
    followed by the root.
    """
    canon: dict[int, int] = {}     # id(node) -> canonical index
    table: dict[tuple, int] = {}   # structural key -> canonical index
    nodes: list[Term] = []
    kids_of: list[tuple[int, ...]] = []

    def intern(node: Term) -> int:
        if id(node) in canon:
            return canon[id(node)]
        kids = tuple(intern(c) for c in children(node))
        head = (type(node).__name__, node.op if isinstance(node, Named) else
                node.name if isinstance(node, Var) else None)
        key = (head, kids)
        if key not in table:
            table[key] = len(nodes)
            nodes.append(node)
            kids_of.append(kids)
        canon[id(node)] = table[key]
        return table[key]

    root = intern(t)
    uses = [0] * len(nodes)
    for kids in kids_of:
        for k in kids:
            uses[k] += 1
    names: dict[int, str] = {}
    built: dict[int, Term] = {}
    lines = []
    for i, node in enumerate(nodes):  # children always precede parents
        kids = tuple(Var(names[k]) if k in names else built[k] for k in kids_of[i])
        built[i] = _rebuild(node, kids)
        if i != root and uses[i] > 1 and kids_of[i]:
            names[i] = f"{prefix}{len(names) + 1}"
            lines.append(f"{names[i]} := {print_term(built[i])}")
    lines.append(print_term(built[root]))
    return "\n".join(lines)


def free_vars(t: Term) -> set[str]:
    out: set[str] = set()
    _collect_vars(t, out, {})
    return out


def _collect_vars(t: Term, out: set[str], seen: dict[int, bool]) -> None:
    if id(t) in seen:
        return
    seen[id(t)] = True
    if isinstance(t, Var):
        out.add(t.name)
    for child in children(t):
        _collect_vars(child, out, seen)


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Sheffer, Comp, PairSet, Preprod)):
        return (t.left, t.right)
    if isinstance(t, (Sing, BigUnion, Compl)):
        return (t.arg,)
    if isinstance(t, Named):
        return t.args
    return ()


def is_primitive(t: Term) -> bool:
    stack, seen = [t], set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Named):
            return False
        stack.extend(children(node))
    return True
