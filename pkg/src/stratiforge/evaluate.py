"""Interpretation of primitive terms and comprehension formulas over a frame.

V denotes the frame's local universe W; every object quantifier ranges over
W, and membership always uses the intrinsic extension of an element.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Mapping

from .errors import UnboundVar
from .syntax.formulas import (
    And, Eq, Exists, Forall, Formula, Iff, Implies, Mem, Not, Or, Pair, free_vars,
)
from .syntax.terms import (
    BigUnion, CapA, CapB, Comp, Compl, Empty, Frege1Star, Named, PairSet, Preprod,
    Sheffer, Sing, Term, Var, VTerm, children,
)
from .universe import Frame, reify

Env = Mapping[str, frozenset]

# Defining formula of each primitive, as a comprehension over ``y``.
PRIMITIVE_BODIES: dict[str, tuple[str, tuple[str, ...]]] = {
    "sheffer": ("~(y in A & y in B)", ("A", "B")),
    "sing": ("y = A", ("A",)),
    "bigunion": ("exists k (k in A & y in k)", ("A",)),
    "comp": ("exists a exists b exists c exists r exists s "
             "(pair(y, a, c) & r in R & s in S & pair(r, a, b) & pair(s, b, c))", ("R", "S")),
    "capa": ("exists a exists b exists c (pair(y, a, b) & c in a & c in b)", ()),
    "compl": ("~(y in A)", ("A",)),
    "pairset": ("y = A | y = B", ("A", "B")),
    "frege1star": ("exists z forall m (m in y -> m = z)", ()),
    "preprod": ("exists r exists s (r in R & s in S & forall z (z in y -> z in r | z in s))",
                ("R", "S")),
    "capb": ("exists z forall m (m in y -> z in m)", ()),
    "v": ("y = y", ()),
    "empty": ("~(y = y)", ()),
}


def primitive_term(name: str, args: tuple[Term, ...] = ()) -> Term:
    ctor = {
        "sheffer": Sheffer, "sing": Sing, "bigunion": BigUnion, "comp": Comp, "capa": CapA,
        "compl": Compl, "pairset": PairSet, "frege1star": Frege1Star, "preprod": Preprod,
        "capb": CapB, "v": VTerm, "empty": Empty,
    }[name]
    return ctor(*args)


def _orientations(frame: Frame, e: int) -> list[tuple[int, int]]:
    """All (a, b) in W with pair(e, a, b)."""
    ext = frame.universe.elements[e].extension
    W = frame.W
    if frame.universe.elements[e].is_atom or not 1 <= len(ext) <= 2:
        return []
    if any(m not in W for m in ext):
        return []
    if len(ext) == 1:
        return [(ext[0], ext[0])]
    return [(ext[0], ext[1]), (ext[1], ext[0])]


Hook = Callable[..., frozenset]


class Evaluator:
    """Memoizing evaluator; ``hooks`` give meaning to opaque ``Named`` nodes."""

    def __init__(self, frame: Frame, env: Env | None = None,
                 hooks: Mapping[str, Hook] | None = None):
        self.frame = frame
        self.env = dict(env or {})
        self.hooks = dict(hooks or {})
        self.memo: dict[int, frozenset] = {}
        self.exts = frame.universe.exts
        self.W = frame.W

    def __call__(self, t: Term) -> frozenset:
        hit = self.memo.get(id(t))
        if hit is not None:
            return hit
        out = self._eval(t)
        self.memo[id(t)] = out
        return out

    def _eval(self, t: Term) -> frozenset:
        W, exts = self.W, self.exts
        if isinstance(t, Var):
            if t.name not in self.env:
                raise UnboundVar(t.name)
            return frozenset(self.env[t.name])
        if isinstance(t, VTerm):
            return W
        if isinstance(t, Empty):
            return frozenset()
        if isinstance(t, Sheffer):
            return W - (self(t.left) & self(t.right))
        if isinstance(t, Compl):
            return W - self(t.arg)
        if isinstance(t, Sing):
            return frozenset({reify(self.frame, self(t.arg))}) & W
        if isinstance(t, PairSet):
            a = reify(self.frame, self(t.left))
            b = reify(self.frame, self(t.right))
            return frozenset({a, b}) & W
        if isinstance(t, BigUnion):
            out: set[int] = set()
            for k in self(t.arg) & W:
                out |= exts[k]
            return frozenset(out) & W
        if isinstance(t, Comp):
            return self._comp(self(t.left), self(t.right))
        if isinstance(t, CapA):
            out = set()
            for y in W:
                for a, b in _orientations(self.frame, y)[:1]:
                    if exts[a] & exts[b] & W:
                        out.add(y)
            return frozenset(out)
        if isinstance(t, CapB):
            out = set()
            for y in W:
                ms = exts[y] & W
                if not ms:
                    if W:
                        out.add(y)
                    continue
                common = W
                for m in ms:
                    common = common & exts[m]
                    if not common:
                        break
                if common:
                    out.add(y)
            return frozenset(out)
        if isinstance(t, Frege1Star):
            if not W:
                return frozenset()
            return frozenset(y for y in W if len(exts[y] & W) <= 1)
        if isinstance(t, Preprod):
            return self._preprod(self(t.left), self(t.right))
        if isinstance(t, Named):
            hook = self.hooks.get(t.op)
            if hook is not None:
                return frozenset(hook(*(self(a) for a in t.args))) & W
            raise TypeError(f"unexpanded operator {t.op!r}; call expand() first")
        raise TypeError(f"not a term: {t!r}")

    def _comp(self, R: frozenset, S: frozenset) -> frozenset:
        by_middle: dict[int, set[int]] = defaultdict(set)
        for s in S & self.W:
            for b, c in _orientations(self.frame, s):
                by_middle[b].add(c)
        index = self.frame.universe.ext_index
        out = set()
        for r in R & self.W:
            for a, b in _orientations(self.frame, r):
                for c in by_middle.get(b, ()):
                    y = index.get(frozenset((a, c)))
                    if y is not None and y in self.W:
                        out.add(y)
        return frozenset(out)

    def _preprod(self, R: frozenset, S: frozenset) -> frozenset:
        exts, W = self.exts, self.W
        covers = {exts[r] | exts[s] for r in R & W for s in S & W}
        if not covers:
            return frozenset()
        maximal = [c for c in covers if not any(c < d for d in covers)] if len(covers) < 512 else list(covers)
        return frozenset(y for y in W if any(exts[y] & W <= c for c in maximal))


def eval_term(t: Term, frame: Frame, env: Env | None = None,
              hooks: Mapping[str, Hook] | None = None) -> frozenset:
    """Value of a primitive term; raises Unrepresentable or UnboundVar."""
    return Evaluator(frame, env, hooks)(t)


def eval_comp_naive(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    """The composition clause evaluated by plain nested loops over W."""
    U, W = frame.universe, frame.W

    def pair(x: int, a: int, b: int) -> bool:
        return not U.is_atom(x) and U.exts[x] == {a, b}

    out = set()
    for y in W:
        hit = False
        for a in W:
            for c in W:
                if not pair(y, a, c):
                    continue
                for b in W:
                    if any(pair(r, a, b) for r in R) and any(pair(s, b, c) for s in S):
                        hit = True
                        break
                if hit:
                    break
            if hit:
                break
        if hit:
            out.add(y)
    return frozenset(out)


def headroom_of(t: Term) -> int:
    """Deepest nesting of reifying constructors (Sing, PairSet) in ``t``."""
    memo: dict[int, int] = {}

    def go(node: Term) -> int:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        below = max((go(c) for c in children(node)), default=0)
        out = below + 1 if isinstance(node, (Sing, PairSet)) else below
        memo[id(node)] = out
        return out

    return go(t)


# --- comprehension -----------------------------------------------------------

class _Comprehender:
    def __init__(self, frame: Frame):
        self.frame = frame
        self.U = frame.universe
        self.W = frame.W
        self.fv: dict[int, frozenset[str]] = {}
        self.blocks: dict[int, tuple[list[str], list[Formula]]] = {}
        # inverse membership: element -> elements of W containing it (all, and pairs only)
        self.holders: dict[int, set[int]] = defaultdict(set)
        self.pair_holders: dict[int, set[int]] = defaultdict(set)
        for e in self.W:
            ext = self.U.exts[e]
            for m in ext:
                self.holders[m].add(e)
                if len(ext) <= 2 and not self.U.is_atom(e):
                    self.pair_holders[m].add(e)

    def free(self, f: Formula) -> frozenset[str]:
        hit = self.fv.get(id(f))
        if hit is None:
            hit = frozenset(free_vars(f))
            self.fv[id(f)] = hit
        return hit

    def value(self, name: str, assign: dict) -> object:
        try:
            return assign[name]
        except KeyError:
            raise UnboundVar(name) from None

    def as_elem(self, v: object) -> int:
        return v if isinstance(v, int) else reify(self.frame, v)

    def members(self, v: object) -> frozenset:
        return self.U.exts[v] if isinstance(v, int) else v

    def holds(self, f: Formula, assign: dict) -> bool:
        if isinstance(f, Mem):
            x = self.as_elem(self.value(f.elem, assign))
            return x in self.members(self.value(f.cls, assign))
        if isinstance(f, Eq):
            a, b = self.value(f.left, assign), self.value(f.right, assign)
            if isinstance(a, int) or isinstance(b, int):
                return self.as_elem(a) == self.as_elem(b)
            return a == b
        if isinstance(f, Pair):
            x = self.value(f.x, assign)
            if isinstance(x, int) and self.U.is_atom(x):
                return False
            a = self.as_elem(self.value(f.a, assign))
            b = self.as_elem(self.value(f.b, assign))
            return self.members(x) == {a, b}
        if isinstance(f, Not):
            return not self.holds(f.body, assign)
        if isinstance(f, And):
            return self.holds(f.left, assign) and self.holds(f.right, assign)
        if isinstance(f, Or):
            return self.holds(f.left, assign) or self.holds(f.right, assign)
        if isinstance(f, Implies):
            return not self.holds(f.left, assign) or self.holds(f.right, assign)
        if isinstance(f, Iff):
            return self.holds(f.left, assign) == self.holds(f.right, assign)
        if isinstance(f, Exists):
            names, conjuncts = self.block(f)
            return self.search(names, conjuncts, dict(assign), set())
        if isinstance(f, Forall):
            names, conjuncts = self.block(f)
            return not self.search(names, conjuncts, dict(assign), set())
        raise TypeError(f"not a formula: {f!r}")

    def block(self, f: Exists | Forall) -> tuple[list[str], list[Formula]]:
        """Leading existentials and the conjuncts of their body (a forall is read as its negation)."""
        hit = self.blocks.get(id(f))
        if hit is None:
            g: Formula = Exists(f.var, Not(f.body)) if isinstance(f, Forall) else f
            names = []
            while isinstance(g, Exists):
                names.append(g.var)
                g = g.body
            hit = self.blocks[id(f)] = (names, self.conjuncts(g))
        return hit

    def conjuncts(self, f: Formula) -> list[Formula]:
        if isinstance(f, And):
            return self.conjuncts(f.left) + self.conjuncts(f.right)
        if isinstance(f, Not):
            g = f.body
            if isinstance(g, Implies):
                return self.conjuncts(g.left) + self.conjuncts(Not(g.right))
            if isinstance(g, Or):
                return self.conjuncts(Not(g.left)) + self.conjuncts(Not(g.right))
            if isinstance(g, Not):
                return self.conjuncts(g.body)
        return [f]

    def candidates(self, name: str, names: list[str], conjuncts: list[Formula],
                   assign: dict) -> frozenset:
        """A superset of the values of ``name`` that can satisfy the conjunction."""

        def ready(other: str) -> bool:
            return other in assign and other not in names

        best = self.W
        for c in conjuncts:
            cand = None
            if isinstance(c, Mem):
                if c.elem == name and ready(c.cls):
                    cand = self.members(assign[c.cls]) & self.W
                elif c.cls == name and ready(c.elem) and isinstance(assign[c.elem], int):
                    cand = self.holders[assign[c.elem]]
            elif isinstance(c, Pair):
                if name in (c.a, c.b) and ready(c.x):
                    cand = self.members(assign[c.x]) & self.W
                elif c.x == name:
                    for end in (c.a, c.b):
                        if ready(end) and isinstance(assign[end], int):
                            cand = self.pair_holders[assign[end]]
            elif isinstance(c, Eq):
                other = c.right if c.left == name else c.left if c.right == name else None
                if other is not None and ready(other):
                    try:
                        cand = frozenset({self.as_elem(assign[other])}) & self.W
                    except Exception:
                        cand = None
            if cand is not None and len(cand) < len(best):
                best = cand
        return frozenset(best)

    def search(self, names: list[str], conjuncts: list[Formula], assign: dict, done: set) -> bool:
        checked = []
        for i, c in enumerate(conjuncts):
            if i not in done and self.free(c).isdisjoint(names):
                if not self.holds(c, assign):
                    for j in checked:
                        done.discard(j)
                    return False
                done.add(i)
                checked.append(i)
        try:
            if not names:
                return True
            pick, best = names[0], None
            for n in names:
                cand = self.candidates(n, names, conjuncts, assign)
                if best is None or len(cand) < len(best):
                    pick, best = n, cand
            rest = [n for n in names if n != pick]
            for e in sorted(best):
                assign[pick] = e
                if self.search(rest, conjuncts, assign, done):
                    return True
            assign.pop(pick, None)
            return False
        finally:
            for j in checked:
                done.discard(j)


def comprehend(frame: Frame, f: Formula, var: str, env: Env | None = None) -> frozenset:
    """{e in W : f holds with var := e}; other free variables come from ``env``."""
    env = dict(env or {})
    missing = free_vars(f) - {var} - set(env)
    if missing:
        raise UnboundVar(", ".join(sorted(missing)))
    c = _Comprehender(frame)
    out = set()
    for e in sorted(frame.W):
        assign = dict(env)
        assign[var] = e
        if c.holds(f, assign):
            out.add(e)
    return frozenset(out)
