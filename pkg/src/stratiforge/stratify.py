"""Stratification of FOL(=, ∈) formulas by offset-carrying union-find.

Each atom contributes a difference constraint ``level(v) - level(u) = d``:
``x in y`` gives (x, y, 1), ``x = y`` gives (x, y, 0), and ``pair(x, a, b)``
gives (a, x, 1) and (b, x, 1). Quantifiers and connectives are transparent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .syntax.formulas import (
    And, Eq, Exists, Forall, Formula, Iff, Implies, Mem, Not, Or, Pair, all_vars,
)

Constraint = tuple[str, str, int]  # (u, v, d): level(v) - level(u) = d

# The comprehension axioms of both systems, each stated as the existence of X.
AXIOMS: dict[str, str] = {
    "a1.sheffer": "exists X forall y (y in X <-> ~(y in A & y in B))",
    "a2.singleton": "exists X forall y (y in X <-> y = A)",
    "a3.union": "exists X forall y (y in X <-> exists k (k in A & y in k))",
    "a4.composition": "exists X forall y (y in X <-> exists a exists b exists c exists r exists s"
                      " (pair(y, a, c) & r in R & s in S & pair(r, a, b) & pair(s, b, c)))",
    "a5.cap": "exists X forall y (y in X <-> exists a exists b exists c"
              " (pair(y, a, b) & c in a & c in b))",
    "b1.complement": "exists X forall y (y in X <-> ~(y in A))",
    "b2.pairing": "exists X forall y (y in X <-> y = A | y = B)",
    "b3.union": "exists X forall y (y in X <-> exists k (k in A & y in k))",
    "b4.frege1": "exists X forall y (y in X <-> exists z forall m (m in y -> m = z))",
    "b5.preproduct": "exists X forall y (y in X <-> exists r exists s"
                     " (r in R & s in S & forall z (z in y -> z in r | z in s)))",
    "b6.cap": "exists X forall y (y in X <-> exists z forall m (m in y -> z in m))",
}


@dataclass(frozen=True)
class TypeAssignment:
    levels: dict[str, int]

    def satisfies(self, constraints: list[Constraint]) -> bool:
        return all(self.levels[v] - self.levels[u] == d for u, v, d in constraints)


@dataclass(frozen=True)
class ConflictWitness:
    """A cycle of oriented constraints whose offsets sum to ``total`` != 0."""

    cycle: tuple[Constraint, ...]
    total: int

    def replay(self) -> bool:
        """True iff the cycle is closed and contradictory."""
        if not self.cycle:
            return False
        for (_, v, _), (u2, _, _) in zip(self.cycle, self.cycle[1:] + self.cycle[:1]):
            if v != u2:
                return False
        return sum(d for _, _, d in self.cycle) == self.total != 0

    def describe(self) -> str:
        steps = []
        for u, v, d in self.cycle:
            if d == 0:
                steps.append(f"level({v}) = level({u})")
            else:
                steps.append(f"level({v}) = level({u}) {'+' if d > 0 else '-'} {abs(d)}")
        return "; ".join(steps) + f"  (cycle offset {self.total})"


def constraints_of(f: Formula) -> list[Constraint]:
    out: list[Constraint] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Mem):
            out.append((g.elem, g.cls, 1))
        elif isinstance(g, Eq):
            if g.left != g.right:
                out.append((g.left, g.right, 0))
        elif isinstance(g, Pair):
            out.append((g.a, g.x, 1))
            out.append((g.b, g.x, 1))
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


class OffsetUnionFind:
    """Union-find where each node stores its level offset from its parent."""

    def __init__(self) -> None:
        self.parent: dict[str, str] = {}
        self.offset: dict[str, int] = {}  # level(node) - level(parent)

    def add(self, x: str) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.offset[x] = 0

    def find(self, x: str) -> tuple[str, int]:
        """Root of ``x`` and level(x) - level(root), with path compression."""
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 0
        for node in reversed(path):
            acc += self.offset[node]
            self.parent[node] = root
            self.offset[node] = acc
        return root, (self.offset[path[0]] if path else 0)

    def union(self, u: str, v: str, d: int) -> bool:
        """Impose level(v) - level(u) = d; False if it contradicts earlier unions."""
        ru, ou = self.find(u)
        rv, ov = self.find(v)
        if ru == rv:
            return ov - ou == d
        # level(rv) - level(ru) = ou + d - ov
        self.parent[rv] = ru
        self.offset[rv] = ou + d - ov
        return True


def _path(edges: dict[str, list[tuple[str, int, Constraint]]], src: str, dst: str) -> list[Constraint]:
    """Oriented constraints leading from src to dst through accepted edges."""
    prev: dict[str, tuple[str, Constraint] | None] = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for y, _, oriented in edges.get(x, []):
            if y not in prev:
                prev[y] = (x, oriented)
                queue.append(y)
    steps: list[Constraint] = []
    node = dst
    while prev[node] is not None:
        x, oriented = prev[node]
        steps.append(oriented)
        node = x
    return steps[::-1]


def stratify_formula(f: Formula) -> TypeAssignment | ConflictWitness:
    constraints = constraints_of(f)
    uf = OffsetUnionFind()
    names = all_vars(f)
    for name in names:
        uf.add(name)
    edges: dict[str, list[tuple[str, int, Constraint]]] = {}
    for u, v, d in constraints:
        if not uf.union(u, v, d):
            # the accepted forest already fixes level(v) - level(u); walk it back
            back = _path(edges, v, u)
            cycle = ((u, v, d), *back)
            return ConflictWitness(cycle, sum(c[2] for c in cycle))
        edges.setdefault(u, []).append((v, d, (u, v, d)))
        edges.setdefault(v, []).append((u, -d, (v, u, -d)))
    raw = {name: uf.find(name) for name in names}
    low: dict[str, int] = {}
    for root, off in raw.values():
        low[root] = min(low.get(root, off), off)
    levels = {name: off - low[root] for name, (root, off) in raw.items()}
    return TypeAssignment(levels)
