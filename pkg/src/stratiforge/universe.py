"""Finite membership universes, frames and reification.

A universe is an immutable table of elements. Each element is an atom
(urelement, no members) or a set with a canonical extension. Atoms are how
extensionality failure is modelled: any number of them share the empty
extension, while Set-kind extensions are unique.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .errors import DanglingReference, DuplicateExtension, SizeCap, Unrepresentable

DEFAULT_CAP = 2**20

Class = frozenset  # frozenset[int] of element ids


class Kind(str, Enum):
    ATOM = "atom"
    SET = "set"


@dataclass(frozen=True)
class Element:
    kind: Kind
    extension: tuple[int, ...]
    rank: int

    @property
    def is_atom(self) -> bool:
        return self.kind is Kind.ATOM


class Singleton(NamedTuple):
    a: int


class Doubleton(NamedTuple):
    a: int
    b: int


class Universe:
    """Immutable finite membership structure.

    ``exts[i]`` is the extension of element ``i`` as a frozenset;
    ``ext_index`` maps a Set-kind extension to its unique id.
    """

    def __init__(self, elements: Sequence[Element], atom_count: int, depth: int):
        self.elements: tuple[Element, ...] = tuple(elements)
        self.atom_count = atom_count
        self.depth = depth
        self.exts: tuple[frozenset[int], ...] = tuple(
            frozenset(e.extension) for e in self.elements
        )
        self.ranks: tuple[int, ...] = tuple(e.rank for e in self.elements)
        self.ext_index: dict[frozenset[int], int] = {}
        for i, e in enumerate(self.elements):
            if e.kind is Kind.SET:
                key = self.exts[i]
                if key in self.ext_index:
                    raise DuplicateExtension(
                        f"elements {self.ext_index[key]} and {i} share extension {sorted(key)}"
                    )
                self.ext_index[key] = i
        self.pair_index: dict[frozenset[int], int] = {
            k: v for k, v in self.ext_index.items() if 1 <= len(k) <= 2
        }

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def all(self) -> frozenset[int]:
        return frozenset(range(len(self.elements)))

    def slice(self, rank: int) -> frozenset[int]:
        return frozenset(i for i, r in enumerate(self.ranks) if r <= rank)

    def is_atom(self, e: int) -> bool:
        return self.elements[e].kind is Kind.ATOM

    def lookup(self, ext: Iterable[int]) -> int | None:
        return self.ext_index.get(frozenset(ext))

    def check_indexes(self) -> bool:
        """Full rescan: the indexes agree with the element table."""
        for i, e in enumerate(self.elements):
            if e.kind is Kind.SET and self.ext_index.get(self.exts[i]) != i:
                return False
        for k, v in self.ext_index.items():
            if self.exts[v] != k or self.elements[v].kind is not Kind.SET:
                return False
        return all(self.ext_index.get(k) == v for k, v in self.pair_index.items())

    def show(self, e: int) -> str:
        """Brace notation; atoms print as @i, back-references as #i."""
        return self._show(e, ())

    def _show(self, e: int, path: tuple[int, ...]) -> str:
        el = self.elements[e]
        if el.kind is Kind.ATOM:
            return f"@{e}"
        if e in path:
            return f"#{e}"
        inner = ",".join(self._show(m, path + (e,)) for m in el.extension)
        return "{" + inner + "}"

    def show_class(self, c: Iterable[int]) -> str:
        items = [self.show(e) for e in sorted(c)]
        if not items:
            return "{ }"
        return "{ " + ", ".join(items) + " }"


def classify_pair(universe: Universe, e: int) -> Singleton | Doubleton | None:
    el = universe.elements[e]
    if el.kind is Kind.ATOM:
        return None
    ext = el.extension
    if len(ext) == 1:
        return Singleton(ext[0])
    if len(ext) == 2:
        return Doubleton(ext[0], ext[1])
    return None


def cumulative_size(atom_count: int, depth: int, cap: int = DEFAULT_CAP) -> int:
    """Size of the cumulative universe, raising SizeCap as soon as it overflows."""
    size = atom_count
    for _ in range(depth):
        if size >= 64 or (1 << size) + atom_count > cap:
            raise SizeCap(f"universe({atom_count}, {depth}) exceeds cap {cap}")
        size = atom_count + (1 << size)
    return size


def build_universe(atom_count: int, depth: int, cap: int = DEFAULT_CAP) -> Universe:
    """Cumulative hereditarily finite universe with ``atom_count`` atoms.

    Level 0 is the atoms; level k adds every subset of level k-1. Ids are
    atoms first, then new sets level by level in graded lexicographic order
    (by extension size, then by sorted extension).
    """
    if atom_count < 0 or depth < 1:
        raise ValueError("need atom_count >= 0 and depth >= 1")
    cumulative_size(atom_count, depth, cap)
    elements = [Element(Kind.ATOM, (), 0) for _ in range(atom_count)]
    seen: dict[tuple[int, ...], int] = {}
    level = list(range(atom_count))
    for _ in range(depth):
        for size in range(len(level) + 1):
            for ext in combinations(level, size):
                if ext in seen:
                    continue
                rank = 1 + max((elements[m].rank for m in ext), default=0)
                seen[ext] = len(elements)
                elements.append(Element(Kind.SET, ext, rank))
        level = list(range(len(elements)))
    return Universe(elements, atom_count, depth)


def build_digraph_universe(table: Iterable[tuple[int, str | Kind, Sequence[int]]]) -> Universe:
    """Universe with exactly the given membership relation.

    Ids must be 0..n-1. Non-well-founded elements (on or above a membership
    cycle) get rank n, above every finite rank.
    """
    rows = sorted(table, key=lambda r: r[0])
    n = len(rows)
    if [r[0] for r in rows] != list(range(n)):
        raise DanglingReference("ids must be exactly 0..n-1")
    kinds = [Kind(k) for _, k, _ in rows]
    exts = [tuple(sorted(set(ext))) for _, _, ext in rows]
    for i, ext in enumerate(exts):
        for m in ext:
            if not 0 <= m < n:
                raise DanglingReference(f"element {i} references undeclared id {m}")
        if kinds[i] is Kind.ATOM and ext:
            raise ValueError(f"atom {i} has members")
    ranks: list[int | None] = [None] * n
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if ranks[i] is not None:
                continue
            if kinds[i] is Kind.ATOM:
                ranks[i] = 0
                changed = True
            elif all(ranks[m] is not None for m in exts[i]):
                ranks[i] = 1 + max((ranks[m] for m in exts[i]), default=0)
                changed = True
    final = [n if r is None else r for r in ranks]
    elements = [Element(kinds[i], exts[i], final[i]) for i in range(n)]
    return Universe(elements, sum(k is Kind.ATOM for k in kinds), max(final, default=0))


def load_digraph_json(text: str) -> Universe:
    doc = json.loads(text)
    return build_digraph_universe((row["id"], row["kind"], row.get("ext", [])) for row in doc)


@dataclass(frozen=True)
class Frame:
    """A universe plus the local universe ``W`` that interprets V."""

    universe: Universe
    W: frozenset[int]
    headroom: int = 0
    label: str = field(default="", compare=False)
    # oracles drop objects that do not exist instead of raising
    lenient: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, universe: Universe, headroom: int = 0) -> "Frame":
        top = universe.depth - headroom
        return cls(universe, universe.slice(top), headroom)

    def widened(self, lenient: bool = False) -> "Frame":
        """Same universe with W = every element."""
        return Frame(self.universe, self.universe.all, 0, self.key() + "+all", lenient)

    def key(self) -> str:
        return self.label or f"{self.universe.atom_count},{self.universe.depth},{self.headroom}"


def make_frame(atoms: int, depth: int, headroom: int = 0, cap: int = DEFAULT_CAP) -> Frame:
    f = Frame.of(build_universe(atoms, depth, cap), headroom)
    return Frame(f.universe, f.W, headroom, f"{atoms},{depth},{headroom}")


def reify(frame: Frame, c: Iterable[int]) -> int:
    """The unique Set-kind element whose extension is ``c``.

    Raises Unrepresentable when no such element exists. Atoms are never
    returned, so the empty class reifies to the Set-kind empty set.
    """
    key = frozenset(c)
    e = frame.universe.ext_index.get(key)
    if e is None:
        raise Unrepresentable(f"no element with extension of size {len(key)}")
    return e


def reify_in_w(frame: Frame, c: Iterable[int]) -> int:
    """Like :func:`reify` but the element must also lie in W."""
    e = reify(frame, c)
    if e not in frame.W:
        raise Unrepresentable(f"element {e} lies outside the local universe")
    return e
