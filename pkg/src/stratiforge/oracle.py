"""Direct brute-force definitions of the constructed concepts.

Nothing here evaluates operator terms: every kind is computed from its
set-theoretic description by scanning W and decoding extensions. Kinds are
either *closed* (all objects of some shape lying in W) or *functional*
(built from parameters); functional kinds raise Unrepresentable when a
required object does not exist or falls outside W.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .errors import Unrepresentable
from .syntax.formulas import parse_formula
from .universe import Frame, Universe, reify

INCLUDE_ATOMS_IN_ZERO = True


def _obj(frame: Frame, members: Iterable[int]) -> int:
    e = reify(frame, members)
    if e not in frame.W:
        raise Unrepresentable(f"{frame.universe.show(e)} lies outside the local universe")
    return e


def _each(frame: Frame, build: Callable[..., int], items: Iterable[tuple]) -> frozenset:
    """Objects built from ``items``; a lenient frame skips the unrepresentable ones."""
    out = set()
    for item in items:
        try:
            out.add(build(*item))
        except Unrepresentable:
            if not frame.lenient:
                raise
    return frozenset(out)


def _is_set(U: Universe, e: int) -> bool:
    return not U.is_atom(e)


def _is_pair(U: Universe, e: int) -> bool:
    return _is_set(U, e) and 1 <= len(U.exts[e]) <= 2


def _is_singleton(U: Universe, e: int) -> bool:
    return _is_set(U, e) and len(U.exts[e]) == 1


# --- Kuratowski pairs --------------------------------------------------------

def decode_kpair(U: Universe, e: int) -> tuple[int, int] | None:
    """(a, b) when e = {{a}, {a, b}}, else None. Decoding is unique."""
    if U.is_atom(e):
        return None
    members = U.elements[e].extension
    if len(members) == 1:
        m = members[0]
        if _is_singleton(U, m):
            a = U.elements[m].extension[0]
            return a, a
        return None
    if len(members) != 2:
        return None
    s, t = members
    for single, double in ((s, t), (t, s)):
        if not (_is_singleton(U, single) and _is_set(U, double)):
            continue
        a = U.elements[single].extension[0]
        dext = U.exts[double]
        if len(dext) == 2 and a in dext:
            (b,) = dext - {a}
            return a, b
    return None


def kpair(frame: Frame, a: int, b: int) -> int:
    """The element {{a}, {a, b}} of W."""
    inner_a = reify(frame, {a})
    inner_ab = reify(frame, {a, b})
    return _obj(frame, {inner_a, inner_ab})


def krel_pairs(U: Universe, R: Iterable[int]) -> list[tuple[int, int]]:
    out = []
    for e in sorted(R):
        ab = decode_kpair(U, e)
        if ab is None:
            raise ValueError(f"{U.show(e)} is not a Kuratowski pair")
        out.append(ab)
    return out


def encode_krel(frame: Frame, pairs: Iterable[tuple[int, int]]) -> frozenset:
    return _each(frame, lambda a, b: kpair(frame, a, b), pairs)


def closed_kpairs(frame: Frame, keep: Callable[[int, int], bool]) -> frozenset:
    """All Kuratowski pairs in W with components in W satisfying ``keep``."""
    U, W = frame.universe, frame.W
    out = set()
    for e in W:
        ab = decode_kpair(U, e)
        if ab is not None and ab[0] in W and ab[1] in W and keep(*ab):
            out.add(e)
    return frozenset(out)


# --- unordered pairs -----------------------------------------------------------

def upair_members(U: Universe, e: int) -> tuple[int, int] | None:
    if not _is_pair(U, e):
        return None
    ext = U.elements[e].extension
    return (ext[0], ext[-1])


def closed_upairs(frame: Frame, keep: Callable[[int, int], bool]) -> frozenset:
    U, W = frame.universe, frame.W
    out = set()
    for e in W:
        ab = upair_members(U, e)
        if ab is not None and ab[0] in W and ab[1] in W and keep(*ab):
            out.add(e)
    return frozenset(out)


def upair(frame: Frame, a: int, b: int) -> int:
    return _obj(frame, {a, b})


# --- classes -------------------------------------------------------------------

def frege(frame: Frame, n: int) -> frozenset:
    U = frame.universe
    return frozenset(e for e in frame.W if _is_set(U, e) and len(U.exts[e]) == n)


def zero(frame: Frame, include_atoms: bool | None = None) -> frozenset:
    if include_atoms is None:
        include_atoms = INCLUDE_ATOMS_IN_ZERO
    U = frame.universe
    return frozenset(e for e in frame.W if not U.exts[e] and (include_atoms or _is_set(U, e)))


def zero_sets(frame: Frame) -> frozenset:
    return zero(frame, include_atoms=False)


def universe_class(frame: Frame) -> frozenset:
    return frame.W


def complement(frame: Frame, A: frozenset) -> frozenset:
    return frame.W - A


def set_union(frame: Frame, A: frozenset, B: frozenset) -> frozenset:
    return A | B


def set_inter(frame: Frame, A: frozenset, B: frozenset) -> frozenset:
    return A & B


def set_diff(frame: Frame, A: frozenset, B: frozenset) -> frozenset:
    return A - B


def elements_of(frame: Frame, *classes: frozenset) -> frozenset:
    """The objects reifying the given classes; each must lie in W."""
    return _each(frame, lambda c: _obj(frame, c), ((c,) for c in classes))


def powerset(frame: Frame, A: frozenset) -> frozenset:
    U = frame.universe
    return frozenset(e for e in frame.W if U.exts[e] <= A)


def singletons_of(frame: Frame, A: frozenset) -> frozenset:
    U = frame.universe
    return frozenset(e for e in frame.W if _is_singleton(U, e) and U.exts[e] <= A)


def unordered_product(frame: Frame, A: frozenset, B: frozenset) -> frozenset:
    return _each(frame, lambda a, b: upair(frame, a, b), ((a, b) for a in A for b in B))


def cartesian(frame: Frame, A: frozenset, B: frozenset) -> frozenset:
    return encode_krel(frame, ((a, b) for a in A for b in B))


def triple_product(frame: Frame, X: frozenset, Y: frozenset, Z: frozenset) -> frozenset:
    return _each(frame, lambda x, y, z: _obj(frame, {x, y, z}),
                 ((x, y, z) for x in X for y in Y for z in Z))


def all_pairs(frame: Frame) -> frozenset:
    return frege(frame, 1) | frege(frame, 2)


def pairs_of_pairs(frame: Frame) -> frozenset:
    U = frame.universe
    return closed_upairs(frame, lambda a, b: _is_pair(U, a) and _is_pair(U, b))


def pairs_of_nonpairs(frame: Frame) -> frozenset:
    U = frame.universe
    return closed_upairs(frame, lambda a, b: not _is_pair(U, a) and not _is_pair(U, b))


def nonpair_with_pair(frame: Frame) -> frozenset:
    U = frame.universe
    return closed_upairs(
        frame, lambda a, b: (_is_pair(U, a) and not _is_pair(U, b)) or (_is_pair(U, b) and not _is_pair(U, a))
    )


def disjoint_nonpairs(frame: Frame) -> frozenset:
    U = frame.universe
    return closed_upairs(
        frame,
        lambda a, b: not _is_pair(U, a) and not _is_pair(U, b) and not (U.exts[a] & U.exts[b]),
    )


def cap_pairs(frame: Frame) -> frozenset:
    U, W = frame.universe, frame.W
    return closed_upairs(frame, lambda a, b: bool(U.exts[a] & U.exts[b] & W))


def cap_general(frame: Frame) -> frozenset:
    U, W = frame.universe, frame.W
    out = set()
    for y in W:
        members = [m for m in U.elements[y].extension if m in W]
        if not members:
            if W:
                out.add(y)
            continue
        if any(all(z in U.exts[m] for m in members) for z in W):
            out.add(y)
    return frozenset(out)


def cap1(frame: Frame) -> frozenset:
    U, W = frame.universe, frame.W
    return closed_upairs(
        frame, lambda a, b: any(_is_singleton(U, c) for c in U.exts[a] & U.exts[b] & W)
    )


def _upair_list(U: Universe, R: Iterable[int]) -> list[tuple[int, int]]:
    out = []
    for r in R:
        ab = upair_members(U, r)
        if ab is not None:
            out.append(ab)
    return out


def unordered_comp(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    """{a, c} for {a, b} in R and {b, c} in S, read off the member lists."""
    U, W = frame.universe, frame.W
    out = set()
    for a1, b1 in _upair_list(U, R):
        for a2, b2 in _upair_list(U, S):
            for a, b in ((a1, b1), (b1, a1)):
                for b_, c in ((a2, b2), (b2, a2)):
                    if b == b_ and a in W and b in W and c in W:
                        e = U.ext_index.get(frozenset((a, c)))
                        if e is not None and e in W:
                            out.add(e)
    return frozenset(out)


def cap1_comp(frame: Frame) -> frozenset:
    c = cap1(frame)
    return unordered_comp(frame, c, c)


def eps_star(frame: Frame) -> frozenset:
    """Unordered pairs {{{x}}, v} with {x} a member of v."""
    U = frame.universe

    def keep(p: int, v: int) -> bool:
        for outer, other in ((p, v), (v, p)):
            if _is_singleton(U, outer):
                (inner,) = U.elements[outer].extension
                if _is_singleton(U, inner) and inner in U.exts[other]:
                    return True
        return False

    return closed_upairs(frame, keep)


def l_set(frame: Frame) -> frozenset:
    U = frame.universe
    return frozenset(
        e for e in frame.W if _is_set(U, e) and any(not _is_singleton(U, m) for m in U.exts[e])
    )


def preproduct_closure(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    U = frame.universe
    unions = [U.exts[r] | U.exts[s] for r in R for s in S]
    return frozenset(y for y in frame.W if any(U.exts[y] <= u for u in unions))


def pair_power(frame: Frame, R: frozenset) -> frozenset:
    return unordered_product(frame, R, R)


# --- relations -----------------------------------------------------------------

def diagonal(frame: Frame) -> frozenset:
    return closed_kpairs(frame, lambda a, b: a == b)


def domain(frame: Frame, R: frozenset) -> frozenset:
    return frozenset(a for a, _ in krel_pairs(frame.universe, R)) & frame.W


def converse(frame: Frame, R: frozenset) -> frozenset:
    return encode_krel(frame, ((b, a) for a, b in krel_pairs(frame.universe, R)))


def relprod_pairs(R: list[tuple[int, int]], S: list[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(a, c) for a, b in R for b2, c in S if b == b2}


def relprod(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    U = frame.universe
    return encode_krel(frame, relprod_pairs(krel_pairs(U, R), krel_pairs(U, S)))


def kuratowski_image(frame: Frame, R: frozenset) -> frozenset:
    return _each(frame, lambda a, b: kpair(frame, reify(frame, {a}), reify(frame, {a, b})),
                 krel_pairs(frame.universe, R))


def singleton_image(frame: Frame, R: frozenset) -> frozenset:
    return _each(frame, lambda a, b: kpair(frame, reify(frame, {a}), reify(frame, {b})),
                 krel_pairs(frame.universe, R))


def inclusion(frame: Frame) -> frozenset:
    U = frame.universe
    return closed_kpairs(frame, lambda a, b: U.exts[a] <= U.exts[b])


def intersection_rel(frame: Frame) -> frozenset:
    U, W = frame.universe, frame.W
    return closed_kpairs(frame, lambda a, b: bool(U.exts[a] & U.exts[b] & W))


def cap1_rel(frame: Frame) -> frozenset:
    U, W = frame.universe, frame.W
    return closed_kpairs(
        frame, lambda a, b: any(_is_singleton(U, c) for c in U.exts[a] & U.exts[b] & W)
    )


def _nested(frame: Frame, test: Callable[[tuple[int, int], int], bool]) -> frozenset:
    """Kuratowski pairs (p, q) in W where p decodes to (a, b) and test((a, b), q)."""
    U = frame.universe
    out = set()
    for e in frame.W:
        pq = decode_kpair(U, e)
        if pq is None:
            continue
        ab = decode_kpair(U, pq[0])
        if ab is not None and test(ab, pq[1]):
            out.add(e)
    return frozenset(out)


def converse_rel(frame: Frame) -> frozenset:
    U = frame.universe
    return _nested(frame, lambda ab, q: decode_kpair(U, q) == (ab[1], ab[0]))


def proj1(frame: Frame) -> frozenset:
    return _nested(frame, lambda ab, q: q == ab[0])


def proj2(frame: Frame) -> frozenset:
    return _nested(frame, lambda ab, q: q == ab[1])


def segment_relation(frame: Frame, R: frozenset, S: frozenset) -> tuple[frozenset, ...]:
    """(R1, R2, R3, S1, S2, S3): identity pairs, pairs with a converse in the
    other relation, and the remaining pairs."""
    U = frame.universe
    rp = dict(zip(sorted(R), krel_pairs(U, R)))
    sp = dict(zip(sorted(S), krel_pairs(U, S)))
    r_set, s_set = set(rp.values()), set(sp.values())

    def split(pairs: dict[int, tuple[int, int]], other: set) -> tuple[frozenset, ...]:
        one = frozenset(e for e, (a, b) in pairs.items() if a == b)
        two = frozenset(e for e, (a, b) in pairs.items() if a != b and (b, a) in other)
        three = frozenset(pairs) - one - two
        return one, two, three

    return split(rp, s_set) + split(sp, r_set)


def stage_decomposition(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    """Union of the five stage products."""
    R1, R2, R3, S1, S2, S3 = segment_relation(frame, R, S)
    return (relprod(frame, R1, S) | relprod(frame, R2 | R3, S1) | relprod(frame, R2, S2)
            | relprod(frame, R3, S2 | S3) | relprod(frame, R2, S3))


def segment_defects(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    """Members lost by the segmentation or shared by two segments (empty when it partitions)."""
    R1, R2, R3, S1, S2, S3 = segment_relation(frame, R, S)
    bad: set[int] = set()
    for whole, parts in ((R, (R1, R2, R3)), (S, (S1, S2, S3))):
        bad |= whole - frozenset().union(*parts)
        for x, y in ((0, 1), (0, 2), (1, 2)):
            bad |= parts[x] & parts[y]
    return frozenset(bad)


def nothing(frame: Frame) -> frozenset:
    return frozenset()


def stage_product(frame: Frame, R: frozenset, S: frozenset, stage: int) -> frozenset:
    R1, R2, R3, S1, S2, S3 = segment_relation(frame, R, S)
    left, right = {1: (R1, S), 2: (R2 | R3, S1), 3: (R2, S2), 4: (R3, S2 | S3), 5: (R2, S3)}[stage]
    return relprod(frame, left, right)


def segment(frame: Frame, R: frozenset, S: frozenset, index: int) -> frozenset:
    return segment_relation(frame, R, S)[index]


# --- case analysis of the unordered composition --------------------------------

def _members_of_pairs(frame: Frame, R: frozenset) -> tuple[set[int], set[frozenset]]:
    U, W = frame.universe, frame.W
    singles, doubles = set(), set()
    for r in R:
        if _is_pair(U, r) and U.exts[r] <= W:
            if len(U.exts[r]) == 1:
                singles.add(next(iter(U.exts[r])))
            else:
                doubles.add(U.exts[r])
    return singles, doubles


def case111(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    rs, _ = _members_of_pairs(frame, R)
    ss, _ = _members_of_pairs(frame, S)
    return _each(frame, lambda a: upair(frame, a, a), ((a,) for a in rs & ss))


def case122(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    rs, rd = _members_of_pairs(frame, R)
    ss, sd = _members_of_pairs(frame, S)
    items = [tuple(d) for singles, doubles in ((rs, sd), (ss, rd)) for d in doubles if d & singles]
    return _each(frame, lambda a, b: upair(frame, a, b), items)


def case221(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    _, rd = _members_of_pairs(frame, R)
    _, sd = _members_of_pairs(frame, S)
    return _each(frame, lambda a: upair(frame, a, a), ((a,) for d in rd & sd for a in d))


def case222(frame: Frame, R: frozenset, S: frozenset, avoid: frozenset = frozenset()) -> frozenset:
    _, rd = _members_of_pairs(frame, R)
    _, sd = _members_of_pairs(frame, S)
    items = []
    for d1 in rd:
        for d2 in sd:
            for b in d1 & d2:
                (a,) = d1 - {b}
                (c,) = d2 - {b}
                if a != c and not ({a, b, c} & avoid):
                    items.append((a, c))
    return _each(frame, lambda a, c: upair(frame, a, c), items)


def case222_avoid(frame: Frame, R: frozenset, S: frozenset, u: frozenset, w: frozenset) -> frozenset:
    avoid = frozenset({reify(frame, u), reify(frame, w)})
    return case222(frame, R, S, avoid)


def wedge_avoid(frame: Frame, R: frozenset, S: frozenset, u: frozenset, w: frozenset) -> frozenset:
    """Singletons of the composed doubletons avoiding u and w."""
    return _each(frame, lambda p: _obj(frame, {p}), ((p,) for p in case222_avoid(frame, R, S, u, w)))


def comp_cases(frame: Frame, R: frozenset, S: frozenset) -> frozenset:
    return case111(frame, R, S) | case122(frame, R, S) | case221(frame, R, S) | case222(frame, R, S)


def without_uw(frame: Frame, X: frozenset, u: frozenset, w: frozenset) -> frozenset:
    U = frame.universe
    avoid = {reify(frame, u), reify(frame, w)}
    return frozenset(x for x in X if _is_pair(U, x) and not (U.exts[x] & avoid))


# --- registry ------------------------------------------------------------------

ORACLES: dict[str, Callable[..., frozenset]] = {
    "frege": frege,
    "zero": zero,
    "zero_sets": zero_sets,
    "universe": universe_class,
    "complement": complement,
    "set_union": set_union,
    "set_inter": set_inter,
    "set_diff": set_diff,
    "elements": elements_of,
    "powerset": powerset,
    "singletons_of": singletons_of,
    "unordered_product": unordered_product,
    "cartesian": cartesian,
    "triple_product": triple_product,
    "pairs": all_pairs,
    "pairs_of_pairs": pairs_of_pairs,
    "pairs_of_nonpairs": pairs_of_nonpairs,
    "nonpair_with_pair": nonpair_with_pair,
    "disjoint_nonpairs": disjoint_nonpairs,
    "cap_pairs": cap_pairs,
    "cap_general": cap_general,
    "cap1": cap1,
    "cap1_comp": cap1_comp,
    "eps_star": eps_star,
    "L_set": l_set,
    "preproduct_closure": preproduct_closure,
    "pair_power": pair_power,
    "diagonal": diagonal,
    "domain": domain,
    "converse": converse,
    "relprod": relprod,
    "kuratowski_image": kuratowski_image,
    "singleton_image": singleton_image,
    "inclusion": inclusion,
    "intersection_rel": intersection_rel,
    "cap1_rel": cap1_rel,
    "converse_rel": converse_rel,
    "proj1": proj1,
    "proj2": proj2,
    "segment": segment,
    "stage_product": stage_product,
    "segment_defects": segment_defects,
    "nothing": nothing,
    "stage_decomposition": stage_decomposition,
    "case111": case111,
    "case122": case122,
    "case221": case221,
    "case222": case222,
    "case222_avoid": case222_avoid,
    "wedge_avoid": wedge_avoid,
    "comp_cases": comp_cases,
    "unordered_comp": unordered_comp,
    "without_uw": without_uw,
}


def oracle_class(kind: str, frame: Frame, *params) -> frozenset:
    try:
        fn = ORACLES[kind]
    except KeyError:
        raise KeyError(f"unknown oracle kind {kind!r}") from None
    return fn(frame, *params)


def oracle_relation(kind: str, frame: Frame, R: frozenset, S: frozenset | None = None) -> frozenset:
    return oracle_class(kind, frame, R) if S is None else oracle_class(kind, frame, R, S)


def oracle_formula(frame: Frame, formula: str, var: str = "y", env=None) -> frozenset:
    """Comprehension oracle: the class defined by ``formula`` over ``var``."""
    from .evaluate import comprehend

    return comprehend(frame, parse_formula(formula), var, env or {})
