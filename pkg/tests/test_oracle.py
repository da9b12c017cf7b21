import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from stratiforge.errors import Unrepresentable
from stratiforge.evaluate import comprehend
from stratiforge.oracle import (
    ORACLES, cap_general, cap_pairs, cartesian, comp_cases, converse, decode_kpair, diagonal,
    domain, encode_krel, frege, kpair, krel_pairs, oracle_class, oracle_formula,
    oracle_relation, powerset, relprod, segment_defects, segment_relation, stage_decomposition,
    unordered_comp, unordered_product, zero,
)
from stratiforge.syntax.formulas import parse_formula
from stratiforge.universe import make_frame, reify

from conftest import ids


def subsets(xs):
    xs = sorted(xs)
    return [frozenset(c) for k in range(len(xs) + 1) for c in combinations(xs, k)]


def test_class_examples_u03(u03):
    assert frege(u03, 1) == ids(u03, "{{}}", "{{{}}}")
    assert powerset(u03, ids(u03, "{}", "{{}}")) == u03.W
    assert unordered_product(u03, ids(u03, "{}"), ids(u03, "{{}}")) == ids(u03, "{{},{{}}}")
    assert zero(u03) == ids(u03, "{}")


def test_zero_includes_atoms_by_default(f0):
    assert zero(f0) == ids(f0, "@0", "@1", "{}")
    assert zero(f0, include_atoms=False) == ids(f0, "{}")
    assert oracle_class("zero_sets", f0) == ids(f0, "{}")


def test_functional_oracles_raise_outside_w(u03):
    with pytest.raises(Unrepresentable):
        unordered_product(u03, ids(u03, "{{{}}}"), ids(u03, "{{},{{}}}"))
    wide = u03.widened(lenient=True)
    assert unordered_product(wide, ids(u03, "{{{}}}", "{}"), ids(u03, "{{},{{}}}")) == frozenset()


def test_relation_examples(g0):
    e, s = reify(g0, set()), reify(g0, {reify(g0, set())})  # ∅ and {∅}
    R = encode_krel(g0, [(e, s)])
    assert domain(g0, R) == {e}
    assert oracle_relation("domain", g0, R) == {e}
    assert relprod(g0, R, encode_krel(g0, [(s, s)])) == R
    assert oracle_relation("relprod", g0, R, encode_krel(g0, [(s, s)])) == R
    assert krel_pairs(g0.universe, converse(g0, R)) == [(s, e)]


def test_kpair_decoding_is_unique(g0):
    U = g0.universe
    seen = {}
    for a in g0.W:
        for b in g0.W:
            try:
                k = kpair(g0, a, b)
            except Unrepresentable:
                continue
            assert decode_kpair(U, k) == (a, b)
            assert seen.setdefault(k, (a, b)) == (a, b)


def test_diagonal_shape(g0, u03):
    for fr in (g0, u03):
        for k in diagonal(fr):
            a, b = decode_kpair(fr.universe, k)
            assert a == b
            assert k == reify(fr, {reify(fr, {a})})


def test_segment_examples(g0):
    e, s = reify(g0, set()), reify(g0, {reify(g0, set())})
    ident = encode_krel(g0, [(e, e)])
    R1, R2, R3, *_ = segment_relation(g0, ident, encode_krel(g0, [(e, s)]))
    assert (R1, R2, R3) == (ident, frozenset(), frozenset())
    R, S = encode_krel(g0, [(e, s)]), encode_krel(g0, [(s, e)])
    R1, R2, R3, S1, S2, S3 = segment_relation(g0, R, S)
    assert R2 == R and S2 == S and not (R1 | R3 | S1 | S3)
    R1, R2, R3, S1, S2, S3 = segment_relation(g0, R, R)
    assert R3 == R and S3 == R


def test_cap_relationships(u03, f0, f1):
    for fr in (u03, f0, f1):
        cp = cap_pairs(fr)
        assert cp <= frege(fr, 1) | frege(fr, 2)
        assert cp <= cap_general(fr)


# --- cross-oracle consistency with comprehension ---------------------------------

KP = "exists s exists t (pair({r}, s, t) & pair(s, {a}, {a}) & pair(t, {a}, {b}))"

FORMULAS = {
    "frege1": ("exists z forall m (m in y <-> m = z)", lambda fr, A, B: frege(fr, 1)),
    "powerset": ("forall z (z in y -> z in A)", lambda fr, A, B: powerset(fr, A)),
    "singletons_of": ("exists z (z in A & forall m (m in y <-> m = z))",
                      lambda fr, A, B: oracle_class("singletons_of", fr, A)),
    "unordered_product": ("exists a exists b (a in A & b in B & pair(y, a, b))",
                          lambda fr, A, B: unordered_product(fr, A, B)),
    "cap_pairs": ("exists a exists b exists c (pair(y, a, b) & c in a & c in b)",
                  lambda fr, A, B: cap_pairs(fr)),
    "cap_general": ("exists z forall m (m in y -> z in m)", lambda fr, A, B: cap_general(fr)),
    "zero": ("forall m ~(m in y)", lambda fr, A, B: zero(fr)),
    "diagonal": (KP.format(r="y", a="a", b="a").join(["exists a (", ")"]),
                 lambda fr, A, B: diagonal(fr)),
    "eps_star": ("exists p exists v exists x exists s"
                 " (pair(y, p, v) & pair(p, s, s) & pair(s, x, x) & s in v)",
                 lambda fr, A, B: oracle_class("eps_star", fr)),
    "L_set": ("exists m (m in y & ~(exists z pair(m, z, z)))",
              lambda fr, A, B: oracle_class("L_set", fr)),
    "unordered_comp": ("exists a exists b exists c exists r exists s"
                       " (pair(y, a, c) & r in A & s in B & pair(r, a, b) & pair(s, b, c))",
                       lambda fr, A, B: unordered_comp(fr, A, B)),
    "comp_cases": ("exists a exists b exists c exists r exists s"
                   " (pair(y, a, c) & r in A & s in B & pair(r, a, b) & pair(s, b, c))",
                   lambda fr, A, B: comp_cases(fr, A, B)),
    "domain": ("exists r exists b (r in A & " + KP.format(r="r", a="y", b="b") + ")",
               lambda fr, A, B: domain(fr, frozenset(r for r in A if decode_kpair(fr.universe, r)))),
}


def _cross_check(fr, key, A, B):
    text, fn = FORMULAS[key]
    if key == "domain":
        A = frozenset(r for r in A if decode_kpair(fr.universe, r))
    try:
        want = fn(fr, A, B)
    except Unrepresentable:
        return
    assert comprehend(fr, parse_formula(text), "y", {"A": A, "B": B}) == want, key


@pytest.mark.parametrize("key", sorted(FORMULAS))
def test_cross_oracle_exhaustive_u03(u03, key):
    classes = subsets(u03.W)
    for A in classes:
        for B in classes:
            _cross_check(u03, key, A, B)


@pytest.mark.parametrize("key", sorted(FORMULAS))
def test_cross_oracle_random_f(f0, key):
    rng = random.Random(f"cross:{key}")
    W = sorted(f0.W)
    pairs = [e for e in W if len(f0.universe.exts[e]) in (1, 2)]
    for _ in range(15):
        pool = pairs if key in ("unordered_comp", "comp_cases") else W
        A = frozenset(rng.sample(pool, rng.randint(0, 6)))
        B = frozenset(rng.sample(pool, rng.randint(0, 6)))
        _cross_check(f0, key, A, B)


def test_oracle_formula_helper(u03):
    assert oracle_formula(u03, "~(y in y)") == u03.W
    assert oracle_formula(u03, "y in A", env={"A": ids(u03, "{}")}) == ids(u03, "{}")


def test_registry_is_callable():
    assert {"frege", "powerset", "relprod", "case222", "segment_defects"} <= set(ORACLES)
    with pytest.raises(KeyError):
        oracle_class("no-such-kind", make_frame(0, 2))


# --- segment partition and stage decomposition ------------------------------------

G0 = make_frame(0, 4, 0)
F_WIDE = make_frame(2, 2, 2).widened()
KPAIRS_G0 = sorted(e for e in G0.W if decode_kpair(G0.universe, e))
KPAIRS_F = sorted(e for e in F_WIDE.W if decode_kpair(F_WIDE.universe, e)
                  and set(decode_kpair(F_WIDE.universe, e)) <= {0, 1})


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_partition_and_stage_decomposition(data):
    fr, pool = data.draw(st.sampled_from([(G0, KPAIRS_G0), (F_WIDE, KPAIRS_F)]))
    R = data.draw(st.frozensets(st.sampled_from(pool), max_size=8))
    S = data.draw(st.frozensets(st.sampled_from(pool), max_size=8))
    assert segment_defects(fr, R, S) == frozenset()
    R1, R2, R3, S1, S2, S3 = segment_relation(fr, R, S)
    assert R1 | R2 | R3 == R and S1 | S2 | S3 == S
    try:
        want = relprod(fr, R, S)
    except Unrepresentable:
        return
    assert stage_decomposition(fr, R, S) == want


def test_cartesian_matches_relprod_domain(g0):
    e, s = reify(g0, set()), reify(g0, {reify(g0, set())})
    C = cartesian(g0, {e}, {s})
    assert krel_pairs(g0.universe, C) == [(e, s)]
