import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from stratiforge.errors import UnboundVar, Unrepresentable
from stratiforge.evaluate import (
    PRIMITIVE_BODIES, comprehend, eval_comp_naive, eval_term, headroom_of, primitive_term,
)
from stratiforge.syntax.formulas import parse_formula
from stratiforge.syntax.prelude import expand
from stratiforge.syntax.terms import (
    BigUnion, CapA, CapB, Comp, Frege1Star, Named, PairSet, Preprod, Sheffer, Sing, V, Var,
    parse_term,
)
from stratiforge.universe import Frame, build_universe, make_frame

from conftest import ids

A, B, R, S = Var("A"), Var("B"), Var("R"), Var("S")


def subsets(xs):
    xs = sorted(xs)
    return [frozenset(c) for k in range(len(xs) + 1) for c in combinations(xs, k)]


def outcome(fn):
    try:
        return fn()
    except Unrepresentable:
        return "Unrepresentable"


def agree(frame, name, env):
    body, params = PRIMITIVE_BODIES[name]
    term = primitive_term(name, tuple(Var(p) for p in params))
    got = outcome(lambda: eval_term(term, frame, env))
    want = outcome(lambda: comprehend(frame, parse_formula(body), "y", env))
    return got == want


@pytest.mark.parametrize("name", sorted(PRIMITIVE_BODIES))
def test_definitional_equivalence_exhaustive_u03(u03, name):
    params = PRIMITIVE_BODIES[name][1]
    classes = subsets(u03.W)
    for combo in product(classes, repeat=len(params)):
        assert agree(u03, name, dict(zip(params, combo))), (name, combo)


@pytest.mark.parametrize("name", sorted(PRIMITIVE_BODIES))
def test_definitional_equivalence_random_f(f1, f0, name):
    params = PRIMITIVE_BODIES[name][1]
    rng = random.Random(f"eval:{name}")
    for frame in (f1, f0):
        W = sorted(frame.W)
        for _ in range(200 if params else 1):
            env = {p: frozenset(x for x in W if rng.random() < 0.3) for p in params}
            assert agree(frame, name, env)


# --- worked examples on U(0,3) ----------------------------------------------------

def test_sheffer_example(u03):
    env = {"A": ids(u03, "{}"), "B": ids(u03, "{}", "{{}}")}
    assert eval_term(Sheffer(A, B), u03, env) == ids(u03, "{{}}", "{{{}}}", "{{},{{}}}")


def test_comp_example(u03):
    env = {"R": ids(u03, "{{},{{}}}"), "S": ids(u03, "{{{}}}")}
    assert eval_term(Comp(R, S), u03, env) == ids(u03, "{{},{{}}}")


def test_constant_examples(u03):
    assert eval_term(CapA(), u03) == ids(u03, "{{{}}}")
    assert eval_term(CapB(), u03) == ids(u03, "{}", "{{{}}}")
    assert eval_term(Frege1Star(), u03) == ids(u03, "{}", "{{}}", "{{{}}}")


def test_preprod_example(u03):
    env = {"R": ids(u03, "{{}}"), "S": ids(u03, "{{}}")}
    assert eval_term(Preprod(R, S), u03, env) == ids(u03, "{}", "{{}}")


def test_v_colon_v_is_all_pairs(u03):
    assert eval_term(Comp(V, V), u03) == ids(u03, "{{}}", "{{{}}}", "{{},{{}}}")


def test_comprehend_examples(u03):
    assert comprehend(u03, parse_formula("~(y in y)"), "y") == u03.W
    env = {"A": ids(u03, "{{},{{}}}")}
    got = comprehend(u03, parse_formula("exists k (k in A & y in k)"), "y", env)
    assert got == ids(u03, "{}", "{{}}") == eval_term(BigUnion(A), u03, env)


def test_unbound_variable(u03):
    with pytest.raises(UnboundVar):
        eval_term(Sheffer(A, B), u03, {"A": frozenset()})
    with pytest.raises(UnboundVar):
        comprehend(u03, parse_formula("y in A"), "y")


def test_singleton_reification(u03):
    assert eval_term(Sing(A), u03, {"A": ids(u03, "{}")}) == ids(u03, "{{}}")
    with pytest.raises(Unrepresentable):
        eval_term(Sing(A), u03, {"A": ids(u03, "{{{}}}", "{{},{{}}}")})
    with pytest.raises(Unrepresentable):
        eval_term(PairSet(A, B), u03, {"A": u03.W, "B": frozenset()})


def test_headroom_examples():
    assert headroom_of(Sheffer(A, B)) == 0
    assert headroom_of(Sing(Sing(A))) == 2
    assert headroom_of(expand(parse_term("{{A'}} : (V : V)"))) == 2


def test_hooks_give_meaning_to_opaque_nodes(u03):
    t = Named("twice", (A,))
    assert eval_term(t, u03, {"A": ids(u03, "{}")}, {"twice": lambda x: x | ids(u03, "{{}}")}) \
        == ids(u03, "{}", "{{}}")
    with pytest.raises(TypeError):
        eval_term(t, u03, {"A": frozenset()})


# --- properties on F --------------------------------------------------------------

F0 = make_frame(2, 2, 0)
F1 = make_frame(2, 2, 1)
pair_ids = sorted(e for e in F0.W if len(F0.universe.exts[e]) in (1, 2))
classes_f1 = st.frozensets(st.sampled_from(sorted(F1.W)))
relations_f0 = st.frozensets(st.sampled_from(pair_ids), max_size=12)


@settings(max_examples=40, deadline=None)
@given(relations_f0, relations_f0)
def test_comp_matches_naive_loop_and_is_symmetric(Rc, Sc):
    env = {"R": Rc, "S": Sc}
    got = eval_term(Comp(R, S), F0, env)
    assert got == eval_comp_naive(F0, Rc, Sc)
    assert got == eval_term(Comp(S, R), F0, env)


@settings(max_examples=150, deadline=None)
@given(classes_f1, classes_f1)
def test_boolean_facts(a, b):
    env = {"A": a, "B": b}
    assert eval_term(expand(parse_term("A'")), F1, env) == F1.W - a
    assert eval_term(V, F1, env) == F1.W
    assert eval_term(expand(parse_term("A ∪ B")), F1, env) == a | b
    assert eval_term(expand(parse_term("A ∩ B")), F1, env) == a & b
    assert eval_term(expand(parse_term("A ∖ B")), F1, env) == a - b


U03, U04 = build_universe(0, 3), build_universe(0, 4)
SMALL = Frame(U03, U03.all, 0)
BIG = Frame(U04, U03.all, 0)  # same W inside a taller universe; ids 0..3 coincide
small_classes = st.frozensets(st.sampled_from(range(4)))
small_terms = st.recursive(
    st.sampled_from([A, B, V, CapA(), CapB(), Frege1Star()]),
    lambda sub: st.one_of(
        st.tuples(st.sampled_from([Sheffer, Comp, Preprod]), sub, sub).map(lambda t: t[0](t[1], t[2])),
        st.tuples(st.sampled_from([Sing, BigUnion]), sub).map(lambda t: t[0](t[1])),
    ),
    max_leaves=6,
)


@settings(max_examples=200, deadline=None)
@given(small_terms, small_classes, small_classes)
def test_monotone_frame_growth(t, a, b):
    assert [U04.exts[i] for i in range(4)] == [U03.exts[i] for i in range(4)]
    env = {"A": a, "B": b}
    try:
        small = eval_term(t, SMALL, env)
    except Unrepresentable:
        return  # the taller universe may reify what the short one cannot
    assert eval_term(t, BIG, env) == small
