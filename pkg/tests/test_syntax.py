import pytest
from hypothesis import given, settings, strategies as st

from stratiforge.errors import ParseError, UnknownOperator, UnresolvedVariant
from stratiforge.syntax.formulas import (
    And, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or, Pair, parse_formula, print_formula,
)
from stratiforge.syntax.prelude import (
    check_definition, default_prelude, expand, load_prelude, parse_prelude,
)
from stratiforge.syntax.terms import (
    BigUnion, CapA, CapB, Comp, Compl, Empty, Frege1Star, Named, PairSet, Preprod, Sheffer,
    Sing, V, Var, is_primitive, parse_term, print_shared, print_term,
)

A, B, C = Var("A"), Var("B"), Var("C")


# --- parsing -------------------------------------------------------------------

def test_complement_binds_before_infix():
    assert parse_term("x ∩ y′") == Named("inter", (Var("x"), Compl(Var("y"))))
    assert parse_term("x ∩ y'") == parse_term("x ∩ y′")


def test_parenthesized_and_left_assoc():
    assert parse_term("A : (V : V)") == Comp(A, Comp(V, V))
    assert parse_term("A : B : C") == parse_term("(A : B) : C") == Comp(Comp(A, B), C)


def test_mixed_infix_needs_parentheses():
    with pytest.raises(ParseError):
        parse_term("A : B ∪ C")
    assert parse_term("(A : B) ∪ C") == Named("union", (Comp(A, B), C))


def test_constants_and_prefix_forms():
    assert parse_term("1*") == Frege1Star()
    assert parse_term("CapB") == CapB()
    assert parse_term("{∩}") == CapA()
    assert parse_term("∅") == Empty()
    assert parse_term("[=]") == Named("[=]")
    assert parse_term("∪(A)") == BigUnion(A)
    assert parse_term("{A, B}") == PairSet(A, B)
    assert parse_term("{A}") == Sing(A)
    assert parse_term("A ! B") == Preprod(A, B)
    assert parse_term("A^1^1") == Named("pow1", (Named("pow1", (A,)),))
    assert parse_term("A \\/ B") == parse_term("A ∪ B")


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_term("A : ")
    assert info.value.pos == 4
    with pytest.raises(ParseError) as info:
        parse_term("A # B")
    assert info.value.pos == 2


def test_print_examples():
    assert print_term(Comp(V, V)) == "V : V"
    assert print_term(Sheffer(A, A)) == "sheffer(A, A)"


# --- round trip ----------------------------------------------------------------

_names = st.sampled_from(["A", "B", "R", "S", "X", "x", "y2"])
_leaves = st.one_of(
    _names.map(Var), st.just(V), st.just(Empty()), st.just(CapA()), st.just(CapB()),
    st.just(Frege1Star()), st.sampled_from(["[=]", "[∩]", "0", "1", "2", "b.3"]).map(Named),
)


def _extend(sub):
    binary = st.sampled_from([Sheffer, Comp, PairSet, Preprod])
    infix = st.sampled_from(["uprod", "cart", "relprod", "diff", "inter", "union"])
    postfix = st.sampled_from(["pow1", "pairpow", "kimg", "conv"])
    calls = st.sampled_from(["P", "dom", "seg1", "without"])
    return st.one_of(
        st.tuples(binary, sub, sub).map(lambda t: t[0](t[1], t[2])),
        st.tuples(st.sampled_from([Sing, BigUnion, Compl]), sub).map(lambda t: t[0](t[1])),
        st.tuples(infix, sub, sub).map(lambda t: Named(t[0], (t[1], t[2]))),
        st.tuples(postfix, sub).map(lambda t: Named(t[0], (t[1],))),
        st.tuples(calls, st.lists(sub, min_size=1, max_size=3)).map(
            lambda t: Named(t[0], tuple(t[1]))),
    )


terms = st.recursive(_leaves, _extend, max_leaves=12)


@settings(max_examples=1000, deadline=None)
@given(terms)
def test_print_parse_round_trip(t):
    assert parse_term(print_term(t)) == t


# --- formulas ------------------------------------------------------------------

def test_parse_formula_examples():
    assert parse_formula("forall y (y in X <-> y = A)") == Forall(
        "y", Iff(Mem("y", "X"), Eq("y", "A")))
    assert parse_formula("~(x in x)") == Not(Mem("x", "x"))
    assert parse_formula("exists z forall m (m in y -> m = z)") == Exists(
        "z", Forall("m", Implies(Mem("m", "y"), Eq("m", "z"))))
    assert parse_formula("pair(y, a, b) & (p in r | q in r)") == And(
        Pair("y", "a", "b"), Or(Mem("p", "r"), Mem("q", "r")))


formula_vars = st.sampled_from(["x", "y", "z", "A"])
atoms_f = st.one_of(
    st.tuples(formula_vars, formula_vars).map(lambda t: Mem(*t)),
    st.tuples(formula_vars, formula_vars).map(lambda t: Eq(*t)),
    st.tuples(formula_vars, formula_vars, formula_vars).map(lambda t: Pair(*t)),
)
formulas = st.recursive(atoms_f, lambda sub: st.one_of(
    sub.map(Not),
    st.tuples(st.sampled_from([And, Or, Implies, Iff]), sub, sub).map(lambda t: t[0](t[1], t[2])),
    st.tuples(st.sampled_from([Forall, Exists]), formula_vars, sub).map(lambda t: t[0](t[1], t[2])),
), max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_formula_round_trip(f):
    assert parse_formula(print_formula(f)) == f


# --- prelude and expansion -----------------------------------------------------

def test_expand_boolean_examples():
    assert expand(parse_term("A'")) == Sheffer(A, A)
    assert expand(parse_term("A ∪ B")) == Sheffer(Sheffer(A, A), Sheffer(B, B))


def test_expand_numeral_three_system_b():
    t = expand(parse_term("3"), system="B")
    assert is_primitive(t)
    # the numeral unrolls through 2 and 1 down to preproducts of 1* pieces
    assert "1*" in print_shared(t) and "!" in print_shared(t)
    assert t == expand(parse_term("(2 ! 1) ∖ (1* ∪ 2)"), system="B")


def test_expand_is_idempotent_on_primitives():
    t = expand(parse_term("(A : B) ∖ C'"))
    assert expand(t) == t
    assert expand(Comp(Sing(A), CapA())) == Comp(Sing(A), CapA())


def test_every_prelude_definition_expands_with_its_parameters_free():
    defs = default_prelude()
    for name in defs.names():
        for d in defs.entries[name]:
            try:
                got = check_definition(defs, name, "A", {name: d.variant})
            except UnknownOperator:  # built from second-system numerals or primitives
                got = check_definition(defs, name, "B", {name: d.variant})
            assert got == set(d.params), (name, d.variant, got)


def test_variant_choice_changes_expansion():
    as_printed = expand(parse_term("A ∩ B"), variant_choice={"inter": 1})
    repaired = expand(parse_term("A ∩ B"), variant_choice={"inter": 2})
    assert as_printed != repaired
    assert repaired == expand(parse_term("A ∩ B"))  # repaired is the default


def test_expand_errors():
    with pytest.raises(UnknownOperator):
        expand(parse_term("frobnicate(A)"))
    with pytest.raises(UnresolvedVariant):
        expand(parse_term("A ∩ B"), variant_choice={"inter": 7})


def test_bound_names_shadow_constants():
    assert expand(parse_term("H"), bound=("H",)) == Var("H")
    assert expand(parse_term("H")) != Var("H")


def test_prelude_parse_and_env_override(tmp_path, monkeypatch):
    table = parse_prelude("twice(X) := X ∪ X ;\nvariant 1 default: k := V ;\nvariant 2: k := ∅ ;\n")
    assert table.names() == ["k", "twice"]
    path = tmp_path / "p.txt"
    path.write_text("a.compl(A) := sheffer(A, A) ;\nunion(A, B) := sheffer(A', B') ;\n")
    monkeypatch.setenv("STRATIFORGE_PRELUDE", str(path))
    assert load_prelude().names() == ["a.compl", "union"]


def test_print_shared_is_compact_and_faithful():
    t = expand(parse_term("A * B"))
    text = print_shared(t)
    assert len(text) < 5000
    lines = text.splitlines()
    assert all(" := " in line for line in lines[:-1])
