import json
from itertools import combinations

import pytest

from stratiforge.errors import SchemaError, UnknownLemmaField
from stratiforge.lemmas import (
    INCONCLUSIVE, REFUTED, VERIFIED, default_suite, default_suite_doc, load_expected, load_suite,
    parse_frame, replay, run_suite, sample_envs, unexpected_refutations, verify_lemma,
)
from stratiforge.lemmas.engine import frame_for
from stratiforge.oracle import decode_kpair, upair_members
from stratiforge.syntax.prelude import expand
from stratiforge.syntax.terms import parse_term


def spec_of(lemma_id):
    return next(s for s in default_suite() if s.id == lemma_id)


def outcome(verdict, variant):
    return next(o for o in verdict.outcomes if o.variant == variant)


# --- registry and loader -----------------------------------------------------------

def test_default_suite_has_41_entries():
    suite = default_suite()
    assert len(suite) == 41
    assert len({s.id for s in suite}) == 41
    assert [s.id for s in suite][:3] == ["LA-01", "LA-02", "LA-03"]
    assert sum(s.system == "B" for s in suite) == 12


def test_round_trips_through_json():
    doc = json.loads(json.dumps(default_suite_doc()))
    assert [s.id for s in load_suite(doc)] == [s.id for s in default_suite()]


def _one_lemma(**overrides):
    lemma = {"id": "T-1", "title": "t", "system": "A", "frames": [[0, 3, 0]],
             "binders": {"A": {"kind": "subsets", "rank": 3}},
             "oracle": {"kind": "complement", "args": ["A"]},
             "variants": [{"name": "v", "term": "A'"}]}
    lemma.update(overrides)
    return {"lemmas": [lemma]}


def test_minimal_suite_loads_and_verifies():
    (spec,) = load_suite(_one_lemma())
    v = verify_lemma(spec, (0, 3, 0), seed=1)
    assert outcome(v, "v").status == VERIFIED
    assert outcome(v, "v").cases == 16


def test_duplicate_ids_rejected():
    doc = _one_lemma()
    doc["lemmas"].append(dict(doc["lemmas"][0]))
    with pytest.raises(SchemaError):
        load_suite(doc)


@pytest.mark.parametrize("bad", [
    _one_lemma(oracle={"kind": "no_such_oracle", "args": []}),
    _one_lemma(variants=[{"name": "v", "term": "A : "}]),
    _one_lemma(variants=[{"name": "v", "term": "frobnicate(A)"}]),
    _one_lemma(variants=[{"name": "v", "term": "A ∪ Q"}]),
    _one_lemma(variants=[{"name": "v"}]),
    _one_lemma(frames=[[0, 3]]),
    _one_lemma(variants=[{"name": "v", "term": "A'", "side_conditions": ["bogus(A)"]}]),
])
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        load_suite(bad)


def test_invalid_json_text():
    with pytest.raises(SchemaError):
        load_suite("{not json")


def test_unknown_fields_are_named():
    with pytest.raises(UnknownLemmaField, match="colour"):
        load_suite(_one_lemma(colour="red"))
    with pytest.raises(UnknownLemmaField):
        load_suite(_one_lemma(variants=[{"name": "v", "term": "A'", "weight": 2}]))


def test_every_variant_expands():
    for spec in default_suite():
        for v in spec.variants:
            for c in v.checks:
                if c.term is not None:
                    expand(parse_term(c.term), variant_choice=v.choices, system=spec.system,
                           bound=tuple(spec.binders), opaque=tuple(v.opaque) + tuple(v.hooks))


# --- sampling ------------------------------------------------------------------------

def test_exhaustive_sampling_over_level_one_slice():
    spec = spec_of("LA-13")
    envs = list(sample_envs(spec, spec.variants[0], frame_for(2, 2, 1), 42))
    assert len(envs) == 64
    assert len({env["X"] for env in envs}) == 64


def test_sampling_is_seed_deterministic():
    spec = spec_of("LA-15")
    v = spec.variants[1]
    fr = frame_for(2, 2, 0)
    a = list(sample_envs(spec, v, fr, 5))
    assert a == list(sample_envs(spec, v, fr, 5))
    assert a != list(sample_envs(spec, v, fr, 6))
    assert len(a) == 100
    for env in a:
        assert all(decode_kpair(fr.universe, e) for e in env["R"])


def test_side_condition_sampling():
    spec = spec_of("LA-16")
    v = next(v for v in spec.variants if v.name == "stepwise-disjoint")
    envs = list(sample_envs(spec, v, frame_for(2, 2, 0), 42))
    assert len(envs) == 100
    assert all(not (env["A"] & env["B"]) for env in envs)


def test_unordered_relations_are_pairs():
    spec = spec_of("LB-12")
    fr = frame_for(2, 2, 0)
    for env in sample_envs(spec, spec.variants[0], fr, 42):
        assert all(upair_members(fr.universe, e) for e in env["R"] | env["S"])


# --- verdicts ------------------------------------------------------------------------

def test_la13_verified_64():
    v = verify_lemma(spec_of("LA-13"), (2, 2, 1), seed=42)
    o = outcome(v, "stepwise")
    assert (o.status, o.cases) == (VERIFIED, 64)


def test_la04_as_printed_refuted_repaired_verified():
    v = verify_lemma(spec_of("LA-04"), (2, 2, 1), seed=42)
    assert outcome(v, "as-printed").status == REFUTED
    assert outcome(v, "as-printed").counterexample is not None
    assert outcome(v, "repaired").status == VERIFIED


def _independent_uprod_mismatch(frame):
    """Brute force over all (A, B) from the level-1 slice: does the term side
    (all pairs in W meeting A and meeting B) ever differ from {{a,b} : a∈A, b∈B}?"""
    U, W = frame.universe, frame.W
    level1 = sorted(e for e in W if U.ranks[e] <= 1)
    pairs = [e for e in W if not U.is_atom(e) and len(U.exts[e]) in (1, 2)]
    subsets = [frozenset(c) for k in range(len(level1) + 1) for c in combinations(level1, k)]
    for A in subsets:
        for B in subsets:
            term = {p for p in pairs if U.exts[p] & A and U.exts[p] & B}
            oracle = {U.ext_index[frozenset({a, b})] for a in A for b in B}
            if term != oracle:
                return A, B
    return None


def test_la16_unconditioned_refuted_with_replayable_counterexample():
    spec = spec_of("LA-16")
    v = verify_lemma(spec, (2, 2, 0), seed=42)
    o = outcome(v, "stepwise")
    assert o.status == REFUTED
    assert (_independent_uprod_mismatch(frame_for(2, 2, 0)) is not None) == (o.status == REFUTED)
    cx = o.counterexample
    assert replay(spec, "stepwise", (2, 2, 0), cx)
    # A = B = one level-1 element: the term side picks up an extra pair
    assert cx["env"]["A"] == cx["env"]["B"] and len(cx["env_ids"]["A"]) == 1
    assert cx["term_only"] and not cx["oracle_only"]


def test_la16_disjoint_verified_100():
    o = outcome(verify_lemma(spec_of("LA-16"), (2, 2, 0), seed=42), "stepwise-disjoint")
    assert (o.status, o.cases) == (VERIFIED, 100)


def test_replay_rejects_tampered_counterexample():
    spec = spec_of("LA-16")
    cx = dict(outcome(verify_lemma(spec, (2, 2, 0), seed=42), "stepwise").counterexample)
    cx["term_only"] = []
    assert not replay(spec, "stepwise", (2, 2, 0), cx)


def test_headroom_shortfall_is_inconclusive():
    v = verify_lemma(spec_of("LA-23"), (2, 2, 1), seed=42)
    o = v.outcomes[0]
    assert o.status == INCONCLUSIVE and "headroom" in o.reason


def test_every_refutation_replays():
    report = run_suite(default_suite(), None, 42)
    suite = {s.id: s for s in default_suite()}
    for o in report.outcomes:
        if o.status == REFUTED:
            assert replay(suite[o.lemma], o.variant, parse_frame(o.frame), o.counterexample), o


# --- suites and reports ------------------------------------------------------------

def test_empty_registry():
    r = run_suite([], None, 1)
    assert r.outcomes == [] and r.counts() == {VERIFIED: 0, REFUTED: 0, INCONCLUSIVE: 0}


def test_report_is_byte_deterministic_and_parallel_safe():
    picks = [spec_of(i) for i in ("LA-04", "LA-16", "LB-02")]
    a = run_suite(picks, None, 9).to_json()
    assert a == run_suite(picks, None, 9).to_json()
    assert a == run_suite(picks, None, 9, parallelism=2).to_json()
    doc = json.loads(a)
    assert set(doc) == {"seed", "frames", "counts", "summary", "results"}
    assert all(row["millis"] is None for row in doc["results"])


def test_timings_are_opt_in():
    r = run_suite([spec_of("LA-01")], [(2, 2, 1)], 1)
    assert all(isinstance(row["millis"], float) for row in json.loads(r.to_json(True))["results"])


def test_f_only_run_verifies_the_core_catalog():
    r = run_suite(default_suite(), [(2, 2, 1)], 42)
    for lemma in ["LA-01", "LA-02", "LA-03", "LA-04", "LA-05", "LA-06", "LA-08", "LA-12",
                  "LA-13", "LA-14", "LA-15", "LB-12"]:
        assert r.lemma_status(lemma) == VERIFIED, lemma


def test_summary_names_variant_and_expected_flags():
    r = run_suite([spec_of("LA-16"), spec_of("LA-20")], None, 42)
    row = next(x for x in r.summary if x["lemma"] == "LA-16")
    assert row["variant"] == "stepwise-disjoint"
    assert row["variants"]["stepwise"] == REFUTED
    assert unexpected_refutations(r) == ["LA-20"]
    assert unexpected_refutations(r, {"LA-20": REFUTED}) == []
    assert load_expected(r.to_json()) == {"LA-16": VERIFIED, "LA-20": REFUTED}
    assert load_expected('{"LA-20": "Refuted"}') == {"LA-20": REFUTED}


def test_parse_frame():
    assert parse_frame("2,2,1") == (2, 2, 1)
    assert parse_frame("0, 4") == (0, 4, 0)
    with pytest.raises(ValueError):
        parse_frame("1")
