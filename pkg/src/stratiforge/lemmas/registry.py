"""The built-in suite: one record per derived construction of both systems.

Most term lemmas carry an ``expanded`` variant (everything unfolded to
primitives) and a ``stepwise`` variant in which the constructions the lemma
builds on are delegated to their oracles, so each record checks one step.
"""

from __future__ import annotations

from typing import Any

F1, F0, F2 = [2, 2, 1], [2, 2, 0], [2, 2, 2]
G1, G0, G2 = [0, 4, 1], [0, 4, 0], [0, 4, 2]

LEVEL1 = {"kind": "subsets", "rank": 1}
BELOW_TOP = {"kind": "subsets", "below_top": 1}
BELOW_TOP2 = {"kind": "subsets", "below_top": 2}
KREL = {"kind": "krels", "support": 8}
KREL_OVER_W = {"kind": "krels", "support": 8, "in_w": False}
UREL = {"kind": "urels", "support": 8}


def call(kind: str, *args: Any) -> dict:
    return {"kind": kind, "args": list(args)}


def formula(text: str) -> dict:
    return call("formula", text)


A_HOOKS = {
    "P": "powerset", "a.pow1": "singletons_of", "a.uprod": "unordered_product",
    "cart": "cartesian", "dom": "domain", "conv": "converse", "relprod": "relprod",
    "kimg": "kuratowski_image",
}
A_OPAQUE = {
    "a.2": call("frege", 2), "[∩]": call("intersection_rel"), "[=]": call("diagonal"),
    "pi1": call("proj1"), "convrel": call("converse_rel"), "cap1rel": call("cap1_rel"),
}
B_HOOKS = {"b.pow1": "singletons_of", "b.pairpow": "pair_power", "b.uprod": "unordered_product"}
B_OPAQUE = {"b.0": call("zero")}


def step(hooks: dict, opaque: dict, keep: tuple[str, ...] = (), only: tuple[str, ...] | None = None) -> dict:
    """Hooks and opaque bindings, minus the names the lemma itself constructs."""
    def pick(d: dict) -> dict:
        return {k: v for k, v in d.items()
                if k not in keep and (only is None or k in only)}
    out = {}
    h, o = pick(hooks), pick(opaque)
    if h:
        out["hooks"] = h
    if o:
        out["opaque"] = o
    return out


def step_a(keep: tuple[str, ...] = (), only: tuple[str, ...] | None = None) -> dict:
    return step(A_HOOKS, A_OPAQUE, keep, only)


def step_b(keep: tuple[str, ...] = (), only: tuple[str, ...] | None = None) -> dict:
    return step(B_HOOKS, B_OPAQUE, keep, only)


def brace_variants(term: str, extra: dict | None = None, prefix: str = "stepwise") -> list[dict]:
    """One variant per reading of the garbled brace token."""
    names = {1: "empty-singleton", 2: "empty-singleton-complement", 3: "intersection-set"}
    out = []
    for k, label in names.items():
        v = {"name": f"{prefix}-{label}", "term": term, "choices": {"brace0": k}}
        v.update(extra or {})
        out.append(v)
    return out


def lemma(id: str, title: str, anchor: str, system: str, variants: list[dict], frames: list,
          **kw: Any) -> dict:
    doc = {"id": id, "title": title, "anchor": anchor, "system": system,
           "variants": variants, "frames": frames}
    doc.update(kw)
    return doc


def _system_a() -> list[dict]:
    AB = {"A": LEVEL1, "B": LEVEL1}
    out = [
        lemma("LA-01", "complement from the Sheffer stroke", "A' = {x | ¬(x ∈ A ∧ x ∈ A)}", "A",
              [{"name": "sheffer", "term": "A'"}], [F1],
              binders={"A": LEVEL1}, oracle=call("complement", "A")),
        lemma("LA-02", "universal class from the Sheffer stroke", "V = {x | ¬(x ∈ A ∧ x ∈ A')}", "A",
              [{"name": "sheffer", "term": "sheffer(A, A')"}], [F1],
              binders={"A": LEVEL1}, oracle=call("universe")),
        lemma("LA-03", "union", "A ∪ B = {x | ¬(x ∈ A' ∧ x ∈ B')}", "A",
              [{"name": "sheffer", "term": "A ∪ B"}], [F1],
              binders=AB, oracle=call("set_union", "A", "B")),
        lemma("LA-04", "intersection", "A ∩ B = (A' ∪ B)'", "A",
              [{"name": "as-printed", "term": "A ∩ B", "choices": {"inter": 1}},
               {"name": "repaired", "term": "A ∩ B", "choices": {"inter": 2}}], [F1],
              binders=AB, oracle=call("set_inter", "A", "B")),
        lemma("LA-05", "difference", "A ∖ B = A ∩ B'", "A",
              [{"name": "sheffer", "term": "A ∖ B"}], [F1],
              binders=AB, oracle=call("set_diff", "A", "B")),
        lemma("LA-06", "pair set from singletons", "{A, B} = {A} ∪ {B}", "A",
              [{"name": "singletons", "term": "{A, B}"}], [F1, F0],
              binders=AB, oracle=formula("y = A | y = B")),
        lemma("LA-07", "singleton power", "P(A) = (∪(({{A'}} : (V:V)) ∩ {∅}))'", "A",
              brace_variants("P(A)", prefix="expanded"), [F1, G0],
              binders={"A": LEVEL1}, oracle=call("powerset", "A")),
        lemma("LA-08", "all pairs", "2* = V:V", "A",
              [{"name": "composition", "term": "Pairs"}], [F1, F0, G1, G0],
              oracle=call("pairs")),
        lemma("LA-09", "pairs of pairs", "H = P(2*) ∩ 2*", "A",
              [{"name": "expanded", "term": "H"},
               {"name": "stepwise", "term": "H", **step_a(only=("P",))}], [F1, F0, G0],
              oracle=call("pairs_of_pairs")),
        lemma("LA-10", "intermediates of Frege 2", "G = P(2*') ∩ 2*; I = (G:V) ∩ (H:V); J = G ∖ {∅}",
              "A",
              [{"name": "expanded", "checks": _gij()},
               {"name": "stepwise", "checks": _gij(), **step_a(only=("P",))}], [F1, F0, G0]),
        lemma("LA-11", "Frege 2", "2 = ∪((J:(I ∩ {∅})) ∩ {∅}) ∩ 2*", "A",
              brace_variants("2", prefix="expanded")
              + [{"name": "stepwise", "term": "2", **step_a(only=("P",))}], [F1, F0, G0],
              oracle=call("frege", 2)),
        lemma("LA-12", "Frege 1", "1 = 2* ∖ 2", "A",
              [{"name": "expanded", "term": "1"},
               {"name": "stepwise", "term": "1", **step_a(only=("a.2",))}], [F1, F0, G0],
              oracle=call("frege", 1)),
        lemma("LA-13", "singleton power class", "X^1 = P(X) ∩ 1", "A",
              [{"name": "expanded", "term": "X^1"},
               {"name": "stepwise", "term": "X^1", **step_a(only=("P", "a.2"))}], [F1, F0],
              binders={"X": LEVEL1}, oracle=call("singletons_of", "X")),
        lemma("LA-14", "diagonal", "[=] = 1^1", "A",
              [{"name": "expanded", "term": "[=]"},
               {"name": "stepwise", "term": "[=]", **step_a(only=("P", "a.2"))}], [F1, F0, G0],
              oracle=call("diagonal")),
        lemma("LA-15", "domain", "dom(R) = ∪(∪(R) ∩ 1)", "A",
              [{"name": "expanded", "term": "dom(R)"},
               {"name": "stepwise", "term": "dom(R)", **step_a(only=("a.2",))}], [F1, F0, G0],
              binders={"R": KREL}, oracle=call("domain", "R")),
        lemma("LA-16", "unordered product", "A*B = (A^1:V) ∩ (B^1:V)", "A",
              [{"name": "expanded", "term": "A * B"},
               {"name": "stepwise", "term": "A * B", **step_a(only=("a.pow1",))},
               {"name": "stepwise-disjoint", "term": "A * B", **step_a(only=("a.pow1",)),
                "side_conditions": ["disjoint(A, B)"], "sampling": "random"}], [F0],
              binders=AB, oracle=call("unordered_product", "A", "B")),
        lemma("LA-17", "Cartesian product", "A × B = (A^1 * (A*B)) ∩ {∅}", "A",
              brace_variants("A × B", step_a(only=("a.pow1", "a.uprod")))
              + [{"name": "expanded", "term": "A × B"}], [F0, G0],
              binders={"A": BELOW_TOP2, "B": BELOW_TOP2}, oracle=call("cartesian", "A", "B")),
        lemma("LA-18", "intersection relation", "[∩] = (1^1 * {∅}) ∩ {∅}", "A",
              brace_variants("[∩]", step_a(only=("a.pow1", "a.uprod", "a.2")))
              + [{"name": "expanded", "term": "[∩]"}], [F0, G0],
              oracle=call("intersection_rel")),
        lemma("LA-19", "first projection", "π1 = (1^1 × V) ∩ [∩]", "A",
              [{"name": "stepwise-plain-V", "term": "pi1", "choices": {"pi1": 1},
                **step_a(only=("a.pow1", "a.uprod", "cart", "[∩]", "a.2"))},
               {"name": "stepwise-pairs-V", "term": "pi1", "choices": {"pi1": 2},
                **step_a(only=("a.pow1", "a.uprod", "cart", "[∩]", "a.2"))},
               {"name": "expanded", "term": "pi1"}], [F0, G0],
              oracle=call("proj1")),
        lemma("LA-20", "Frege zero", "0 = (∪({∅}))'", "A",
              [{"name": "empty-singleton", "term": "0", "choices": {"brace0": 1}},
               {"name": "empty-singleton-complement", "term": "0", "choices": {"brace0": 2}},
               {"name": "intersection-set", "term": "0", "choices": {"brace0": 3}},
               {"name": "intersection-set-sets-only", "term": "0", "choices": {"brace0": 3},
                "oracle": call("zero_sets")}], [F1, F0, G0],
              oracle=call("zero")),
        lemma("LA-21", "membership lift, L and composed singleton intersection",
              "L = ∪((1^1)^1 : {∈*}); {∈*} = (1^1 * V) ∩ {∅}", "A",
              [{k: v for k, v in dict(b, checks=_cap1_checks()).items() if k != "term"}
               for b in brace_variants("", step_a(only=("a.pow1", "a.uprod", "a.2")))]
              + [{"name": "expanded", "checks": _cap1_checks()}], [F0, G0]),
        lemma("LA-22", "segments and stage products of the relative product",
              "R1 = R ∩ I; R1|S = R1:S", "A",
              [{"name": "stepwise-converse-mark", "checks": _stage_checks(),
                "choices": {"convmark": 1}, **step_a(only=("a.pow1", "a.uprod", "a.2"))},
               {"name": "stepwise-singleton-mark", "checks": _stage_checks(),
                "choices": {"convmark": 2}, **step_a(only=("a.pow1", "a.uprod", "a.2"))},
               {"name": "expanded", "checks": _stage_checks()}], [F0, G0],
              binders={"R": KREL, "S": KREL}),
        lemma("LA-23", "five-stage decomposition of the relative product",
              "R|S = (R1|S) ∪ ((R2 ∪ R3)|S1) ∪ (R2|S2) ∪ (R3|(S2 ∪ S3)) ∪ (R2|S3)", "A",
              [{"name": "semantic", "checks": [
                  {"label": "partition", "semantic": call("segment_defects", "R", "S"),
                   "oracle": call("nothing")},
                  {"label": "decomposition", "semantic": call("stage_decomposition", "R", "S"),
                   "oracle": call("relprod", "R", "S")}]}], [F2, G2],
              binders={"R": KREL_OVER_W, "S": KREL_OVER_W}, min_headroom=2),
        lemma("LA-24", "inclusion relation", "[⊆] = ((V × 1 ∩ [∩]) | ((1 × V) ∩ [∩]'))' ∩ (V × V)",
              "A",
              [{"name": "stepwise", "term": "incl",
                **step_a(only=("a.pow1", "a.uprod", "cart", "relprod", "[∩]", "a.2"))},
               {"name": "expanded", "term": "incl"}], [F0, G0],
              oracle=call("inclusion")),
        lemma("LA-25", "intersection by a singleton element",
              "[∩1] = ((V × 1^4) ∩ [∩]) | ((1^4 × V) ∩ [∩])", "A",
              [{"name": f"stepwise-{label}", "term": "cap1rel", "choices": {"one4": k},
                **step_a(only=("a.pow1", "a.uprod", "cart", "relprod", "[∩]", "a.2"))}
               for k, label in ((1, "double-singleton"), (2, "singleton"))]
              + [{"name": "expanded", "term": "cap1rel"}], [F0, G0],
              oracle=call("cap1_rel")),
        lemma("LA-26", "converse relation and converses", "R^-1 = dom([^-1] | ((R × R) ∩ [=]))",
              "A",
              [{"name": f"stepwise-{label}", "checks": _converse_checks(), "choices": {"convrel": k},
                **step_a(only=("a.pow1", "a.uprod", "cart", "relprod", "dom", "[∩]", "[=]",
                               "cap1rel", "a.2"))}
               for k, label in ((1, "diagonal"), (2, "diagonal-squared"))]
              + [{"name": "expanded", "checks": _converse_checks()}], [F0, G0],
              binders={"R": KREL}),
        lemma("LA-27", "second projection", "π2 = π1 | [^-1]", "A",
              [{"name": "as-printed", "term": "pi2",
                **step_a(only=("relprod", "pi1", "convrel"))},
               {"name": "reversed-order", "term": "convrel | pi1",
                **step_a(only=("relprod", "pi1", "convrel"))},
               {"name": "expanded", "term": "pi2"}], [F0, G0],
              oracle=call("proj2")),
        lemma("LA-28", "Kuratowski image", "R^k = (1^4 * R) ∩ {∩}", "A",
              [{"name": f"stepwise-{label}", "term": "R^k", "choices": {"one4": k},
                **step_a(only=("a.pow1", "a.uprod", "a.2"))}
               for k, label in ((1, "double-singleton"), (2, "singleton"))]
              + [{"name": "expanded", "term": "R^k"}], [F0, G0],
              binders={"R": KREL}, oracle=call("kuratowski_image", "R")),
        lemma("LA-29", "singleton image", "R! = (R^k | ([R^-1]^k)^-1) ∖ (1^4 ∩ (R^4)')", "A",
              [{"name": f"stepwise-{label}", "term": "simg(R)", "choices": {"one4": k},
                **step_a(only=("a.pow1", "a.uprod", "relprod", "kimg", "conv", "a.2"))}
               for k, label in ((1, "double-singleton"), (2, "singleton"))]
              + [{"name": "expanded", "term": "simg(R)"}], [F0, G0],
              binders={"R": KREL}, oracle=call("singleton_image", "R")),
    ]
    return out


def _gij() -> list[dict]:
    return [{"label": "G", "term": "G", "oracle": call("pairs_of_nonpairs")},
            {"label": "I", "term": "I", "oracle": call("nonpair_with_pair")},
            {"label": "J", "term": "J", "oracle": call("disjoint_nonpairs")}]


def _cap1_checks() -> list[dict]:
    return [{"label": "eps_star", "term": "eps_star", "oracle": call("eps_star")},
            {"label": "L", "term": "L", "oracle": call("L_set")},
            {"label": "cap1:cap1", "term": "cap1comp", "oracle": call("cap1_comp")}]


def _stage_checks() -> list[dict]:
    segs = [("R1", "seg1(R)", 0), ("R2", "R2(R, S)", 1), ("R3", "R3(R, S)", 2),
            ("S1", "seg1(S)", 3), ("S2", "S2(R, S)", 4), ("S3", "S3(R, S)", 5)]
    out = [{"label": lbl, "term": t, "oracle": call("segment", "R", "S", i)} for lbl, t, i in segs]
    out += [{"label": f"stage{k}", "term": f"stage{k}(R, S)",
             "oracle": call("stage_product", "R", "S", k)} for k in range(1, 6)]
    return out


def _converse_checks() -> list[dict]:
    return [{"label": "converse-relation", "term": "convrel", "oracle": call("converse_rel")},
            {"label": "converse", "term": "conv(R)", "oracle": call("converse", "R")}]


def _system_b() -> list[dict]:
    RS = {"R": BELOW_TOP, "S": BELOW_TOP}
    URS = {"R": UREL, "S": UREL}
    UW = {"u": {"kind": "derived", "oracle": call("zero")},
          "w": {"kind": "derived", "oracle": call("frege", 1)}}
    numerals = [{"label": str(n), "term": str(n), "oracle": call("frege", n)} for n in range(1, 5)]
    return [
        lemma("LB-01", "primitive operators of the second system",
              "complements, pairing, set union, 1*, preproducts, intersection relation set", "B",
              [{"name": "primitives", "checks": [
                  {"label": "complement", "term": "A'", "oracle": formula("~(y in A)")},
                  {"label": "pairing", "term": "{A, B}", "oracle": formula("y = A | y = B")},
                  {"label": "union", "term": "∪(A)", "oracle": formula("exists k (k in A & y in k)")},
                  {"label": "frege1star", "term": "1*",
                   "oracle": formula("exists z forall m (m in y -> m = z)")},
                  {"label": "preproduct", "term": "A ! B", "oracle": formula(
                      "exists r exists s (r in A & s in B & forall z (z in y -> z in r | z in s))")},
                  {"label": "intersection", "term": "CapB",
                   "oracle": formula("exists z forall m (m in y -> z in m)")}]}], [F1, G1],
              binders={"A": LEVEL1, "B": LEVEL1}),
        lemma("LB-02", "Frege naturals", "1 = 1* ∖ {0}; 2 = (1!1) ∖ 1*", "B",
              [{"name": "class-difference", "checks": numerals, "choices": {"b.1": 1},
                **step_b(only=("b.0",))},
               {"name": "element-removal", "checks": numerals, "choices": {"b.1": 2},
                **step_b(only=("b.0",))},
               {"name": "class-difference-sets-only-zero", "checks": numerals,
                "choices": {"b.1": 1}, "opaque": {"b.0": call("zero_sets")}},
               {"name": "expanded", "checks": numerals, "choices": {"b.1": 1}}], [F1, F0]),
        lemma("LB-03", "singleton power", "R^1 = ({R}!{R}) ∩ 1", "B",
              [{"name": "stepwise", "term": "R^1", **step_b(only=("b.0",))},
               {"name": "expanded", "term": "R^1"}], [F1, F0],
              binders={"R": BELOW_TOP}, oracle=call("singletons_of", "R")),
        lemma("LB-04", "pair power", "R^pair = (R^1 ! R^1) ∖ {0}", "B",
              [{"name": "stepwise-zero-class", "term": "R^pair", "choices": {"b.pairpow": 1},
                **step_b(only=("b.0", "b.pow1"))},
               {"name": "stepwise-zero-element", "term": "R^pair", "choices": {"b.pairpow": 2},
                **step_b(only=("b.0", "b.pow1"))},
               {"name": "expanded", "term": "R^pair"}], [F1, F0],
              binders={"R": BELOW_TOP}, oracle=call("pair_power", "R")),
        lemma("LB-05", "corrected unordered product",
              "R*S = [(R^1 ! S^1) ∖ ((R ∩ S)^pair ∪ (S ∩ R)^pair)] ∖ {0}", "B",
              [{"name": "stepwise-zero-class", "term": "R * S", "choices": {"b.uprod": 1},
                **step_b(only=("b.0", "b.pow1", "b.pairpow"))},
               {"name": "stepwise-zero-element", "term": "R * S", "choices": {"b.uprod": 2},
                **step_b(only=("b.0", "b.pow1", "b.pairpow"))},
               {"name": "expanded", "term": "R * S"}], [F1, F0],
              binders=RS, oracle=call("unordered_product", "R", "S")),
        lemma("LB-06", "triple product", "X*Y*Z = ((X^1 ! Y^1 ! Z^1) ∩ 3) ∪ ...", "B",
              [{"name": "stepwise", "term": "triple(X, Y, Z)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "term": "triple(X, Y, Z)"}], [F1, F0],
              binders={"X": BELOW_TOP, "Y": BELOW_TOP, "Z": BELOW_TOP},
              oracle=call("triple_product", "X", "Y", "Z")),
        lemma("LB-07", "case sets of the composition",
              "R:S^{1,1,1} = (R ∩ 1) ∩ (S ∩ 1)", "B",
              [{"name": "stepwise", "checks": _case_checks(),
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "checks": _case_checks()}], [F1, F0, G1],
              binders=URS),
        lemma("LB-08", "pairs avoiding two elements", "X^{∖u,w} = X ∩ ((V ∖ {u,w}) * (V ∖ {u,w}))",
              "B",
              [{"name": "stepwise", "term": "without(X, u, w)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "term": "without(X, u, w)"}], [F2, G2],
              binders={"X": UREL, **UW}, oracle=call("without_uw", "X", "u", "w"),
              min_headroom=2),
        lemma("LB-09", "wedge sets", "R ∧ S^{u,w} = (R∧S^{u,w1} ∩ R∧S^{u,w2} ∩ R∧S^{u,w3}) ∩ {∩}^1",
              "B",
              [{"name": "stepwise", "term": "wedge(R, S, u, w)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "term": "wedge(R, S, u, w)"}], [F2, G2],
              binders={**URS, **UW}, oracle=call("wedge_avoid", "R", "S", "u", "w"),
              min_headroom=2),
        lemma("LB-10", "doubleton case avoiding two elements", "R:S^{2,2,2,(u,w)} = ∪(R ∧ S^{u,w}) ∩ 2",
              "B",
              [{"name": "stepwise", "term": "case222uw(R, S, u, w)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "term": "case222uw(R, S, u, w)"}], [F2, G2],
              binders={**URS, **UW}, oracle=call("case222_avoid", "R", "S", "u", "w"),
              min_headroom=2),
        lemma("LB-11", "doubleton case by numeral pairs",
              "R:S^{2,2,2} = R:S^{2,2,2,(0,1)} ∪ R:S^{2,2,2,(2,3)} ∪ R:S^{2,2,2,(4,5)} ∪ R:S^{2,2,2,(6,7)}",
              "B",
              [{"name": "stepwise", "term": "case222(R, S)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))},
               {"name": "expanded", "term": "case222(R, S)"}], [F2, G2],
              binders=URS, oracle=call("case222", "R", "S"), min_headroom=2),
        lemma("LB-12", "case decomposition of the composition",
              "R:S = R:S^{1,1,1} ∪ R:S^{1,2,2} ∪ R:S^{2,2,1} ∪ R:S^{2,2,2}", "B",
              [{"name": "primitive", "term": "R : S"},
               {"name": "case-terms", "term": "compB(R, S)",
                **step_b(only=("b.0", "b.pow1", "b.uprod"))}], [F1, F0, G1],
              binders=URS, oracle=call("comp_cases", "R", "S")),
    ]


def _case_checks() -> list[dict]:
    return [{"label": name, "term": f"{name}(R, S)", "oracle": call(name, "R", "S")}
            for name in ("case111", "case122", "case221")]


def default_suite_doc() -> dict:
    return {"lemmas": _system_a() + _system_b()}


_cache: list | None = None


def default_suite() -> list:
    """The built-in registry, validated through the same loader as user suites."""
    global _cache
    if _cache is None:
        from .model import load_suite
        _cache = load_suite(default_suite_doc())
    return _cache
