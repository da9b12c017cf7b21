"""Sampling, per-variant verification, suite runs and JSON reports."""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Iterator, Mapping, Sequence

from ..errors import SizeCap, Unrepresentable
from ..evaluate import eval_term
from ..oracle import ORACLES, closed_kpairs, closed_upairs, decode_kpair, oracle_formula
from ..universe import Frame, make_frame
from .model import FORMULA_ORACLE, Check, LemmaSpec, OracleCall, Variant, expand_check

VERIFIED, REFUTED, INCONCLUSIVE = "Verified", "Refuted", "Inconclusive"
EXHAUSTIVE_LIMIT = 4096

Env = dict[str, frozenset]


@dataclass
class Outcome:
    """Result of one (lemma, frame, variant) task."""

    lemma: str
    frame: str
    variant: str
    status: str
    cases: int = 0
    inconclusive: int = 0
    counterexample: dict | None = None
    reason: str | None = None
    millis: float | None = None

    def to_json(self, timings: bool = False) -> dict:
        row: dict[str, Any] = {
            "lemma": self.lemma, "frame": self.frame, "variant": self.variant,
            "status": self.status, "cases": self.cases, "inconclusive": self.inconclusive,
        }
        if self.counterexample is not None:
            row["counterexample"] = self.counterexample
        if self.reason is not None:
            row["reason"] = self.reason
        row["millis"] = round(self.millis, 1) if timings and self.millis is not None else None
        return row


@dataclass
class Verdict:
    lemma: str
    frame: str
    outcomes: list[Outcome] = field(default_factory=list)

    def status_of(self, variant: str) -> str:
        return next(o.status for o in self.outcomes if o.variant == variant)


# --- frames ------------------------------------------------------------------------

@lru_cache(maxsize=32)
def frame_for(atoms: int, depth: int, headroom: int) -> Frame:
    return make_frame(atoms, depth, headroom)


def parse_frame(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.replace(" ", "").split(",")]
    if len(parts) == 2:
        parts.append(0)
    if len(parts) != 3 or min(parts) < 0:
        raise ValueError(f"frame must be 'atoms,depth[,headroom]', got {text!r}")
    return parts[0], parts[1], parts[2]


# --- oracle calls ---------------------------------------------------------------

def call_oracle(call: OracleCall, frame: Frame, env: Mapping[str, frozenset]) -> frozenset:
    if call.kind == FORMULA_ORACLE:
        text = call.args[0]
        var = call.args[1] if len(call.args) > 1 else "y"
        return oracle_formula(frame, text, var, dict(env))
    args = []
    for a in call.args:
        if isinstance(a, OracleCall):
            args.append(call_oracle(a, frame, env))
        elif isinstance(a, str):
            args.append(env[a])
        else:
            args.append(a)
    return frozenset(ORACLES[call.kind](frame, *args))


def make_hooks(variant: Variant, frame: Frame) -> dict:
    """Hook functions evaluating an oracle kind on the widened frame."""
    wide = frame.widened(lenient=True)

    def hook(kind: str):
        return lambda *vals: ORACLES[kind](wide, *vals)

    return {name: hook(kind) for name, kind in variant.hooks.items()}


# --- side conditions ---------------------------------------------------------------

def _condition(text: str, env: Mapping[str, frozenset]) -> bool:
    head, rest = text.split("(", 1)
    names = [n.strip() for n in rest.rstrip(" )").split(",") if n.strip()]
    vals = [env[n] for n in names]
    head = head.strip()
    if head == "disjoint":
        return all(not (x & y) for x, y in itertools.combinations(vals, 2))
    if head == "nonempty":
        return all(vals)
    if head == "distinct":
        return len(set(vals)) == len(vals)
    raise ValueError(f"unknown side condition {text!r}")


def conditions_hold(conds: Iterable[str], env: Mapping[str, frozenset]) -> bool:
    return all(_condition(c, env) for c in conds)


# --- sampling ----------------------------------------------------------------------

def _slice(frame: Frame, dom: Mapping[str, Any]) -> list[int]:
    top = frame.universe.depth - frame.headroom
    if "rank" in dom:
        rank = dom["rank"]
    elif "below_top" in dom:
        rank = top - dom["below_top"]
    else:
        rank = 1
    rank = max(0, min(rank, top))
    return sorted(frame.universe.slice(rank) & frame.W)


@lru_cache(maxsize=64)
def _krel_pool(frame: Frame, in_w: bool) -> tuple[tuple[int, int, int], ...]:
    """(element, a, b) for every available Kuratowski pair over W."""
    U = frame.universe
    if in_w:
        pool = [(e, *decode_kpair(U, e)) for e in sorted(closed_kpairs(frame, lambda a, b: True))]
    else:
        pool = []
        W = sorted(frame.W)
        for a in W:
            for b in W:
                sa, sab = U.ext_index.get(frozenset({a})), U.ext_index.get(frozenset({a, b}))
                if sa is None or sab is None:
                    continue
                e = U.ext_index.get(frozenset({sa, sab}))
                if e is not None:
                    pool.append((e, a, b))
    return tuple(pool)


@lru_cache(maxsize=64)
def _urel_pool(frame: Frame) -> tuple[tuple[int, int, int], ...]:
    U = frame.universe
    out = []
    for e in sorted(closed_upairs(frame, lambda a, b: True)):
        ext = U.elements[e].extension
        out.append((e, ext[0], ext[-1]))
    return tuple(out)


def _random_relation(rng: random.Random, pool: Sequence[tuple[int, int, int]],
                     support: int) -> frozenset:
    comps = sorted({c for _, a, b in pool for c in (a, b)})
    if not comps:
        return frozenset()
    chosen = set(rng.sample(comps, min(support, len(comps))))
    return frozenset(e for e, a, b in pool if a in chosen and b in chosen and rng.random() < 0.5)


def _free_binders(spec: LemmaSpec) -> list[str]:
    return [n for n, d in spec.binders.items() if d["kind"] != "derived"]


def _complete(spec: LemmaSpec, frame: Frame, env: Env) -> Env:
    for name, dom in spec.binders.items():
        if dom["kind"] == "derived":
            env[name] = call_oracle(_call_of(dom["oracle"]), frame, env)
    return env


def _call_of(obj: Any) -> OracleCall:
    if isinstance(obj, OracleCall):
        return obj
    return OracleCall(obj["kind"], tuple(_call_of(a) if isinstance(a, dict) else a
                                         for a in obj.get("args", [])))


def sample_envs(spec: LemmaSpec, variant: Variant, frame: Frame, seed: int) -> Iterator[Env]:
    """Binder environments for one variant; deterministic in (seed, lemma, frame)."""
    rng = random.Random(f"{seed}:{spec.id}:{frame.key()}")
    free = _free_binders(spec)
    slices = {n: _slice(frame, spec.binders[n]) for n in free if spec.binders[n]["kind"] == "subsets"}
    all_subsets = len(slices) == len(free)
    total = 1
    for n in free:
        total *= 2 ** len(slices[n]) if n in slices else EXHAUSTIVE_LIMIT + 1
    exhaustive = variant.sampling == "exhaustive" or (
        variant.sampling == "auto" and all_subsets and total <= EXHAUSTIVE_LIMIT)
    conds = variant.side_conditions
    if exhaustive:
        ranges = [range(2 ** len(slices[n])) for n in free]
        for masks in itertools.product(*ranges):
            env = {n: frozenset(x for i, x in enumerate(slices[n]) if m >> i & 1)
                   for n, m in zip(free, masks)}
            env = _complete(spec, frame, env)
            if conditions_hold(conds, env):
                yield env
        return
    produced, tries = 0, 0
    while produced < spec.samples and tries < spec.samples * 50:
        tries += 1
        env: Env = {}
        for n in free:
            dom = spec.binders[n]
            if dom["kind"] == "subsets":
                env[n] = frozenset(x for x in slices[n] if rng.random() < 0.5)
            elif dom["kind"] == "krels":
                env[n] = _random_relation(rng, _krel_pool(frame, dom.get("in_w", True)),
                                          dom.get("support", 8))
            elif dom["kind"] == "urels":
                env[n] = _random_relation(rng, _urel_pool(frame), dom.get("support", 8))
        env = _complete(spec, frame, env)
        if conditions_hold(conds, env):
            produced += 1
            yield env


# --- verification ------------------------------------------------------------------

def _check_sides(spec: LemmaSpec, variant: Variant, check: Check, frame: Frame, env: Env,
                 opaque_env: Env, hooks: dict, term_cache: dict) -> tuple[frozenset, frozenset]:
    if check.semantic is not None:
        wide = frame.widened()
        return call_oracle(check.semantic, wide, env), call_oracle(check.oracle, wide, env)
    t = term_cache.get(check.label)
    if t is None:
        t = term_cache[check.label] = expand_check(spec, variant, check)
    lhs = eval_term(t, frame, {**env, **opaque_env}, hooks)
    return lhs, call_oracle(check.oracle, frame, env)


def counterexample(frame: Frame, check: Check, env: Env, lhs: frozenset, rhs: frozenset) -> dict:
    U = frame.universe
    names = sorted(env)
    return {
        "check": check.label,
        "env": {n: U.show_class(env[n]) for n in names},
        "env_ids": {n: sorted(env[n]) for n in names},
        "term_only": [U.show(e) for e in sorted(lhs - rhs)],
        "oracle_only": [U.show(e) for e in sorted(rhs - lhs)],
    }


def verify_variant(spec: LemmaSpec, variant: Variant, frame_spec: tuple[int, int, int],
                   seed: int) -> Outcome:
    key = ",".join(map(str, frame_spec))
    start = time.perf_counter()
    out = Outcome(spec.id, key, variant.name, INCONCLUSIVE)
    try:
        out = _verify(spec, variant, frame_spec, seed, out)
    except SizeCap as e:
        out.status, out.reason = INCONCLUSIVE, f"SizeCap: {e}"
    out.millis = (time.perf_counter() - start) * 1000
    return out


def _verify(spec: LemmaSpec, variant: Variant, frame_spec: tuple[int, int, int], seed: int,
            out: Outcome) -> Outcome:
    if frame_spec[2] < spec.min_headroom:
        out.reason = f"headroom {frame_spec[2]} below required {spec.min_headroom}"
        return out
    frame = frame_for(*frame_spec)
    hooks = make_hooks(variant, frame)
    try:
        opaque_env = {n: call_oracle(c, frame, {}) for n, c in variant.opaque.items()}
    except Unrepresentable as e:
        out.reason = f"Unrepresentable: {e}"
        return out
    term_cache: dict = {}
    last_reason = None
    for env in sample_envs(spec, variant, frame, seed):
        try:
            results = [(c, *_check_sides(spec, variant, c, frame, env, opaque_env, hooks,
                                         term_cache)) for c in variant.checks]
        except Unrepresentable as e:
            out.inconclusive += 1
            last_reason = f"Unrepresentable: {e}"
            continue
        for check, lhs, rhs in results:
            if lhs != rhs:
                out.status = REFUTED
                out.counterexample = counterexample(frame, check, env, lhs, rhs)
                return out
        out.cases += 1
    if out.cases:
        out.status = VERIFIED
    else:
        out.reason = last_reason or "no admissible samples"
    return out


def verify_lemma(spec: LemmaSpec, frame: tuple[int, int, int] | Frame, seed: int) -> Verdict:
    if isinstance(frame, Frame):
        frame = _frame_triple(frame)
    key = ",".join(map(str, frame))
    return Verdict(spec.id, key, [verify_variant(spec, v, frame, seed) for v in spec.variants])


def _frame_triple(frame: Frame) -> tuple[int, int, int]:
    return (frame.universe.atom_count, frame.universe.depth, frame.headroom)


def replay(spec: LemmaSpec, variant_name: str, frame_spec: tuple[int, int, int],
           cx: Mapping[str, Any]) -> bool:
    """Re-evaluate a stored counterexample; True iff the same mismatch reappears."""
    variant = next(v for v in spec.variants if v.name == variant_name)
    check = next(c for c in variant.checks if c.label == cx["check"])
    frame = frame_for(*frame_spec)
    env = {n: frozenset(ids) for n, ids in cx["env_ids"].items()}
    opaque_env = {n: call_oracle(c, frame, {}) for n, c in variant.opaque.items()}
    lhs, rhs = _check_sides(spec, variant, check, frame, env, opaque_env,
                            make_hooks(variant, frame), {})
    U = frame.universe
    return (lhs != rhs
            and [U.show(e) for e in sorted(lhs - rhs)] == cx["term_only"]
            and [U.show(e) for e in sorted(rhs - lhs)] == cx["oracle_only"])


# --- suites ------------------------------------------------------------------------

def _variant_status(statuses: list[str]) -> str:
    if REFUTED in statuses:
        return REFUTED
    if VERIFIED in statuses:
        return VERIFIED
    return INCONCLUSIVE


def summarize(registry: Sequence[LemmaSpec], outcomes: Sequence[Outcome]) -> list[dict]:
    """Lemma-level verdicts: Verified iff some variant is never refuted and verified somewhere."""
    rows = []
    for spec in registry:
        mine = [o for o in outcomes if o.lemma == spec.id]
        if not mine:
            continue
        per_variant = {v.name: _variant_status([o.status for o in mine if o.variant == v.name])
                       for v in spec.variants}
        verified = [n for n, s in per_variant.items() if s == VERIFIED]
        if verified:
            # prefer the variant with the most verified frames, then the most cases
            def weight(name: str) -> tuple[int, int]:
                rows = [o for o in mine if o.variant == name and o.status == VERIFIED]
                return len(rows), sum(o.cases for o in rows)
            status, variant = VERIFIED, max(verified, key=weight)
        elif REFUTED in per_variant.values():
            status, variant = REFUTED, None
        else:
            status, variant = INCONCLUSIVE, None
        rows.append({"lemma": spec.id, "status": status, "variant": variant,
                     "variants": per_variant})
    return rows


@dataclass
class Report:
    seed: int
    frames: list[str] | None
    outcomes: list[Outcome]
    summary: list[dict]

    def counts(self) -> dict[str, int]:
        out = {VERIFIED: 0, REFUTED: 0, INCONCLUSIVE: 0}
        for row in self.summary:
            out[row["status"]] += 1
        return out

    def to_json(self, timings: bool = False) -> str:
        doc = {
            "seed": self.seed,
            "frames": self.frames,
            "counts": self.counts(),
            "summary": self.summary,
            "results": [o.to_json(timings) for o in self.outcomes],
        }
        return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"

    def lemma_status(self, lemma: str) -> str | None:
        return next((r["status"] for r in self.summary if r["lemma"] == lemma), None)


def _run_task(task: tuple[LemmaSpec, int, tuple[int, int, int], int]) -> Outcome:
    spec, vi, frame, seed = task
    return verify_variant(spec, spec.variants[vi], frame, seed)


def run_suite(registry: Sequence[LemmaSpec], frames: Sequence[tuple[int, int, int]] | None,
              seed: int, parallelism: int = 1) -> Report:
    """Run every (lemma, frame, variant); ``frames`` overrides each lemma's own list."""
    tasks = []
    for spec in registry:
        for frame in (frames or spec.frames):
            for vi in range(len(spec.variants)):
                tasks.append((spec, vi, tuple(frame), seed))
    if parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        outcomes = [_run_task(t) for t in tasks]
    order = {spec.id: i for i, spec in enumerate(registry)}
    vorder = {(s.id, v.name): i for s in registry for i, v in enumerate(s.variants)}
    outcomes.sort(key=lambda o: (o.lemma, order[o.lemma], tuple(map(int, o.frame.split(","))),
                                 vorder[(o.lemma, o.variant)]))
    frame_keys = [",".join(map(str, f)) for f in frames] if frames else None
    return Report(seed, frame_keys, outcomes, summarize(registry, outcomes))


def unexpected_refutations(report: Report, expected: Mapping[str, str] | None = None) -> list[str]:
    expected = expected or {}
    return [r["lemma"] for r in report.summary
            if r["status"] == REFUTED and expected.get(r["lemma"]) != REFUTED]


def load_expected(text: str) -> dict[str, str]:
    """Expected lemma statuses, from a report or a plain {lemma: status} map."""
    doc = json.loads(text)
    if isinstance(doc, dict) and "summary" in doc:
        return {r["lemma"]: r["status"] for r in doc["summary"]}
    if isinstance(doc, dict):
        return {str(k): str(v) for k, v in doc.items()}
    raise ValueError("expected-verdicts file must be a report or a JSON object")
