"""Lemma records and the JSON suite loader."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

import jsonschema

from ..errors import ParseError, SchemaError, StratiforgeError, UnknownLemmaField
from ..oracle import ORACLES
from ..syntax.prelude import DefinitionTable, default_prelude, expand
from ..syntax.terms import Term, free_vars, parse_term

FORMULA_ORACLE = "formula"
SIDE_CONDITIONS = ("disjoint", "nonempty", "distinct")
BINDER_KINDS = ("subsets", "krels", "urels", "derived")


@dataclass(frozen=True)
class OracleCall:
    """An oracle kind applied to arguments: binder names, integers, nested calls."""

    kind: str
    args: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "args": [a.to_json() if isinstance(a, OracleCall) else a for a in self.args]}


@dataclass(frozen=True)
class Check:
    label: str
    oracle: OracleCall
    term: str | None = None
    semantic: OracleCall | None = None


@dataclass(frozen=True)
class Variant:
    name: str
    checks: tuple[Check, ...]
    choices: Mapping[str, int] = field(default_factory=dict)
    opaque: Mapping[str, OracleCall] = field(default_factory=dict)
    hooks: Mapping[str, str] = field(default_factory=dict)
    side_conditions: tuple[str, ...] = ()
    sampling: str = "auto"


@dataclass(frozen=True)
class LemmaSpec:
    id: str
    title: str
    anchor: str
    system: str
    binders: Mapping[str, Mapping[str, Any]]
    variants: tuple[Variant, ...]
    frames: tuple[tuple[int, int, int], ...]
    samples: int = 100
    min_headroom: int = 0


# --- schema ----------------------------------------------------------------------

_CALL = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": sorted(ORACLES) + [FORMULA_ORACLE]},
        "args": {"type": "array", "items": {
            "anyOf": [{"type": "string"}, {"type": "integer"}, {"$ref": "#/$defs/call"}]}},
    },
    "additionalProperties": False,
}

_CHECK = {
    "type": "object",
    "required": ["label"],
    "properties": {
        "label": {"type": "string"},
        "term": {"type": "string"},
        "semantic": {"$ref": "#/$defs/call"},
        "oracle": {"$ref": "#/$defs/call"},
    },
    "additionalProperties": False,
}

_VARIANT = {
    "type": "object",
    "required": ["name"],
    "properties": {
        "name": {"type": "string"},
        "term": {"type": "string"},
        "semantic": {"$ref": "#/$defs/call"},
        "oracle": {"$ref": "#/$defs/call"},
        "checks": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/check"}},
        "choices": {"type": "object", "additionalProperties": {"type": "integer"}},
        "opaque": {"type": "object", "additionalProperties": {"$ref": "#/$defs/call"}},
        "hooks": {"type": "object", "additionalProperties": {"enum": sorted(ORACLES)}},
        "side_conditions": {"type": "array", "items": {"type": "string"}},
        "sampling": {"enum": ["auto", "random", "exhaustive"]},
    },
    "additionalProperties": False,
}

_BINDER = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": list(BINDER_KINDS)},
        "rank": {"type": "integer", "minimum": 0},
        "below_top": {"type": "integer", "minimum": 0},
        "support": {"type": "integer", "minimum": 1},
        "in_w": {"type": "boolean"},
        "oracle": {"$ref": "#/$defs/call"},
    },
    "additionalProperties": False,
}

_LEMMA = {
    "type": "object",
    "required": ["id", "title", "system", "variants", "frames"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "title": {"type": "string"},
        "anchor": {"type": "string"},
        "system": {"enum": ["A", "B"]},
        "binders": {"type": "object", "additionalProperties": {"$ref": "#/$defs/binder"}},
        "oracle": {"$ref": "#/$defs/call"},
        "variants": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/variant"}},
        "side_conditions": {"type": "array", "items": {"type": "string"}},
        "sampling": {"enum": ["auto", "random", "exhaustive"]},
        "frames": {"type": "array", "minItems": 1, "items": {
            "type": "array", "items": {"type": "integer", "minimum": 0},
            "minItems": 3, "maxItems": 3}},
        "samples": {"type": "integer", "minimum": 1},
        "min_headroom": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

SUITE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["lemmas"],
    "properties": {"lemmas": {"type": "array", "items": {"$ref": "#/$defs/lemma"}}},
    "additionalProperties": False,
    "$defs": {"call": _CALL, "check": _CHECK, "variant": _VARIANT, "binder": _BINDER,
              "lemma": _LEMMA},
}

_FIELDS = {
    "lemma": set(_LEMMA["properties"]),
    "variant": set(_VARIANT["properties"]),
    "check": set(_CHECK["properties"]),
    "binder": set(_BINDER["properties"]),
}


def _reject_unknown_fields(doc: Any) -> None:
    if not isinstance(doc, dict):
        return
    for lemma in doc.get("lemmas", []) if isinstance(doc.get("lemmas"), list) else []:
        if not isinstance(lemma, dict):
            continue
        where = lemma.get("id", "?")
        _unknown(lemma, "lemma", where)
        for b in (lemma.get("binders") or {}).values():
            if isinstance(b, dict):
                _unknown(b, "binder", where)
        for v in lemma.get("variants") or []:
            if isinstance(v, dict):
                _unknown(v, "variant", where)
                for c in v.get("checks") or []:
                    if isinstance(c, dict):
                        _unknown(c, "check", where)


def _unknown(obj: dict, what: str, where: str) -> None:
    extra = sorted(set(obj) - _FIELDS[what])
    if extra:
        raise UnknownLemmaField(f"{where}: unknown {what} field(s) {', '.join(extra)}")


# --- conversion ------------------------------------------------------------------

def _call(obj: Mapping | None) -> OracleCall | None:
    if obj is None:
        return None
    args = tuple(_call(a) if isinstance(a, dict) else a for a in obj.get("args", []))
    return OracleCall(obj["kind"], args)


def _side_condition_ok(text: str) -> bool:
    head = text.split("(", 1)[0].strip()
    return head in SIDE_CONDITIONS and text.rstrip().endswith(")")


def _variant(lemma: Mapping, v: Mapping) -> Variant:
    default_oracle = _call(v.get("oracle") or lemma.get("oracle"))
    if "checks" in v:
        checks = []
        for c in v["checks"]:
            oracle = _call(c.get("oracle")) or default_oracle
            if oracle is None:
                raise SchemaError(f"{lemma['id']}/{v['name']}/{c['label']}: no oracle")
            checks.append(Check(c["label"], oracle, c.get("term"), _call(c.get("semantic"))))
    else:
        if default_oracle is None:
            raise SchemaError(f"{lemma['id']}/{v['name']}: no oracle")
        checks = [Check(v["name"], default_oracle, v.get("term"), _call(v.get("semantic")))]
    for c in checks:
        if (c.term is None) == (c.semantic is None):
            raise SchemaError(f"{lemma['id']}/{v['name']}: give exactly one of term or semantic")
    conds = tuple(lemma.get("side_conditions", [])) + tuple(v.get("side_conditions", []))
    for cond in conds:
        if not _side_condition_ok(cond):
            raise SchemaError(f"{lemma['id']}: unknown side condition {cond!r}")
    return Variant(
        name=v["name"],
        checks=tuple(checks),
        choices=dict(v.get("choices", {})),
        opaque={k: _call(c) for k, c in v.get("opaque", {}).items()},
        hooks=dict(v.get("hooks", {})),
        side_conditions=conds,
        sampling=v.get("sampling", lemma.get("sampling", "auto")),
    )


def expand_check(spec: LemmaSpec, variant: Variant, check: Check,
                 defs: DefinitionTable | None = None) -> Term:
    """Primitive (plus hooked) form of a check's term."""
    assert check.term is not None
    return expand(parse_term(check.term), defs, variant.choices, spec.system,
                  bound=tuple(spec.binders), opaque=tuple(variant.opaque) + tuple(variant.hooks))


def _validate_terms(spec: LemmaSpec, defs: DefinitionTable | None) -> None:
    allowed = set(spec.binders)
    for v in spec.variants:
        names = allowed | set(v.opaque)
        for c in v.checks:
            if c.term is None:
                continue
            try:
                t = expand_check(spec, v, c, defs)
            except ParseError as e:
                raise SchemaError(f"{spec.id}/{v.name}: {e.msg} at position {e.pos}") from None
            except StratiforgeError as e:
                raise SchemaError(f"{spec.id}/{v.name}: {e}") from None
            stray = free_vars(t) - names
            if stray:
                raise SchemaError(f"{spec.id}/{v.name}: unbound names {sorted(stray)}")


def load_suite(doc: str | Mapping, defs: DefinitionTable | None = None) -> list[LemmaSpec]:
    """Validate a suite document (JSON text or parsed) and build the registry."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SchemaError(f"suite is not valid JSON: {e}") from None
    _reject_unknown_fields(doc)
    try:
        jsonschema.validate(doc, SUITE_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise SchemaError(f"{path or 'suite'}: {e.message}") from None
    seen: set[str] = set()
    out = []
    for lemma in doc["lemmas"]:
        if lemma["id"] in seen:
            raise SchemaError(f"duplicate lemma id {lemma['id']}")
        seen.add(lemma["id"])
        spec = LemmaSpec(
            id=lemma["id"],
            title=lemma["title"],
            anchor=lemma.get("anchor", ""),
            system=lemma["system"],
            binders=dict(lemma.get("binders", {})),
            variants=tuple(_variant(lemma, v) for v in lemma["variants"]),
            frames=tuple(tuple(f) for f in lemma["frames"]),
            samples=lemma.get("samples", 100),
            min_headroom=lemma.get("min_headroom", 0),
        )
        _validate_terms(spec, defs or default_prelude())
        out.append(spec)
    return out
