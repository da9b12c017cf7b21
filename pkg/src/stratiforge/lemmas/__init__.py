"""Lemma registry and verification engine."""

from .engine import (
    INCONCLUSIVE, REFUTED, VERIFIED, Outcome, Report, Verdict, frame_for, load_expected,
    parse_frame, replay, run_suite, sample_envs, unexpected_refutations, verify_lemma,
    verify_variant,
)
from .model import Check, LemmaSpec, OracleCall, SUITE_SCHEMA, Variant, load_suite
from .registry import default_suite, default_suite_doc

__all__ = [
    "INCONCLUSIVE", "REFUTED", "VERIFIED", "Outcome", "Report", "Verdict", "frame_for",
    "load_expected", "parse_frame", "replay", "run_suite", "sample_envs",
    "unexpected_refutations", "verify_lemma", "verify_variant", "Check", "LemmaSpec",
    "OracleCall", "SUITE_SCHEMA", "Variant", "load_suite", "default_suite", "default_suite_doc",
]
