"""Cross-language check: the real subprocess harness answers the shared
conformance fixtures byte-for-byte through SubprocessExecutor.

Skipped when the harness has not been built (harness/dist/main.js).
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from crowdflow.canonical import canonicalize
from crowdflow.sandbox import ExecutionBundle, SubprocessExecutor

HARNESS_MAIN = Path(__file__).parent.parent / "harness" / "dist" / "main.js"
FIXTURES = Path(__file__).parent.parent / "harness" / "fixtures" / "conformance.json"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not HARNESS_MAIN.exists(),
    reason="node or built harness not available",
)


def load_cases():
    return json.loads(FIXTURES.read_text(encoding="utf-8"))["cases"]


def test_harness_answers_every_fixture_byte_for_byte():
    cases = load_cases()
    assert cases
    with SubprocessExecutor(["node", str(HARNESS_MAIN)]) as executor:
        for case in cases:
            bundle = ExecutionBundle.from_wire(case["request"])
            report = executor.execute(bundle)
            assert canonicalize(report.to_wire()) == canonicalize(
                case["expectedResponse"]
            ), case["name"]


def test_type_error_and_timeout_cases_present():
    names = [case["name"] for case in load_cases()]
    assert "type-error-illegal-argument-surfaced" in names
    assert "infinite-loop-times-out" in names


def test_resolve_call_agrees_across_implementations():
    # The stub fixtures exercise the same three-way rule the in-process
    # executor implements; spot-check that both sides agree on the stub
    # hit/miss bookkeeping for the shared cases.
    by_name = {case["name"]: case for case in load_cases()}
    hit = by_name["stub-hit-on-unimplemented-callee"]
    miss = by_name["stub-miss-errors-test"]
    assert hit["expectedResponse"]["perTest"][0]["stubHits"]
    assert miss["expectedResponse"]["perTest"][0]["stubMisses"]
    with SubprocessExecutor(["node", str(HARNESS_MAIN)]) as executor:
        for case in (hit, miss):
            report = executor.execute(ExecutionBundle.from_wire(case["request"]))
            wire = report.to_wire()
            assert wire["perTest"][0]["stubHits"] == (
                case["expectedResponse"]["perTest"][0]["stubHits"]
            )
            assert wire["perTest"][0]["stubMisses"] == (
                case["expectedResponse"]["perTest"][0]["stubMisses"]
            )
