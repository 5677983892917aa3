"""Replay a project event log and check every workflow invariant at every
prefix.

The checker is deliberately lenient about structurally broken logs (gaps,
orphaned events): it records a violation naming the sequence number and
keeps going, so a hand-edited log surfaces *all* the rules it breaks
(density, locking, conservation, chaining, self-review, scoring ranges)
instead of only the first parse error.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from . import events as ev
from .errors import StateError
from .model import FunctionState, MicrotaskKind, SubmissionKind
from .state import ProjectState

IMPLEMENTER_POINT_VALUES = frozenset({2, 4, 6, 8, 10})
ACCEPTED_POINT_VALUES = frozenset({8, 10})
REJECTED_POINT_VALUES = frozenset({2, 4, 6})
REVIEWER_POINT_VALUE = 5

# Event kinds that may sit between a ReviewRecorded and the microtask (or
# completion) that continues the chain, inside one atomic batch.
_CHAIN_TAIL_KINDS = frozenset({
    ev.CONTRIBUTION_APPLIED,
    ev.SCORE_AWARDED,
    ev.NOTIFICATION_EMITTED,
    ev.REWORK_REQUESTED,
})


@dataclass
class InvariantReport:
    violations: list[str] = field(default_factory=list)
    events_checked: int = 0
    reviews_generated: int = 0
    reviewable_submissions: int = 0
    state: ProjectState | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "violations": list(self.violations),
            "eventsChecked": self.events_checked,
            "reviewsGenerated": self.reviews_generated,
            "reviewableSubmissions": self.reviewable_submissions,
            "ok": self.ok,
        }


class _LiveTracker:
    """Incremental count of live microtasks per function."""

    def __init__(self) -> None:
        self.function_of: dict[str, str] = {}
        self.live: set[str] = set()
        self.counts: dict[str, int] = {}

    def add(self, microtask_id: str, function_id: str) -> None:
        self.function_of[microtask_id] = function_id
        if microtask_id not in self.live:
            self.live.add(microtask_id)
            self.counts[function_id] = self.counts.get(function_id, 0) + 1

    def remove(self, microtask_id: str) -> None:
        if microtask_id in self.live:
            self.live.discard(microtask_id)
            function_id = self.function_of[microtask_id]
            self.counts[function_id] -= 1

    def over_locked(self) -> list[str]:
        return [fn for fn, count in self.counts.items() if count > 1]


def check_events(events: list[ev.ProjectEvent]) -> InvariantReport:
    """Fold the log, checking invariants after every event."""
    report = InvariantReport()
    state = ProjectState()
    tracker = _LiveTracker()
    submission_worker: dict[str, str] = {}
    submission_kind: dict[str, str] = {}
    submission_function: dict[str, str] = {}
    stars_by_submission: dict[str, int] = {}

    expected_sequence = 1
    for event in events:
        if event.sequence != expected_sequence:
            report.violations.append(
                f"sequence gap: expected {expected_sequence}, found {event.sequence}"
            )
        applied = replace(event, sequence=state.last_sequence + 1)
        expected_sequence = event.sequence + 1
        report.events_checked += 1

        # Bookkeeping that must happen before apply (needs pre-state).
        if event.kind == ev.MICROTASK_GENERATED:
            payload = event.payload
            if payload["kind"] == MicrotaskKind.REVIEW.value:
                report.reviews_generated += 1
                submission_id = payload["submissionId"]
                parent_function = submission_function.get(submission_id)
                parent_record = state.submissions.get(submission_id)
                if parent_record is not None:
                    parent_task = state.microtasks.get(
                        parent_record.submission.microtask_id
                    )
                    if parent_task is not None:
                        tracker.remove(parent_task.id)
                if parent_function is not None:
                    tracker.add(payload["microtaskId"], parent_function)
            else:
                tracker.add(payload["microtaskId"], payload["functionId"])
        elif event.kind == ev.SUBMISSION_RECEIVED:
            payload = event.payload
            submission_worker[payload["id"]] = payload["workerId"]
            submission_kind[payload["id"]] = payload["payload"]["kind"]
            task = state.microtasks.get(payload["microtaskId"])
            if task is not None and task.function_id is not None:
                submission_function[payload["id"]] = task.function_id
            if payload["payload"]["kind"] != SubmissionKind.ISSUE_REPORT.value:
                report.reviewable_submissions += 1
        elif event.kind == ev.ISSUE_OPENED:
            record = state.submissions.get(event.payload["submissionId"])
            if record is not None:
                tracker.remove(record.submission.microtask_id)
        elif event.kind == ev.REVIEW_RECORDED:
            payload = event.payload
            tracker.remove(payload["microtaskId"])
            stars_by_submission[payload["submissionId"]] = payload["stars"]
            worker = submission_worker.get(payload["submissionId"])
            if (
                not state.policy.self_review_allowed
                and worker is not None
                and worker == payload["reviewerWorkerId"]
            ):
                report.violations.append(
                    f"event {event.sequence}: self-review of submission"
                    f" {payload['submissionId']} by {worker}"
                )
        elif event.kind == ev.SCORE_AWARDED:
            _check_score(event, stars_by_submission, report)

        try:
            state.apply(applied)
        except StateError as exc:
            report.violations.append(f"event {event.sequence}: {exc}")
            continue

        # Locking: at most one live microtask per function, at every prefix.
        for function_id in tracker.over_locked():
            report.violations.append(
                f"event {event.sequence}: function {function_id} has more than"
                " one live microtask"
            )
        # Conservation never runs ahead: a review microtask only exists for
        # an already-received reviewable submission.
        if report.reviews_generated > report.reviewable_submissions:
            report.violations.append(
                f"event {event.sequence}: {report.reviews_generated} review"
                f" microtasks for {report.reviewable_submissions} submissions"
            )

    _check_chaining(events, report)

    # Terminal checks.
    if report.reviews_generated != report.reviewable_submissions:
        report.violations.append(
            "conservation broken at end of log:"
            f" {report.reviews_generated} review microtasks generated for"
            f" {report.reviewable_submissions} reviewable submissions"
        )
    for function in state.functions.values():
        live_count = tracker.counts.get(function.id, 0)
        if function.state is FunctionState.AWAITING_WORK and live_count != 1:
            report.violations.append(
                f"function {function.id} awaits work with {live_count} live"
                " microtasks (expected exactly 1)"
            )
        if function.state is not FunctionState.AWAITING_WORK and live_count != 0:
            report.violations.append(
                f"function {function.id} is {function.state.value} with"
                f" {live_count} live microtasks"
            )
    report.state = state
    return report


def _check_score(event: ev.ProjectEvent, stars_by_submission: dict[str, int],
                 report: InvariantReport) -> None:
    payload = event.payload
    points = payload["points"]
    reason = payload.get("reason", {})
    kind = reason.get("kind")
    if points <= 0:
        report.violations.append(f"event {event.sequence}: non-positive score {points}")
    if kind == "reviewer-award":
        if points != REVIEWER_POINT_VALUE:
            report.violations.append(
                f"event {event.sequence}: reviewer award of {points} (expected 5)"
            )
    elif kind == "implementer-award":
        if points not in IMPLEMENTER_POINT_VALUES:
            report.violations.append(
                f"event {event.sequence}: implementer award of {points}"
            )
        stars = stars_by_submission.get(payload.get("submissionId"))
        if stars is not None:
            expected = ACCEPTED_POINT_VALUES if stars >= 4 else REJECTED_POINT_VALUES
            if points not in expected:
                report.violations.append(
                    f"event {event.sequence}: award {points} does not match"
                    f" a {stars}-star review"
                )
    else:
        report.violations.append(
            f"event {event.sequence}: unknown score reason {kind!r}"
        )


def _check_chaining(events: list[ev.ProjectEvent], report: InvariantReport) -> None:
    """Structural batch checks, robust to hand-edited logs.

    Every ContributionApplied must directly follow its ReviewRecorded, and
    every review must be followed in-batch by exactly one continuation:
    the next implement-behavior microtask, or the function's completion.
    """
    submission_payload_kind: dict[str, str] = {}
    submission_function: dict[str, str] = {}
    microtask_function: dict[str, str] = {}

    for index, event in enumerate(events):
        if event.kind == ev.MICROTASK_GENERATED:
            if event.payload["kind"] == MicrotaskKind.IMPLEMENT_BEHAVIOR.value:
                microtask_function[event.payload["microtaskId"]] = event.payload["functionId"]
        elif event.kind == ev.SUBMISSION_RECEIVED:
            payload = event.payload
            submission_payload_kind[payload["id"]] = payload["payload"]["kind"]
            submission_function[payload["id"]] = microtask_function.get(
                payload["microtaskId"], ""
            )
        elif event.kind == ev.CONTRIBUTION_APPLIED:
            previous = events[index - 1] if index > 0 else None
            if (
                previous is None
                or previous.kind != ev.REVIEW_RECORDED
                or previous.payload.get("submissionId") != event.payload["submissionId"]
            ):
                report.violations.append(
                    f"event {event.sequence}: contribution applied without its"
                    " review recorded immediately before it"
                )
        elif event.kind == ev.REVIEW_RECORDED:
            submission_id = event.payload["submissionId"]
            accepted = event.payload["stars"] >= 4
            function_id = submission_function.get(submission_id, "")
            payload_kind = submission_payload_kind.get(submission_id, "")
            continuations = []
            cursor = index + 1
            while cursor < len(events) and events[cursor].kind in _CHAIN_TAIL_KINDS:
                cursor += 1
            if cursor < len(events):
                tail = events[cursor]
                if (
                    tail.kind == ev.MICROTASK_GENERATED
                    and tail.payload["kind"] == MicrotaskKind.IMPLEMENT_BEHAVIOR.value
                    and tail.payload.get("functionId") == function_id
                ):
                    continuations.append("microtask")
                elif (
                    tail.kind == ev.FUNCTION_COMPLETED
                    and tail.payload.get("functionId") == function_id
                ):
                    continuations.append("completed")
            expects_completion = accepted and payload_kind == SubmissionKind.MARK_COMPLETE.value
            expected = "completed" if expects_completion else "microtask"
            if continuations != [expected]:
                report.violations.append(
                    f"event {event.sequence}: review of {submission_id} is not"
                    f" followed by its chain continuation ({expected})"
                )


def replay_events(events: list[ev.ProjectEvent]) -> InvariantReport:
    return check_events(events)


def replay_log_file(path: str | Path) -> InvariantReport:
    return check_events(ev.read_log(Path(path)))
