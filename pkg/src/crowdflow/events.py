"""Append-only project events and their newline-delimited log encoding.

Project state is never stored directly: it is a fold over these events.
Each event serializes to one line of canonical text, so logs are diffable,
replayable, and byte-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .canonical import CanonicalizationError, canonicalize, parse_canonical
from .errors import StateError

PROJECT_CREATED = "ProjectCreated"
FUNCTION_CREATED = "FunctionCreated"
MICROTASK_GENERATED = "MicrotaskGenerated"
MICROTASK_ASSIGNED = "MicrotaskAssigned"
MICROTASK_SKIPPED = "MicrotaskSkipped"
MICROTASK_EXPIRED = "MicrotaskExpired"
SUBMISSION_RECEIVED = "SubmissionReceived"
REVIEW_RECORDED = "ReviewRecorded"
CONTRIBUTION_APPLIED = "ContributionApplied"
REWORK_REQUESTED = "ReworkRequested"
ISSUE_OPENED = "IssueOpened"
ISSUE_RESOLVED = "IssueResolved"
FUNCTION_COMPLETED = "FunctionCompleted"
QUESTION_POSTED = "QuestionPosted"
ANSWER_POSTED = "AnswerPosted"
NOTIFICATION_EMITTED = "NotificationEmitted"
SCORE_AWARDED = "ScoreAwarded"
PROJECT_PUBLISHED = "ProjectPublished"

EVENT_KINDS = frozenset({
    PROJECT_CREATED,
    FUNCTION_CREATED,
    MICROTASK_GENERATED,
    MICROTASK_ASSIGNED,
    MICROTASK_SKIPPED,
    MICROTASK_EXPIRED,
    SUBMISSION_RECEIVED,
    REVIEW_RECORDED,
    CONTRIBUTION_APPLIED,
    REWORK_REQUESTED,
    ISSUE_OPENED,
    ISSUE_RESOLVED,
    FUNCTION_COMPLETED,
    QUESTION_POSTED,
    ANSWER_POSTED,
    NOTIFICATION_EMITTED,
    SCORE_AWARDED,
    PROJECT_PUBLISHED,
})


@dataclass(frozen=True)
class ProjectEvent:
    """One immutable state transition; ``sequence`` is dense per project."""

    sequence: int
    timestamp: float
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "timestamp": self.timestamp,
            "kind": self.kind,
            "payload": self.payload,
        }

    def to_record(self) -> str:
        return canonicalize(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ProjectEvent":
        kind = data.get("kind")
        if kind not in EVENT_KINDS:
            raise StateError(f"unknown event kind {kind!r}")
        return cls(
            sequence=int(data["sequence"]),
            timestamp=float(data["timestamp"]),
            kind=kind,
            payload=data.get("payload", {}),
        )

    @classmethod
    def from_record(cls, line: str) -> "ProjectEvent":
        try:
            data = parse_canonical(line)
        except CanonicalizationError as exc:
            raise StateError(f"unparseable event record: {exc}") from exc
        if not isinstance(data, dict):
            raise StateError("event record is not an object")
        return cls.from_dict(data)


def encode_log(events: Iterable[ProjectEvent]) -> str:
    return "".join(event.to_record() + "\n" for event in events)


def decode_log(text: str) -> Iterator[ProjectEvent]:
    for line in text.splitlines():
        if line.strip():
            yield ProjectEvent.from_record(line)


def write_log(path, events: Iterable[ProjectEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_record() + "\n")


def append_log(path, events: Iterable[ProjectEvent]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_record() + "\n")


def read_log(path) -> list[ProjectEvent]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(decode_log(fh.read()))


def batch(events: list[ProjectEvent], start_sequence: int, timestamp: float,
          items: list[tuple[str, dict]]) -> list[ProjectEvent]:
    """Append ``items`` as events with consecutive sequence numbers."""
    seq = start_sequence
    for kind, payload in items:
        events.append(ProjectEvent(sequence=seq, timestamp=timestamp, kind=kind,
                                   payload=payload))
        seq += 1
    return events
