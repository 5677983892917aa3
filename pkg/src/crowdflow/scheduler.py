"""Queueing, assignment, skip, and expiry of microtasks.

All operations are commands over a project state snapshot: they validate
against the fold-derived queue and emit events; the fold performs the
actual queue mutation. Skipped and expired microtasks re-enter at the
queue tail, and a worker who skips a microtask cannot fetch it again until
they have taken ``skip_cooldown`` other assignments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING

from . import events as ev
from .errors import StaleAssignmentError, ValidationFailure, WorkerBusyError
from .model import MicrotaskKind, MicrotaskState

if TYPE_CHECKING:
    from .state import MicrotaskRecord, ProjectState

FIFO = "fifo"
RANDOM = "random"

DEFAULT_TIME_LIMIT_MINUTES = 15.0
DEFAULT_WARNING_AT_MINUTES = 14.0


@dataclass(frozen=True)
class AssignmentPolicy:
    """How microtasks are handed to workers.

    ``fifo`` assigns the oldest eligible microtask (deterministic, the
    default); ``random`` draws seeded-uniform among the eligible ones.
    """

    mode: str = FIFO
    seed: int = 0
    self_review_allowed: bool = False
    skip_cooldown: int = 1
    time_limit_minutes: float = DEFAULT_TIME_LIMIT_MINUTES
    warning_at_minutes: float = DEFAULT_WARNING_AT_MINUTES

    def __post_init__(self):
        if self.mode not in (FIFO, RANDOM):
            raise ValidationFailure([f"unknown assignment mode {self.mode!r}"])
        if not self.warning_at_minutes < self.time_limit_minutes:
            raise ValidationFailure(
                ["assignment.warningAtMinutes must be less than assignment.timeLimitMinutes"]
            )
        if self.skip_cooldown < 0:
            raise ValidationFailure(["assignment.skipCooldown must be >= 0"])

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "selfReviewAllowed": self.self_review_allowed,
            "skipCooldown": self.skip_cooldown,
            "timeLimitMinutes": self.time_limit_minutes,
            "warningAtMinutes": self.warning_at_minutes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssignmentPolicy":
        return cls(
            mode=data.get("mode", FIFO),
            seed=data.get("seed", 0),
            self_review_allowed=data.get("selfReviewAllowed", False),
            skip_cooldown=data.get("skipCooldown", 1),
            time_limit_minutes=data.get("timeLimitMinutes", DEFAULT_TIME_LIMIT_MINUTES),
            warning_at_minutes=data.get("warningAtMinutes", DEFAULT_WARNING_AT_MINUTES),
        )

    @classmethod
    def from_config(cls, config: dict) -> "AssignmentPolicy":
        """Read the documented ``assignment.*`` keys of a project config."""
        return cls.from_dict(config.get("assignment", {}))


class Scheduler:
    """Assignment decisions for one project; holds the draw RNG for
    ``random`` mode (chosen ids are recorded in events, so replay never
    redraws)."""

    def __init__(self, policy: AssignmentPolicy):
        self.policy = policy
        self._rng = random.Random(policy.seed)

    # ---- eligibility ----

    def eligible_microtasks(self, state: "ProjectState", worker_id: str) -> list["MicrotaskRecord"]:
        cooldowns = state.skip_cooldowns.get(worker_id, {})
        eligible = []
        for microtask_id in state.queue:
            record = state.microtasks[microtask_id]
            if record.state is not MicrotaskState.QUEUED:
                continue
            if cooldowns.get(microtask_id, 0) > 0:
                continue
            if (
                record.kind is MicrotaskKind.REVIEW
                and not self.policy.self_review_allowed
                and state.submissions[record.submission_id].submission.worker_id == worker_id
            ):
                continue
            eligible.append(record)
        return eligible

    # ---- commands ----

    def fetch(self, state: "ProjectState", worker_id: str, now: float) -> list[ev.ProjectEvent] | None:
        """Assign the next eligible microtask, or return None when there is
        nothing this worker may take."""
        if worker_id in state.assignments:
            raise WorkerBusyError(f"worker {worker_id} already holds an assignment")
        eligible = self.eligible_microtasks(state, worker_id)
        if not eligible:
            return None
        if self.policy.mode == RANDOM:
            record = eligible[self._rng.randrange(len(eligible))]
        else:
            record = eligible[0]
        return [
            ev.ProjectEvent(
                sequence=state.last_sequence + 1,
                timestamp=now,
                kind=ev.MICROTASK_ASSIGNED,
                payload={
                    "microtaskId": record.id,
                    "workerId": worker_id,
                    "deadline": now + self.policy.time_limit_minutes,
                },
            )
        ]

    def skip(self, state: "ProjectState", worker_id: str, now: float) -> list[ev.ProjectEvent]:
        record = state.assignment_of(worker_id)
        if record is None:
            raise StaleAssignmentError(f"worker {worker_id} holds no assignment")
        if record.deadline is not None and now >= record.deadline:
            raise StaleAssignmentError(f"assignment of {record.id} has expired")
        return [
            ev.ProjectEvent(
                sequence=state.last_sequence + 1,
                timestamp=now,
                kind=ev.MICROTASK_SKIPPED,
                payload={"microtaskId": record.id, "workerId": worker_id},
            )
        ]

    def tick(self, state: "ProjectState", now: float) -> list[ev.ProjectEvent]:
        """Emit the time warning once per assignment past ``warning_at`` and
        expire (re-enqueue) assignments past the limit.

        Repeated ticks at the same instant are no-ops for already-warned or
        already-expired assignments.
        """
        events: list[ev.ProjectEvent] = []
        sequence = state.last_sequence
        assigned = sorted(
            (state.microtasks[mt_id] for mt_id in state.assignments.values()),
            key=lambda record: (record.assigned_at, record.id),
        )
        notification_offset = 0
        for record in assigned:
            elapsed = now - (record.assigned_at or 0.0)
            if not record.warned and elapsed >= self.policy.warning_at_minutes:
                sequence += 1
                events.append(
                    ev.ProjectEvent(
                        sequence=sequence,
                        timestamp=now,
                        kind=ev.NOTIFICATION_EMITTED,
                        payload={
                            "notificationId": state.next_notification_id(notification_offset),
                            "recipientWorkerId": record.assigned_worker,
                            "kind": "time-warning",
                            "detail": {
                                "microtaskId": record.id,
                                "deadline": record.deadline,
                            },
                        },
                    )
                )
                notification_offset += 1
            if elapsed >= self.policy.time_limit_minutes:
                sequence += 1
                events.append(
                    ev.ProjectEvent(
                        sequence=sequence,
                        timestamp=now,
                        kind=ev.MICROTASK_EXPIRED,
                        payload={"microtaskId": record.id, "workerId": record.assigned_worker},
                    )
                )
        return events
