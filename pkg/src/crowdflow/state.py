"""Project state as a pure fold over the event log.

``ProjectState.apply`` is the single place state transitions happen; every
command handler only *emits* events. Replaying a log therefore reproduces
state bit-exactly (compare ``to_dict`` forms), and an out-of-order or
structurally impossible event raises :class:`StateError` naming the
sequence number, which is how corrupt logs are detected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from . import events as ev
from .errors import StateError
from .model import (
    Answer,
    ClientRequest,
    FunctionOrigin,
    FunctionState,
    MicrotaskKind,
    MicrotaskState,
    Notification,
    NotificationKind,
    Question,
    Stub,
    Submission,
    SubmissionKind,
    TestCase,
    TypeRef,
)
from .scheduler import AssignmentPolicy


def _params_from_payload(raw: list) -> tuple[tuple[str, TypeRef], ...]:
    return tuple((p["name"], TypeRef.parse(p["type"])) for p in raw)


def _params_to_payload(params) -> list:
    return [{"name": n, "type": t.render()} for n, t in params]


@dataclass
class FunctionRecord:
    """A function under construction, as derived from the event log."""

    id: str
    name: str
    description: str
    params: tuple[tuple[str, TypeRef], ...]
    return_type: Optional[TypeRef]
    origin: FunctionOrigin
    creator_worker_id: str | None = None
    state: FunctionState = FunctionState.AWAITING_WORK
    halted_issue_id: str | None = None
    code: str = ""
    tests: list[TestCase] = field(default_factory=list)
    stubs: list[Stub] = field(default_factory=list)
    version: int = 0
    behaviors_applied: int = 0

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "id": self.id,
            "name": self.name,
            "description": self.description,
            "params": _params_to_payload(self.params),
            "returnType": self.return_type.render() if self.return_type else "void",
            "origin": self.origin.value,
            "state": self.state.value,
            "code": self.code,
            "tests": [t.to_dict() for t in self.tests],
            "stubs": [s.to_dict() for s in self.stubs],
            "version": self.version,
            "behaviorsApplied": self.behaviors_applied,
        }
        if self.creator_worker_id is not None:
            data["creatorWorkerId"] = self.creator_worker_id
        if self.halted_issue_id is not None:
            data["haltedIssueId"] = self.halted_issue_id
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionRecord":
        raw_return = data.get("returnType", "void")
        return cls(
            id=data["id"],
            name=data["name"],
            description=data["description"],
            params=_params_from_payload(data.get("params", [])),
            return_type=None if raw_return == "void" else TypeRef.parse(raw_return),
            origin=FunctionOrigin(data["origin"]),
            creator_worker_id=data.get("creatorWorkerId"),
            state=FunctionState(data["state"]),
            halted_issue_id=data.get("haltedIssueId"),
            code=data.get("code", ""),
            tests=[TestCase.from_dict(t) for t in data.get("tests", [])],
            stubs=[Stub.from_dict(s) for s in data.get("stubs", [])],
            version=data.get("version", 0),
            behaviors_applied=data.get("behaviorsApplied", 0),
        )


@dataclass
class MicrotaskRecord:
    id: str
    kind: MicrotaskKind
    created_at: float
    function_id: str | None = None  # implement-behavior tasks
    submission_id: str | None = None  # review tasks
    rework_feedback: str | None = None
    state: MicrotaskState = MicrotaskState.QUEUED
    assigned_worker: str | None = None
    assigned_at: float | None = None
    deadline: float | None = None
    warned: bool = False

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "id": self.id,
            "kind": self.kind.value,
            "createdAt": self.created_at,
            "state": self.state.value,
            "warned": self.warned,
        }
        for key, value in (
            ("functionId", self.function_id),
            ("submissionId", self.submission_id),
            ("reworkFeedback", self.rework_feedback),
            ("assignedWorker", self.assigned_worker),
            ("assignedAt", self.assigned_at),
            ("deadline", self.deadline),
        ):
            if value is not None:
                data[key] = value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "MicrotaskRecord":
        return cls(
            id=data["id"],
            kind=MicrotaskKind(data["kind"]),
            created_at=data["createdAt"],
            function_id=data.get("functionId"),
            submission_id=data.get("submissionId"),
            rework_feedback=data.get("reworkFeedback"),
            state=MicrotaskState(data["state"]),
            assigned_worker=data.get("assignedWorker"),
            assigned_at=data.get("assignedAt"),
            deadline=data.get("deadline"),
            warned=data.get("warned", False),
        )


@dataclass
class SubmissionRecord:
    submission: Submission
    received_at: float
    status: str = "pending"  # pending | applied | issue
    stars: int | None = None
    applied_version: int | None = None

    def to_dict(self) -> dict:
        data = {
            "submission": self.submission.to_dict(),
            "receivedAt": self.received_at,
            "status": self.status,
        }
        if self.stars is not None:
            data["stars"] = self.stars
        if self.applied_version is not None:
            data["appliedVersion"] = self.applied_version
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SubmissionRecord":
        return cls(
            submission=Submission.from_dict(data["submission"]),
            received_at=data["receivedAt"],
            status=data["status"],
            stars=data.get("stars"),
            applied_version=data.get("appliedVersion"),
        )


@dataclass
class IssueRecord:
    id: str
    function_id: str
    submission_id: str
    text: str
    opened_at: float
    resolved: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "functionId": self.function_id,
            "submissionId": self.submission_id,
            "text": self.text,
            "openedAt": self.opened_at,
            "resolved": self.resolved,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IssueRecord":
        return cls(
            id=data["id"],
            function_id=data["functionId"],
            submission_id=data["submissionId"],
            text=data["text"],
            opened_at=data["openedAt"],
            resolved=data.get("resolved", False),
        )


@dataclass(frozen=True)
class ScoreEntry:
    sequence: int
    worker_id: str
    points: int
    reason: dict
    submission_id: str

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "workerId": self.worker_id,
            "points": self.points,
            "reason": self.reason,
            "submissionId": self.submission_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreEntry":
        return cls(
            sequence=data["sequence"],
            worker_id=data["workerId"],
            points=data["points"],
            reason=data["reason"],
            submission_id=data["submissionId"],
        )


LIVE_MICROTASK_STATES = (
    MicrotaskState.QUEUED,
    MicrotaskState.ASSIGNED,
    MicrotaskState.SUBMITTED,
)


class ProjectState:
    """Mutable fold target; mutated only through :meth:`apply`."""

    def __init__(self) -> None:
        self.project_id: str | None = None
        self.client_request: ClientRequest | None = None
        self.policy: AssignmentPolicy = AssignmentPolicy()
        self.functions: dict[str, FunctionRecord] = {}
        self.microtasks: dict[str, MicrotaskRecord] = {}
        self.queue: list[str] = []
        self.submissions: dict[str, SubmissionRecord] = {}
        self.reviews: dict[str, dict] = {}
        self.issues: dict[str, IssueRecord] = {}
        self.questions: dict[str, Question] = {}
        self.answers: dict[str, Answer] = {}
        self.notifications: list[Notification] = []
        self.scores: list[ScoreEntry] = []
        self.assignments: dict[str, str] = {}  # workerId -> microtaskId
        self.skip_cooldowns: dict[str, dict[str, int]] = {}
        self.publications: list[dict] = []
        self.last_sequence: int = 0

    # ---- id allocation (dense, derived from fold so replay agrees) ----

    def next_function_id(self, offset: int = 0) -> str:
        return f"fn-{len(self.functions) + 1 + offset}"

    def next_microtask_id(self, offset: int = 0) -> str:
        return f"mt-{len(self.microtasks) + 1 + offset}"

    def next_issue_id(self) -> str:
        return f"issue-{len(self.issues) + 1}"

    def next_question_id(self) -> str:
        return f"q-{len(self.questions) + 1}"

    def next_answer_id(self) -> str:
        return f"ans-{len(self.answers) + 1}"

    def next_notification_id(self, offset: int = 0) -> str:
        return f"note-{len(self.notifications) + 1 + offset}"

    def next_submission_id(self) -> str:
        return f"sub-{len(self.submissions) + 1}"

    # ---- queries ----

    def function_by_name(self, name: str) -> FunctionRecord | None:
        for record in self.functions.values():
            if record.name == name:
                return record
        return None

    def live_microtasks(self) -> list[MicrotaskRecord]:
        return [m for m in self.microtasks.values() if m.state in LIVE_MICROTASK_STATES]

    def microtask_function_id(self, microtask: MicrotaskRecord) -> str:
        """The function a microtask locks, directly or via its submission."""
        if microtask.kind is MicrotaskKind.IMPLEMENT_BEHAVIOR:
            assert microtask.function_id is not None
            return microtask.function_id
        record = self.submissions[microtask.submission_id]
        parent = self.microtasks[record.submission.microtask_id]
        assert parent.function_id is not None
        return parent.function_id

    def review_microtask_for(self, submission_id: str) -> MicrotaskRecord | None:
        for record in self.microtasks.values():
            if record.kind is MicrotaskKind.REVIEW and record.submission_id == submission_id:
                return record
        return None

    def assignment_of(self, worker_id: str) -> MicrotaskRecord | None:
        microtask_id = self.assignments.get(worker_id)
        return self.microtasks[microtask_id] if microtask_id else None

    # ---- the fold ----

    def apply(self, event: ev.ProjectEvent) -> None:
        if event.sequence != self.last_sequence + 1:
            raise StateError(
                f"bad sequence {event.sequence}: expected {self.last_sequence + 1}"
            )
        handler = _FOLD.get(event.kind)
        if handler is None:
            raise StateError(f"unknown event kind {event.kind!r}")
        try:
            handler(self, event)
        except StateError:
            raise
        except (KeyError, ValueError, TypeError) as exc:
            raise StateError(
                f"event {event.sequence} ({event.kind}) cannot be applied: {exc}"
            ) from exc
        self.last_sequence = event.sequence

    def apply_all(self, batch: Iterable[ev.ProjectEvent]) -> None:
        for event in batch:
            self.apply(event)

    def to_dict(self) -> dict:
        return {
            "projectId": self.project_id,
            "clientRequest": self.client_request.to_dict() if self.client_request else None,
            "policy": self.policy.to_dict(),
            "functions": [f.to_dict() for f in self.functions.values()],
            "microtasks": [m.to_dict() for m in self.microtasks.values()],
            "queue": list(self.queue),
            "submissions": [s.to_dict() for s in self.submissions.values()],
            "reviews": dict(self.reviews),
            "issues": [i.to_dict() for i in self.issues.values()],
            "questions": [q.to_dict() for q in self.questions.values()],
            "answers": [a.to_dict() for a in self.answers.values()],
            "notifications": [n.to_dict() for n in self.notifications],
            "scores": [s.to_dict() for s in self.scores],
            "assignments": dict(self.assignments),
            "skipCooldowns": {w: dict(c) for w, c in self.skip_cooldowns.items()},
            "publications": list(self.publications),
            "lastSequence": self.last_sequence,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProjectState":
        state = cls()
        state.project_id = data.get("projectId")
        if data.get("clientRequest"):
            state.client_request = ClientRequest.from_dict(data["clientRequest"])
        state.policy = AssignmentPolicy.from_dict(data.get("policy", {}))
        state.functions = {
            f["id"]: FunctionRecord.from_dict(f) for f in data.get("functions", [])
        }
        state.microtasks = {
            m["id"]: MicrotaskRecord.from_dict(m) for m in data.get("microtasks", [])
        }
        state.queue = list(data.get("queue", []))
        state.submissions = {
            s["submission"]["id"]: SubmissionRecord.from_dict(s)
            for s in data.get("submissions", [])
        }
        state.reviews = dict(data.get("reviews", {}))
        state.issues = {i["id"]: IssueRecord.from_dict(i) for i in data.get("issues", [])}
        state.questions = {
            q["id"]: Question(
                id=q["id"],
                project_id=q["projectId"],
                author_worker_id=q["authorWorkerId"],
                text=q["text"],
                timestamp=q["timestamp"],
            )
            for q in data.get("questions", [])
        }
        state.answers = {
            a["id"]: Answer(
                id=a["id"],
                question_id=a["questionId"],
                author_worker_id=a["authorWorkerId"],
                text=a["text"],
                timestamp=a["timestamp"],
            )
            for a in data.get("answers", [])
        }
        state.notifications = [
            Notification(
                id=n["id"],
                recipient_worker_id=n["recipientWorkerId"],
                kind=NotificationKind(n["kind"]),
                detail=n.get("detail", {}),
                read=n.get("read", False),
            )
            for n in data.get("notifications", [])
        ]
        state.scores = [ScoreEntry.from_dict(s) for s in data.get("scores", [])]
        state.assignments = dict(data.get("assignments", {}))
        state.skip_cooldowns = {
            w: dict(c) for w, c in data.get("skipCooldowns", {}).items()
        }
        state.publications = list(data.get("publications", []))
        state.last_sequence = data.get("lastSequence", 0)
        return state


def fold(event_log: Iterable[ev.ProjectEvent]) -> ProjectState:
    state = ProjectState()
    state.apply_all(event_log)
    return state


# ---- fold handlers, one per event kind ----


def _on_project_created(state: ProjectState, event: ev.ProjectEvent) -> None:
    if state.project_id is not None:
        raise StateError("project already created")
    state.project_id = event.payload["projectId"]
    state.client_request = ClientRequest.from_dict(event.payload["clientRequest"])
    state.policy = AssignmentPolicy.from_dict(event.payload.get("policy", {}))


def _on_function_created(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    function_id = payload["functionId"]
    if function_id in state.functions:
        raise StateError(f"duplicate function id {function_id}")
    if any(f.name == payload["name"] for f in state.functions.values()):
        raise StateError(f"duplicate function name {payload['name']!r}")
    raw_return = payload.get("returnType", "void")
    state.functions[function_id] = FunctionRecord(
        id=function_id,
        name=payload["name"],
        description=payload.get("description", ""),
        params=_params_from_payload(payload.get("params", [])),
        return_type=None if raw_return == "void" else TypeRef.parse(raw_return),
        origin=FunctionOrigin(payload["origin"]),
        creator_worker_id=payload.get("creatorWorkerId"),
    )


def _on_microtask_generated(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    microtask_id = payload["microtaskId"]
    if microtask_id in state.microtasks:
        raise StateError(f"duplicate microtask id {microtask_id}")
    kind = MicrotaskKind(payload["kind"])
    record = MicrotaskRecord(
        id=microtask_id,
        kind=kind,
        created_at=event.timestamp,
        function_id=payload.get("functionId"),
        submission_id=payload.get("submissionId"),
        rework_feedback=payload.get("reworkFeedback"),
    )
    if kind is MicrotaskKind.IMPLEMENT_BEHAVIOR and record.function_id not in state.functions:
        raise StateError(f"microtask {microtask_id} references unknown function")
    if kind is MicrotaskKind.REVIEW:
        submission = state.submissions[record.submission_id]
        # The submitted implement-behavior microtask's lifecycle ends here:
        # from now on the function is locked by the review microtask.
        parent = state.microtasks[submission.submission.microtask_id]
        if parent.state is MicrotaskState.SUBMITTED:
            parent.state = MicrotaskState.RETIRED
    state.microtasks[microtask_id] = record
    state.queue.append(microtask_id)


def _on_microtask_assigned(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    record = state.microtasks[payload["microtaskId"]]
    worker_id = payload["workerId"]
    if record.state is not MicrotaskState.QUEUED:
        raise StateError(f"microtask {record.id} is not queued")
    if worker_id in state.assignments:
        raise StateError(f"worker {worker_id} already holds an assignment")
    record.state = MicrotaskState.ASSIGNED
    record.assigned_worker = worker_id
    record.assigned_at = event.timestamp
    record.deadline = payload["deadline"]
    record.warned = False
    state.queue.remove(record.id)
    state.assignments[worker_id] = record.id
    cooldowns = state.skip_cooldowns.get(worker_id)
    if cooldowns:
        for microtask_id in list(cooldowns):
            cooldowns[microtask_id] -= 1
            if cooldowns[microtask_id] <= 0:
                del cooldowns[microtask_id]
        if not cooldowns:
            del state.skip_cooldowns[worker_id]


def _release_assignment(state: ProjectState, record: MicrotaskRecord,
                        worker_id: str, *, cooldown: bool) -> None:
    if record.assigned_worker != worker_id or record.state is not MicrotaskState.ASSIGNED:
        raise StateError(f"microtask {record.id} is not assigned to {worker_id}")
    record.state = MicrotaskState.QUEUED
    record.assigned_worker = None
    record.assigned_at = None
    record.deadline = None
    record.warned = False
    state.queue.append(record.id)
    state.assignments.pop(worker_id, None)
    if cooldown and state.policy.skip_cooldown > 0:
        state.skip_cooldowns.setdefault(worker_id, {})[record.id] = state.policy.skip_cooldown


def _on_microtask_skipped(state: ProjectState, event: ev.ProjectEvent) -> None:
    record = state.microtasks[event.payload["microtaskId"]]
    _release_assignment(state, record, event.payload["workerId"], cooldown=True)


def _on_microtask_expired(state: ProjectState, event: ev.ProjectEvent) -> None:
    record = state.microtasks[event.payload["microtaskId"]]
    _release_assignment(state, record, event.payload["workerId"], cooldown=True)


def _on_submission_received(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    submission = Submission.from_dict(payload)
    if submission.id in state.submissions:
        raise StateError(f"duplicate submission id {submission.id}")
    record = state.microtasks[submission.microtask_id]
    if record.state is not MicrotaskState.ASSIGNED or record.assigned_worker != submission.worker_id:
        raise StateError(
            f"microtask {submission.microtask_id} is not assigned to {submission.worker_id}"
        )
    record.state = MicrotaskState.SUBMITTED
    state.assignments.pop(submission.worker_id, None)
    state.submissions[submission.id] = SubmissionRecord(
        submission=submission, received_at=event.timestamp
    )


def _on_review_recorded(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    submission_id = payload["submissionId"]
    if submission_id in state.reviews:
        raise StateError(f"submission {submission_id} already reviewed")
    review_task = state.microtasks[payload["microtaskId"]]
    reviewer = payload["reviewerWorkerId"]
    if review_task.state is not MicrotaskState.ASSIGNED or review_task.assigned_worker != reviewer:
        raise StateError(f"review microtask {review_task.id} is not assigned to {reviewer}")
    review_task.state = MicrotaskState.RETIRED
    state.assignments.pop(reviewer, None)
    state.reviews[submission_id] = {
        "submissionId": submission_id,
        "reviewerWorkerId": reviewer,
        "stars": payload["stars"],
        "feedback": payload.get("feedback", ""),
        "microtaskId": review_task.id,
    }
    state.submissions[submission_id].stars = payload["stars"]


def _on_contribution_applied(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    function = state.functions[payload["functionId"]]
    record = state.submissions[payload["submissionId"]]
    version = payload["version"]
    if version != function.version + 1:
        raise StateError(
            f"version {version} applied to function at version {function.version}"
        )
    submission = record.submission
    if submission.payload.kind is SubmissionKind.BEHAVIOR_CONTRIBUTION:
        contribution = submission.payload
        if contribution.code_diff:
            function.code = contribution.code_diff
        function.tests.extend(contribution.tests_added)
        existing = {stub.key(): i for i, stub in enumerate(function.stubs)}
        for stub in contribution.stubs_added:
            if stub.key() in existing:
                function.stubs[existing[stub.key()]] = stub
            else:
                existing[stub.key()] = len(function.stubs)
                function.stubs.append(stub)
        function.behaviors_applied += 1
    function.version = version
    record.status = "applied"
    record.applied_version = version


def _on_rework_requested(state: ProjectState, event: ev.ProjectEvent) -> None:
    # Informational: the rework microtask itself carries the feedback.
    state.submissions[event.payload["submissionId"]]  # existence check


def _on_issue_opened(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    issue_id = payload["issueId"]
    if issue_id in state.issues:
        raise StateError(f"duplicate issue id {issue_id}")
    function = state.functions[payload["functionId"]]
    submission = state.submissions[payload["submissionId"]]
    state.issues[issue_id] = IssueRecord(
        id=issue_id,
        function_id=function.id,
        submission_id=submission.submission.id,
        text=payload["text"],
        opened_at=event.timestamp,
    )
    function.state = FunctionState.HALTED
    function.halted_issue_id = issue_id
    parent = state.microtasks[submission.submission.microtask_id]
    if parent.state is MicrotaskState.SUBMITTED:
        parent.state = MicrotaskState.RETIRED
    submission.status = "issue"


def _on_issue_resolved(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    issue = state.issues[payload["issueId"]]
    if issue.resolved:
        raise StateError(f"issue {issue.id} already resolved")
    issue.resolved = True
    function = state.functions[issue.function_id]
    function.state = FunctionState.AWAITING_WORK
    function.halted_issue_id = None
    if "description" in payload:
        function.description = payload["description"]
    if "params" in payload:
        function.params = _params_from_payload(payload["params"])
    if "returnType" in payload:
        raw = payload["returnType"]
        function.return_type = None if raw == "void" else TypeRef.parse(raw)


def _on_function_completed(state: ProjectState, event: ev.ProjectEvent) -> None:
    function = state.functions[event.payload["functionId"]]
    if function.state is not FunctionState.AWAITING_WORK:
        raise StateError(f"function {function.id} cannot complete from {function.state.value}")
    function.state = FunctionState.COMPLETED


def _on_question_posted(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    question_id = payload["questionId"]
    if question_id in state.questions:
        raise StateError(f"duplicate question id {question_id}")
    state.questions[question_id] = Question(
        id=question_id,
        project_id=state.project_id or "",
        author_worker_id=payload["workerId"],
        text=payload["text"],
        timestamp=event.timestamp,
    )


def _on_answer_posted(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    answer_id = payload["answerId"]
    if answer_id in state.answers:
        raise StateError(f"duplicate answer id {answer_id}")
    if payload["questionId"] not in state.questions:
        raise StateError(f"answer references unknown question {payload['questionId']}")
    state.answers[answer_id] = Answer(
        id=answer_id,
        question_id=payload["questionId"],
        author_worker_id=payload["workerId"],
        text=payload["text"],
        timestamp=event.timestamp,
    )


def _on_notification_emitted(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    kind = NotificationKind(payload["kind"])
    detail = payload.get("detail", {})
    state.notifications.append(
        Notification(
            id=payload["notificationId"],
            recipient_worker_id=payload["recipientWorkerId"],
            kind=kind,
            detail=detail,
        )
    )
    if kind is NotificationKind.TIME_WARNING:
        record = state.microtasks[detail["microtaskId"]]
        record.warned = True


def _on_score_awarded(state: ProjectState, event: ev.ProjectEvent) -> None:
    payload = event.payload
    points = payload["points"]
    if points <= 0:
        raise StateError("score awards must be positive")
    state.scores.append(
        ScoreEntry(
            sequence=event.sequence,
            worker_id=payload["workerId"],
            points=points,
            reason=payload["reason"],
            submission_id=payload["submissionId"],
        )
    )


def _on_project_published(state: ProjectState, event: ev.ProjectEvent) -> None:
    state.publications.append(
        {
            "location": event.payload["location"],
            "contentHash": event.payload["contentHash"],
            "timestamp": event.timestamp,
        }
    )


_FOLD = {
    ev.PROJECT_CREATED: _on_project_created,
    ev.FUNCTION_CREATED: _on_function_created,
    ev.MICROTASK_GENERATED: _on_microtask_generated,
    ev.MICROTASK_ASSIGNED: _on_microtask_assigned,
    ev.MICROTASK_SKIPPED: _on_microtask_skipped,
    ev.MICROTASK_EXPIRED: _on_microtask_expired,
    ev.SUBMISSION_RECEIVED: _on_submission_received,
    ev.REVIEW_RECORDED: _on_review_recorded,
    ev.CONTRIBUTION_APPLIED: _on_contribution_applied,
    ev.REWORK_REQUESTED: _on_rework_requested,
    ev.ISSUE_OPENED: _on_issue_opened,
    ev.ISSUE_RESOLVED: _on_issue_resolved,
    ev.FUNCTION_COMPLETED: _on_function_completed,
    ev.QUESTION_POSTED: _on_question_posted,
    ev.ANSWER_POSTED: _on_answer_posted,
    ev.NOTIFICATION_EMITTED: _on_notification_emitted,
    ev.SCORE_AWARDED: _on_score_awarded,
    ev.PROJECT_PUBLISHED: _on_project_published,
}
