"""Command handlers for the microtask workflow.

Each handler is a pure function ``(state, command) -> [events]``; it never
mutates state. The rules implemented here drive the whole workflow:

* creating a project creates one function and one implement-behavior
  microtask per endpoint;
* every submitted behavior contribution or completion claim generates
  exactly one review microtask (issue reports bypass review and halt the
  function);
* a review outcome applies the contribution either way (a rework task must
  see the code it is fixing), awards points (2 per star to the implementer,
  5 to the reviewer), and either completes the function or chains the next
  implement-behavior microtask;
* resolving an issue updates the function and resumes the chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import events as ev
from .errors import (
    AuthorizationError,
    ConflictError,
    StaleAssignmentError,
    UnknownEntityError,
    ValidationFailure,
)
from .model import (
    ClientRequest,
    EndpointSpec,
    FunctionOrigin,
    FunctionState,
    MicrotaskKind,
    MicrotaskState,
    ReviewDecision,
    Submission,
    SubmissionKind,
    TestKind,
    TypeRef,
    is_identifier,
)
from .scheduler import AssignmentPolicy
from .state import FunctionRecord, ProjectState
from .validation import validate_client_request

IMPLEMENTER_POINTS_PER_STAR = 2
REVIEWER_POINTS = 5


@dataclass(frozen=True)
class Principal:
    """Resolved caller identity: the project client or a crowd worker."""

    kind: str  # "client" | "worker"
    id: str

    @property
    def is_client(self) -> bool:
        return self.kind == "client"


class _Batch:
    """Collects one atomic event batch with dense sequence numbers."""

    def __init__(self, state: ProjectState, now: float):
        self.events: list[ev.ProjectEvent] = []
        self._sequence = state.last_sequence
        self._now = now

    def emit(self, kind: str, payload: dict) -> None:
        self._sequence += 1
        self.events.append(
            ev.ProjectEvent(sequence=self._sequence, timestamp=self._now,
                            kind=kind, payload=payload)
        )


def init_project(request: ClientRequest, *, project_id: str,
                 policy: AssignmentPolicy | None = None,
                 now: float = 0.0) -> list[ev.ProjectEvent]:
    """Create a project: one function plus one implement-behavior microtask
    per endpoint. Rejects invalid requests with their violations."""
    result = validate_client_request(request)
    if not result.ok:
        raise ValidationFailure(result.violations)
    policy = policy or AssignmentPolicy()
    state = ProjectState()
    batch = _Batch(state, now)
    batch.emit(ev.PROJECT_CREATED, {
        "projectId": project_id,
        "clientRequest": request.to_dict(),
        "policy": policy.to_dict(),
    })
    for index, endpoint in enumerate(request.endpoints):
        function_id = f"fn-{index + 1}"
        batch.emit(ev.FUNCTION_CREATED, _function_created_payload(function_id, endpoint))
        batch.emit(ev.MICROTASK_GENERATED, {
            "microtaskId": f"mt-{index + 1}",
            "kind": MicrotaskKind.IMPLEMENT_BEHAVIOR.value,
            "functionId": function_id,
        })
    return batch.events


def _function_created_payload(function_id: str, endpoint: EndpointSpec) -> dict:
    return {
        "functionId": function_id,
        "name": endpoint.function_name,
        "description": endpoint.description,
        "params": [{"name": n, "type": t.render()} for n, t in endpoint.params],
        "returnType": endpoint.return_type.render() if endpoint.return_type else "void",
        "origin": FunctionOrigin.CLIENT_ENDPOINT.value,
    }


def _require_live_assignment(state: ProjectState, microtask_id: str,
                             worker_id: str, now: float):
    record = state.microtasks.get(microtask_id)
    if record is None:
        raise UnknownEntityError(f"unknown microtask {microtask_id}")
    if (
        record.state is not MicrotaskState.ASSIGNED
        or record.assigned_worker != worker_id
        or (record.deadline is not None and now >= record.deadline)
    ):
        raise StaleAssignmentError(
            f"microtask {microtask_id} is not held live by worker {worker_id}"
        )
    return record


def handle_ifb_submission(state: ProjectState, submission: Submission, *,
                          now: float) -> list[ev.ProjectEvent]:
    """Accept a terminal action on an implement-behavior assignment.

    Contributions and completion claims are staged for review (one review
    microtask each, even when the attached test report is red); issue
    reports halt the function and route to the client instead.
    """
    if submission.id in state.submissions:
        raise ConflictError(f"duplicate submission id {submission.id}")
    record = _require_live_assignment(state, submission.microtask_id,
                                      submission.worker_id, now)
    if record.kind is not MicrotaskKind.IMPLEMENT_BEHAVIOR:
        raise ConflictError(f"microtask {record.id} is not an implement-behavior task")
    function = state.functions[record.function_id]
    if function.state is not FunctionState.AWAITING_WORK:
        raise ConflictError(f"function {function.id} is {function.state.value}")
    _validate_payload(state, function, submission)

    batch = _Batch(state, now)
    batch.emit(ev.SUBMISSION_RECEIVED, submission.to_dict())

    if submission.payload.kind is SubmissionKind.ISSUE_REPORT:
        batch.emit(ev.ISSUE_OPENED, {
            "issueId": state.next_issue_id(),
            "functionId": function.id,
            "submissionId": submission.id,
            "text": submission.payload.text,
        })
        return batch.events

    microtask_offset = 0
    batch.emit(ev.MICROTASK_GENERATED, {
        "microtaskId": state.next_microtask_id(microtask_offset),
        "kind": MicrotaskKind.REVIEW.value,
        "submissionId": submission.id,
    })
    microtask_offset += 1
    if submission.payload.kind is SubmissionKind.BEHAVIOR_CONTRIBUTION:
        for index, new_function in enumerate(submission.payload.new_functions):
            function_id = state.next_function_id(index)
            batch.emit(ev.FUNCTION_CREATED, {
                "functionId": function_id,
                "name": new_function.name,
                "description": new_function.description,
                "params": [{"name": n, "type": t.render()} for n, t in new_function.params],
                "returnType": (new_function.return_type.render()
                               if new_function.return_type else "void"),
                "origin": FunctionOrigin.CROWD_CREATED.value,
                "creatorWorkerId": submission.worker_id,
            })
            batch.emit(ev.MICROTASK_GENERATED, {
                "microtaskId": state.next_microtask_id(microtask_offset),
                "kind": MicrotaskKind.IMPLEMENT_BEHAVIOR.value,
                "functionId": function_id,
            })
            microtask_offset += 1
    return batch.events


def _validate_payload(state: ProjectState, function: FunctionRecord,
                      submission: Submission) -> None:
    payload = submission.payload
    if payload.kind is not SubmissionKind.BEHAVIOR_CONTRIBUTION:
        return
    violations = []
    arity = len(function.params)
    for test in payload.tests_added:
        if test.kind is TestKind.IO_PAIR and len(test.inputs) != arity:
            violations.append(
                f"test {test.id!r}: {len(test.inputs)} inputs for a"
                f" {arity}-parameter function"
            )
    existing_names = {f.name for f in state.functions.values()}
    requested: set[str] = set()
    for new_function in payload.new_functions:
        if not is_identifier(new_function.name):
            violations.append(f"new function name {new_function.name!r} is invalid")
        elif new_function.name in existing_names or new_function.name in requested:
            violations.append(f"new function name {new_function.name!r} already exists")
        requested.add(new_function.name)
    if violations:
        raise ValidationFailure(violations)


def handle_review_submission(state: ProjectState, decision: ReviewDecision, *,
                             now: float) -> list[ev.ProjectEvent]:
    """Record a review outcome and continue the function's microtask chain.

    4-5 stars accept; 1-3 stars request rework with the reviewer's
    feedback. The contribution is applied to the artifact in both cases so
    a rework task sees the code it must fix.
    """
    review_task = state.review_microtask_for(decision.submission_id)
    if review_task is None:
        raise UnknownEntityError(f"no review microtask for submission {decision.submission_id}")
    _require_live_assignment(state, review_task.id, decision.reviewer_worker_id, now)

    submission_record = state.submissions[decision.submission_id]
    submission = submission_record.submission
    parent_task = state.microtasks[submission.microtask_id]
    function = state.functions[parent_task.function_id]

    batch = _Batch(state, now)
    batch.emit(ev.REVIEW_RECORDED, {
        "submissionId": decision.submission_id,
        "reviewerWorkerId": decision.reviewer_worker_id,
        "stars": decision.stars,
        "feedback": decision.feedback,
        "microtaskId": review_task.id,
    })
    batch.emit(ev.CONTRIBUTION_APPLIED, {
        "functionId": function.id,
        "submissionId": decision.submission_id,
        "version": function.version + 1,
    })
    batch.emit(ev.SCORE_AWARDED, {
        "workerId": submission.worker_id,
        "points": IMPLEMENTER_POINTS_PER_STAR * decision.stars,
        "reason": {"kind": "implementer-award", "stars": decision.stars},
        "submissionId": decision.submission_id,
    })
    batch.emit(ev.SCORE_AWARDED, {
        "workerId": decision.reviewer_worker_id,
        "points": REVIEWER_POINTS,
        "reason": {"kind": "reviewer-award"},
        "submissionId": decision.submission_id,
    })

    notification = {
        "notificationId": state.next_notification_id(),
        "recipientWorkerId": submission.worker_id,
        "kind": "review-received",
        "detail": {
            "stars": decision.stars,
            "feedback": decision.feedback,
            "functionId": function.id,
            "submissionId": decision.submission_id,
        },
    }

    if decision.accepted:
        batch.emit(ev.NOTIFICATION_EMITTED, notification)
        if submission.payload.kind is SubmissionKind.MARK_COMPLETE:
            batch.emit(ev.FUNCTION_COMPLETED, {"functionId": function.id})
        else:
            batch.emit(ev.MICROTASK_GENERATED, {
                "microtaskId": state.next_microtask_id(),
                "kind": MicrotaskKind.IMPLEMENT_BEHAVIOR.value,
                "functionId": function.id,
            })
    else:
        batch.emit(ev.REWORK_REQUESTED, {
            "functionId": function.id,
            "submissionId": decision.submission_id,
            "feedback": decision.feedback,
        })
        batch.emit(ev.MICROTASK_GENERATED, {
            "microtaskId": state.next_microtask_id(),
            "kind": MicrotaskKind.IMPLEMENT_BEHAVIOR.value,
            "functionId": function.id,
            "reworkFeedback": decision.feedback,
        })
        batch.emit(ev.NOTIFICATION_EMITTED, notification)
    return batch.events


def resolve_issue(state: ProjectState, issue_id: str, resolution: dict, *,
                  principal: Principal, now: float) -> list[ev.ProjectEvent]:
    """Client-only: fix the reported problem (optionally updating the
    function's description or signature) and resume work."""
    if not principal.is_client:
        raise AuthorizationError("only the project client may resolve issues")
    issue = state.issues.get(issue_id)
    if issue is None:
        raise UnknownEntityError(f"unknown issue {issue_id}")
    if issue.resolved:
        raise ConflictError(f"issue {issue_id} is already resolved")

    payload: dict[str, Any] = {"issueId": issue_id, "functionId": issue.function_id}
    if "description" in resolution:
        if not str(resolution["description"]).strip():
            raise ValidationFailure(["resolved description must be nonempty"])
        payload["description"] = resolution["description"]
    if "params" in resolution:
        for param in resolution["params"]:
            TypeRef.parse(param["type"])  # raises on malformed types
            if not is_identifier(param["name"]):
                raise ValidationFailure([f"parameter name {param['name']!r} is invalid"])
        payload["params"] = resolution["params"]
    if "returnType" in resolution:
        if resolution["returnType"] != "void":
            TypeRef.parse(resolution["returnType"])
        payload["returnType"] = resolution["returnType"]

    batch = _Batch(state, now)
    batch.emit(ev.ISSUE_RESOLVED, payload)
    batch.emit(ev.MICROTASK_GENERATED, {
        "microtaskId": state.next_microtask_id(),
        "kind": MicrotaskKind.IMPLEMENT_BEHAVIOR.value,
        "functionId": issue.function_id,
    })
    return batch.events


def post_question(state: ProjectState, worker_id: str, text: str, *,
                  now: float) -> list[ev.ProjectEvent]:
    if not text.strip():
        raise ValidationFailure(["question text must be nonempty"])
    batch = _Batch(state, now)
    batch.emit(ev.QUESTION_POSTED, {
        "questionId": state.next_question_id(),
        "workerId": worker_id,
        "text": text,
    })
    return batch.events


def post_answer(state: ProjectState, question_id: str, worker_id: str, text: str, *,
                now: float) -> list[ev.ProjectEvent]:
    if question_id not in state.questions:
        raise UnknownEntityError(f"unknown question {question_id}")
    if not text.strip():
        raise ValidationFailure(["answer text must be nonempty"])
    batch = _Batch(state, now)
    batch.emit(ev.ANSWER_POSTED, {
        "answerId": state.next_answer_id(),
        "questionId": question_id,
        "workerId": worker_id,
        "text": text,
    })
    return batch.events


def record_publication(state: ProjectState, location: str, content_hash: str, *,
                       now: float) -> list[ev.ProjectEvent]:
    batch = _Batch(state, now)
    batch.emit(ev.PROJECT_PUBLISHED, {"location": location, "contentHash": content_hash})
    return batch.events


@dataclass(frozen=True)
class ProjectStatus:
    per_function: dict = field(default_factory=dict)
    live_microtasks: int = 0
    live_by_kind: dict = field(default_factory=dict)
    queued: int = 0
    complete: bool = False

    def to_dict(self) -> dict:
        return {
            "perFunction": dict(self.per_function),
            "liveMicrotasks": self.live_microtasks,
            "liveByKind": dict(self.live_by_kind),
            "queued": self.queued,
            "complete": self.complete,
        }


def project_status(state: ProjectState) -> ProjectStatus:
    """Complete means every function is completed and no live microtasks
    remain."""
    live = state.live_microtasks()
    by_kind: dict[str, int] = {}
    for record in live:
        by_kind[record.kind.value] = by_kind.get(record.kind.value, 0) + 1
    per_function = {f.id: f.state.value for f in state.functions.values()}
    complete = bool(state.functions) and not live and all(
        f.state is FunctionState.COMPLETED for f in state.functions.values()
    )
    return ProjectStatus(
        per_function=per_function,
        live_microtasks=len(live),
        live_by_kind=by_kind,
        queued=len(state.queue),
        complete=complete,
    )
