"""Shared domain types: client requests, function artifacts, microtasks,
submissions, and review decisions.

All types here are immutable value objects; they are safe to share between
threads and to embed in event payloads via their ``to_dict`` forms. The
type system for request/response data is deliberately small: the primitives
``string``/``number``/``boolean``, named ADTs, and lists thereof.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from .errors import ValidationFailure

PRIMITIVE_TYPES = ("string", "number", "boolean")

_IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(text: str) -> bool:
    return bool(_IDENTIFIER_RE.match(text))


@dataclass(frozen=True)
class TypeRef:
    """Reference to a primitive, an ADT by name, or a (possibly nested) list."""

    base: str
    list_depth: int = 0

    @property
    def is_primitive(self) -> bool:
        return self.base in PRIMITIVE_TYPES

    def element(self) -> "TypeRef":
        if self.list_depth == 0:
            raise ValueError("not a list type")
        return TypeRef(self.base, self.list_depth - 1)

    def render(self) -> str:
        text = self.base
        for _ in range(self.list_depth):
            text = f"list<{text}>"
        return text

    @classmethod
    def parse(cls, text: str) -> "TypeRef":
        depth = 0
        inner = text.strip()
        while inner.startswith("list<") and inner.endswith(">"):
            depth += 1
            inner = inner[len("list<") : -1].strip()
        if not is_identifier(inner):
            raise ValueError(f"invalid type reference: {text!r}")
        return cls(inner, depth)


@dataclass(frozen=True)
class Adt:
    """A named record of typed fields describing a structured JSON value."""

    name: str
    fields: tuple[tuple[str, TypeRef], ...]

    def field_map(self) -> dict[str, TypeRef]:
        return dict(self.fields)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "fields": [{"name": n, "type": t.render()} for n, t in self.fields],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Adt":
        fields = tuple(
            (f["name"], TypeRef.parse(f["type"])) for f in data.get("fields", [])
        )
        return cls(name=data["name"], fields=fields)


@dataclass(frozen=True)
class EndpointSpec:
    """One HTTP-exposed function of the requested microservice."""

    function_name: str
    description: str
    params: tuple[tuple[str, TypeRef], ...]
    return_type: Optional[TypeRef] = None  # None means void

    def to_dict(self) -> dict:
        return {
            "functionName": self.function_name,
            "description": self.description,
            "params": [{"name": n, "type": t.render()} for n, t in self.params],
            "returnType": self.return_type.render() if self.return_type else "void",
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EndpointSpec":
        raw_return = data.get("returnType", "void")
        return cls(
            function_name=data["functionName"],
            description=data.get("description", ""),
            params=tuple(
                (p["name"], TypeRef.parse(p["type"])) for p in data.get("params", [])
            ),
            return_type=None if raw_return in (None, "void") else TypeRef.parse(raw_return),
        )


@dataclass(frozen=True)
class ClientRequest:
    """The client's definition of a microservice: endpoints plus ADTs."""

    project_name: str
    project_description: str
    endpoints: tuple[EndpointSpec, ...]
    adts: tuple[Adt, ...] = ()
    deploy_target: Any = None

    def adt_registry(self) -> dict[str, Adt]:
        return {adt.name: adt for adt in self.adts}

    def to_dict(self) -> dict:
        data = {
            "projectName": self.project_name,
            "projectDescription": self.project_description,
            "endpoints": [e.to_dict() for e in self.endpoints],
            "adts": [a.to_dict() for a in self.adts],
        }
        if self.deploy_target is not None:
            data["deployTarget"] = self.deploy_target
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ClientRequest":
        return cls(
            project_name=data.get("projectName", ""),
            project_description=data.get("projectDescription", ""),
            endpoints=tuple(EndpointSpec.from_dict(e) for e in data.get("endpoints", [])),
            adts=tuple(Adt.from_dict(a) for a in data.get("adts", [])),
            deploy_target=data.get("deployTarget"),
        )


class FunctionState(str, Enum):
    AWAITING_WORK = "awaiting-work"
    HALTED = "halted"
    COMPLETED = "completed"


class FunctionOrigin(str, Enum):
    CLIENT_ENDPOINT = "client-endpoint"
    CROWD_CREATED = "crowd-created"


class TestKind(str, Enum):
    IO_PAIR = "io-pair"
    CODE = "code"


@dataclass(frozen=True)
class TestCase:
    """A unit test authored within a microtask: an input/output pair or a
    code test script."""

    __test__ = False  # keep pytest from collecting this domain type

    id: str
    kind: TestKind
    description: str = ""
    author_worker_id: str | None = None
    inputs: tuple = ()
    expected_output: Any = None
    source: str = ""

    @classmethod
    def io_pair(cls, id: str, inputs: list, expected_output: Any, *,
                description: str = "", author_worker_id: str | None = None) -> "TestCase":
        return cls(
            id=id,
            kind=TestKind.IO_PAIR,
            description=description,
            author_worker_id=author_worker_id,
            inputs=tuple(inputs),
            expected_output=expected_output,
        )

    @classmethod
    def code(cls, id: str, source: str, *, description: str = "",
             author_worker_id: str | None = None) -> "TestCase":
        return cls(
            id=id,
            kind=TestKind.CODE,
            description=description,
            author_worker_id=author_worker_id,
            source=source,
        )

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "id": self.id,
            "kind": self.kind.value,
            "description": self.description,
        }
        if self.author_worker_id is not None:
            data["authorWorkerId"] = self.author_worker_id
        if self.kind is TestKind.IO_PAIR:
            data["inputs"] = list(self.inputs)
            data["expectedOutput"] = self.expected_output
        else:
            data["source"] = self.source
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TestCase":
        kind = TestKind(data["kind"])
        if kind is TestKind.IO_PAIR:
            return cls.io_pair(
                data["id"],
                data.get("inputs", []),
                data.get("expectedOutput"),
                description=data.get("description", ""),
                author_worker_id=data.get("authorWorkerId"),
            )
        return cls.code(
            data["id"],
            data.get("source", ""),
            description=data.get("description", ""),
            author_worker_id=data.get("authorWorkerId"),
        )


@dataclass(frozen=True)
class Stub:
    """A recorded (callee, arguments) -> return value interception entry.

    ``argument_tuple`` holds the canonical text form of the argument list so
    matching is bit-stable across components.
    """

    callee_name: str
    argument_tuple: str
    return_value: Any = None
    author_worker_id: str | None = None

    @classmethod
    def for_args(cls, callee_name: str, args: list, return_value: Any, *,
                 author_worker_id: str | None = None) -> "Stub":
        from .canonical import canonicalize

        return cls(
            callee_name=callee_name,
            argument_tuple=canonicalize(list(args)),
            return_value=return_value,
            author_worker_id=author_worker_id,
        )

    def key(self) -> tuple[str, str]:
        return (self.callee_name, self.argument_tuple)

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "calleeName": self.callee_name,
            "argumentTuple": self.argument_tuple,
            "returnValue": self.return_value,
        }
        if self.author_worker_id is not None:
            data["authorWorkerId"] = self.author_worker_id
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Stub":
        return cls(
            callee_name=data["calleeName"],
            argument_tuple=data["argumentTuple"],
            return_value=data.get("returnValue"),
            author_worker_id=data.get("authorWorkerId"),
        )


class MicrotaskKind(str, Enum):
    IMPLEMENT_BEHAVIOR = "implement-behavior"
    REVIEW = "review"


class MicrotaskState(str, Enum):
    QUEUED = "queued"
    ASSIGNED = "assigned"
    SUBMITTED = "submitted"
    RETIRED = "retired"


@dataclass(frozen=True)
class NewFunctionSpec:
    """A function a worker asks to have created while implementing a behavior."""

    name: str
    description: str
    params: tuple[tuple[str, TypeRef], ...]
    return_type: Optional[TypeRef] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": [{"name": n, "type": t.render()} for n, t in self.params],
            "returnType": self.return_type.render() if self.return_type else "void",
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NewFunctionSpec":
        raw_return = data.get("returnType", "void")
        return cls(
            name=data["name"],
            description=data.get("description", ""),
            params=tuple(
                (p["name"], TypeRef.parse(p["type"])) for p in data.get("params", [])
            ),
            return_type=None if raw_return in (None, "void") else TypeRef.parse(raw_return),
        )


class SubmissionKind(str, Enum):
    BEHAVIOR_CONTRIBUTION = "behavior-contribution"
    MARK_COMPLETE = "mark-complete"
    ISSUE_REPORT = "issue-report"


@dataclass(frozen=True)
class BehaviorContribution:
    """One behavior's worth of work: the updated function source plus any
    tests, stubs, and requested new functions.

    ``code_diff`` carries the full updated source; diffs against the
    previous version are computed by consumers from stored versions.
    """

    code_diff: str = ""
    tests_added: tuple[TestCase, ...] = ()
    stubs_added: tuple[Stub, ...] = ()
    new_functions: tuple[NewFunctionSpec, ...] = ()

    kind = SubmissionKind.BEHAVIOR_CONTRIBUTION

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "codeDiff": self.code_diff,
            "testsAdded": [t.to_dict() for t in self.tests_added],
            "stubsAdded": [s.to_dict() for s in self.stubs_added],
            "newFunctions": [f.to_dict() for f in self.new_functions],
        }


@dataclass(frozen=True)
class MarkComplete:
    """Claim that every behavior of the function is implemented."""

    kind = SubmissionKind.MARK_COMPLETE

    def to_dict(self) -> dict:
        return {"kind": self.kind.value}


@dataclass(frozen=True)
class IssueReport:
    """Report that the function itself (signature, description) is wrong."""

    text: str

    kind = SubmissionKind.ISSUE_REPORT

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationFailure(["issue report text must be nonempty"])

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "text": self.text}


SubmissionPayload = "BehaviorContribution | MarkComplete | IssueReport"


def payload_from_dict(data: dict):
    kind = SubmissionKind(data["kind"])
    if kind is SubmissionKind.BEHAVIOR_CONTRIBUTION:
        return BehaviorContribution(
            code_diff=data.get("codeDiff", ""),
            tests_added=tuple(TestCase.from_dict(t) for t in data.get("testsAdded", [])),
            stubs_added=tuple(Stub.from_dict(s) for s in data.get("stubsAdded", [])),
            new_functions=tuple(
                NewFunctionSpec.from_dict(f) for f in data.get("newFunctions", [])
            ),
        )
    if kind is SubmissionKind.MARK_COMPLETE:
        return MarkComplete()
    return IssueReport(text=data.get("text", ""))


@dataclass(frozen=True)
class Submission:
    """A worker's terminal action on an assigned implement-behavior microtask."""

    id: str
    microtask_id: str
    worker_id: str
    payload: Any
    test_report: Any = None  # optional TestRunReport dict

    def to_dict(self) -> dict:
        data = {
            "id": self.id,
            "microtaskId": self.microtask_id,
            "workerId": self.worker_id,
            "payload": self.payload.to_dict(),
        }
        if self.test_report is not None:
            data["testReport"] = self.test_report
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Submission":
        return cls(
            id=data["id"],
            microtask_id=data["microtaskId"],
            worker_id=data["workerId"],
            payload=payload_from_dict(data["payload"]),
            test_report=data.get("testReport"),
        )


ACCEPT_THRESHOLD_STARS = 4


@dataclass(frozen=True)
class ReviewDecision:
    """A 1-5 star rating; >= 4 accepts, <= 3 requests rework with feedback."""

    submission_id: str
    reviewer_worker_id: str
    stars: int
    feedback: str = ""

    def __post_init__(self):
        if not isinstance(self.stars, int) or not 1 <= self.stars <= 5:
            raise ValidationFailure([f"stars must be an integer in [1,5], got {self.stars!r}"])
        if self.stars < ACCEPT_THRESHOLD_STARS and not self.feedback.strip():
            raise ValidationFailure(["feedback is required for ratings of 3 stars or fewer"])

    @property
    def accepted(self) -> bool:
        return self.stars >= ACCEPT_THRESHOLD_STARS

    def to_dict(self) -> dict:
        return {
            "submissionId": self.submission_id,
            "reviewerWorkerId": self.reviewer_worker_id,
            "stars": self.stars,
            "feedback": self.feedback,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReviewDecision":
        return cls(
            submission_id=data["submissionId"],
            reviewer_worker_id=data["reviewerWorkerId"],
            stars=data["stars"],
            feedback=data.get("feedback", ""),
        )


@dataclass(frozen=True)
class Question:
    id: str
    project_id: str
    author_worker_id: str
    text: str
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "projectId": self.project_id,
            "authorWorkerId": self.author_worker_id,
            "text": self.text,
            "timestamp": self.timestamp,
        }


@dataclass(frozen=True)
class Answer:
    id: str
    question_id: str
    author_worker_id: str
    text: str
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "questionId": self.question_id,
            "authorWorkerId": self.author_worker_id,
            "text": self.text,
            "timestamp": self.timestamp,
        }


class NotificationKind(str, Enum):
    REVIEW_RECEIVED = "review-received"
    TIME_WARNING = "time-warning"
    ISSUE_RESOLVED = "issue-resolved"


@dataclass(frozen=True)
class Notification:
    id: str
    recipient_worker_id: str
    kind: NotificationKind
    detail: dict = field(default_factory=dict)
    read: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "recipientWorkerId": self.recipient_worker_id,
            "kind": self.kind.value,
            "detail": dict(self.detail),
            "read": self.read,
        }
