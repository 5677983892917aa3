"""Microtask-driven microservice construction.

A client describes a microservice as endpoints plus data types; the engine
turns that into a stream of implement-behavior and review microtasks for a
crowd, coordinating locking, timeouts, scoring, stubbed test execution,
and final assembly into a deployable source tree. A deterministic crowd
simulator exercises the whole workflow at desk scale.
"""

from .canonical import CanonicalizationError, canonical_equal, canonicalize, parse_canonical
from .engine import (
    Principal,
    handle_ifb_submission,
    handle_review_submission,
    init_project,
    project_status,
    resolve_issue,
)
from .errors import (
    AuthorizationError,
    ConflictError,
    CrowdFlowError,
    ExecutorUnavailableError,
    PublishError,
    StaleAssignmentError,
    StateError,
    UnknownEntityError,
    ValidationFailure,
    WorkerBusyError,
)
from .model import (
    Adt,
    BehaviorContribution,
    ClientRequest,
    EndpointSpec,
    IssueReport,
    MarkComplete,
    MicrotaskKind,
    MicrotaskState,
    NewFunctionSpec,
    ReviewDecision,
    Stub,
    Submission,
    TestCase,
    TypeRef,
)
from .runtime import ProjectRuntime
from .sandbox import (
    ExecutionBundle,
    MockExecutor,
    SubprocessExecutor,
    TestRunReport,
    TestStatus,
    resolve_call,
    run_tests,
)
from .scheduler import AssignmentPolicy, Scheduler
from .state import ProjectState, fold
from .store import DocumentStore
from .validation import ValidationResult, validate_client_request, validate_value

__version__ = "0.1.0"

__all__ = [
    "Adt",
    "AssignmentPolicy",
    "AuthorizationError",
    "BehaviorContribution",
    "CanonicalizationError",
    "ClientRequest",
    "ConflictError",
    "CrowdFlowError",
    "DocumentStore",
    "EndpointSpec",
    "ExecutionBundle",
    "ExecutorUnavailableError",
    "IssueReport",
    "MarkComplete",
    "MicrotaskKind",
    "MicrotaskState",
    "MockExecutor",
    "NewFunctionSpec",
    "Principal",
    "ProjectRuntime",
    "ProjectState",
    "PublishError",
    "ReviewDecision",
    "Scheduler",
    "StaleAssignmentError",
    "StateError",
    "Stub",
    "Submission",
    "SubprocessExecutor",
    "TestCase",
    "TestRunReport",
    "TestStatus",
    "TypeRef",
    "UnknownEntityError",
    "ValidationFailure",
    "ValidationResult",
    "WorkerBusyError",
    "canonical_equal",
    "canonicalize",
    "fold",
    "handle_ifb_submission",
    "handle_review_submission",
    "init_project",
    "parse_canonical",
    "project_status",
    "resolve_call",
    "resolve_issue",
    "run_tests",
    "validate_client_request",
    "validate_value",
]
