"""Exception types shared across modules, with HTTP mappings at the edge."""

from __future__ import annotations


class CrowdFlowError(Exception):
    """Base for all domain errors."""

    code = "error"


class ValidationFailure(CrowdFlowError):
    """Input failed validation; carries the individual violations."""

    code = "validation-failure"

    def __init__(self, violations, message: str | None = None):
        self.violations = list(violations)
        super().__init__(message or "; ".join(self.violations))


class UnknownEntityError(CrowdFlowError):
    """A referenced project/function/microtask/submission does not exist."""

    code = "unknown-entity"


class StaleAssignmentError(CrowdFlowError):
    """The caller does not hold a live assignment for the microtask."""

    code = "stale-assignment"


class ConflictError(CrowdFlowError):
    """The command conflicts with the current lifecycle state."""

    code = "conflict"


class WorkerBusyError(ConflictError):
    """A worker may hold at most one assignment at a time."""

    code = "worker-busy"


class AuthorizationError(CrowdFlowError):
    """The principal is not allowed to perform this command."""

    code = "authorization"


class StateError(CrowdFlowError):
    """An event cannot be applied to the current state (corrupt or forged log)."""

    code = "state-error"


class PublishError(CrowdFlowError):
    """Publication target rejected the artifact tree."""

    code = "publish-error"


class ExecutorUnavailableError(CrowdFlowError):
    """The test executor could not be reached or did not answer in time."""

    code = "executor-unavailable"
