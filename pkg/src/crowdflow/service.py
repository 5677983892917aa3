"""HTTP surface for clients and workers.

Every state-mutating route maps to exactly one engine or scheduler command
(one atomic event batch); reads serve folded snapshots. Bodies and
responses are plain JSON values in canonical shape, and errors share one
envelope: ``{code, message, violations[]}``.

Principals are opaque bearer tokens. The dev-mode authenticator accepts
``worker:<id>`` and ``client:<id>`` tokens directly and can be extended or
replaced with a static token file (``{token: {"kind": ..., "id": ...}}``).
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path
from fastapi import Body, Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse

from . import engine
from .assembler import LocalDirectoryTarget
from .errors import (
    AuthorizationError,
    ConflictError,
    CrowdFlowError,
    StaleAssignmentError,
    UnknownEntityError,
    ValidationFailure,
)
from .model import (
    ClientRequest,
    MicrotaskKind,
    ReviewDecision,
    Stub,
    Submission,
    TestCase,
    payload_from_dict,
)
from .runtime import ProjectRuntime
from .sandbox import ExecutorPort
from .scheduler import AssignmentPolicy
from .scoring import project_leaderboard
from .state import MicrotaskRecord, ProjectState
from .validation import validate_client_request

_STATUS_BY_CODE = {
    "validation-failure": 422,
    "unknown-entity": 404,
    "stale-assignment": 409,
    "conflict": 409,
    "worker-busy": 409,
    "authorization": 403,
    "publish-error": 502,
    "executor-unavailable": 502,
    "state-error": 500,
}


def now_minutes() -> float:
    """Wall clock in logical minutes; the only wall-clock read in the system."""
    return time.time() / 60.0


class Authenticator:
    """Token resolution; replace or extend for real deployments."""

    def __init__(self, tokens: dict[str, engine.Principal] | None = None,
                 dev_mode: bool = True):
        self.tokens = dict(tokens or {})
        self.dev_mode = dev_mode

    @classmethod
    def from_token_file(cls, path: str | Path, *, dev_mode: bool = False) -> "Authenticator":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        tokens = {
            token: engine.Principal(kind=spec["kind"], id=spec["id"])
            for token, spec in raw.items()
        }
        return cls(tokens, dev_mode=dev_mode)

    def resolve(self, token: str | None) -> engine.Principal:
        if not token:
            raise AuthorizationError("missing bearer token")
        if token in self.tokens:
            return self.tokens[token]
        if self.dev_mode and ":" in token:
            kind, _, principal_id = token.partition(":")
            if kind in ("worker", "client") and principal_id:
                return engine.Principal(kind=kind, id=principal_id)
        raise AuthorizationError("unknown bearer token")


class ProjectRegistry:
    """All projects this service hosts, each behind its own runtime."""

    def __init__(self, *, data_dir: str | Path | None = None,
                 executor: ExecutorPort | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.executor = executor
        self._runtimes: dict[str, ProjectRuntime] = {}
        self._lock = threading.Lock()

    def create(self, request: ClientRequest, *, project_id: str | None = None,
               policy: AssignmentPolicy | None = None, now: float) -> ProjectRuntime:
        project_id = project_id or f"p-{uuid.uuid4().hex[:12]}"
        with self._lock:
            if project_id in self._runtimes:
                raise ConflictError(f"project {project_id} already exists")
            runtime = ProjectRuntime.create(
                request,
                project_id=project_id,
                policy=policy,
                now=now,
                data_dir=self.data_dir,
                executor=self.executor,
            )
            self._runtimes[project_id] = runtime
            return runtime

    def get(self, project_id: str) -> ProjectRuntime:
        with self._lock:
            runtime = self._runtimes.get(project_id)
            if runtime is None and self.data_dir is not None:
                try:
                    runtime = ProjectRuntime.open(self.data_dir, project_id,
                                                  executor=self.executor)
                except UnknownEntityError:
                    runtime = None
                if runtime is not None:
                    self._runtimes[project_id] = runtime
            if runtime is None:
                raise UnknownEntityError(f"unknown project {project_id}")
            return runtime

    def find_assignment(self, assignment_id: str) -> tuple[ProjectRuntime, MicrotaskRecord]:
        """Assignment ids are microtask ids; search hosted projects."""
        with self._lock:
            runtimes = list(self._runtimes.values())
        for runtime in runtimes:
            record = runtime.state.microtasks.get(assignment_id)
            if record is not None:
                return runtime, record
        raise UnknownEntityError(f"unknown assignment {assignment_id}")

    def projects(self) -> list[str]:
        with self._lock:
            return list(self._runtimes)


def _error_response(exc: CrowdFlowError) -> JSONResponse:
    violations = getattr(exc, "violations", [])
    return JSONResponse(
        status_code=_STATUS_BY_CODE.get(exc.code, 500),
        content={"code": exc.code, "message": str(exc), "violations": list(violations)},
    )


def _microtask_view(state: ProjectState, record: MicrotaskRecord) -> dict:
    view = record.to_dict()
    if record.kind is MicrotaskKind.IMPLEMENT_BEHAVIOR:
        function = state.functions[record.function_id]
        view["context"] = {"function": function.to_dict()}
    else:
        submission = state.submissions[record.submission_id]
        parent = state.microtasks[submission.submission.microtask_id]
        function = state.functions[parent.function_id]
        view["context"] = {
            "function": function.to_dict(),
            "submission": submission.submission.to_dict(),
            "previousVersion": {
                "code": function.code,
                "version": function.version,
            },
        }
    return view


def create_app(registry: ProjectRegistry | None = None,
               authenticator: Authenticator | None = None,
               *, clock=now_minutes) -> FastAPI:
    registry = registry or ProjectRegistry()
    authenticator = authenticator or Authenticator()
    app = FastAPI(title="crowdflow", version="0.1.0")
    app.state.registry = registry
    app.state.authenticator = authenticator

    def principal_from(authorization: str | None = Header(default=None)) -> engine.Principal:
        token = None
        if authorization:
            token = authorization.removeprefix("Bearer ").strip()
        return authenticator.resolve(token)

    def require_worker(principal: engine.Principal) -> str:
        if principal.kind != "worker":
            raise AuthorizationError("a worker principal is required")
        return principal.id

    @app.exception_handler(CrowdFlowError)
    async def crowdflow_error_handler(_request: Request, exc: CrowdFlowError):
        return _error_response(exc)

    @app.exception_handler(Exception)
    async def unexpected_error_handler(_request: Request, exc: Exception):
        # Every error leaves through the one envelope, even unexpected ones.
        return JSONResponse(
            status_code=500,
            content={"code": "internal-error", "message": str(exc), "violations": []},
        )

    # ---- project lifecycle ----

    @app.post("/projects", status_code=201)
    def create_project(body: dict = Body(...),
                       principal: engine.Principal = Depends(principal_from)):
        if not principal.is_client:
            raise AuthorizationError("only clients may create projects")
        request = ClientRequest.from_dict(body.get("clientRequest", body))
        result = validate_client_request(request)
        if not result.ok:
            raise ValidationFailure(result.violations)
        policy = AssignmentPolicy.from_config(body.get("policy", {}))
        runtime = registry.create(
            request,
            project_id=body.get("projectId"),
            policy=policy,
            now=clock(),
        )
        return {"projectId": runtime.project_id,
                "functions": [f.to_dict() for f in runtime.state.functions.values()]}

    @app.get("/projects/{project_id}/dashboard")
    def dashboard(project_id: str,
                  principal: engine.Principal = Depends(principal_from)):
        runtime = registry.get(project_id)
        runtime.tick(clock())
        state = runtime.state
        status = runtime.status()
        return {
            "projectId": project_id,
            "projectName": state.client_request.project_name,
            "projectDescription": state.client_request.project_description,
            "functions": [
                {"id": f.id, "name": f.name, "description": f.description,
                 "state": f.state.value}
                for f in state.functions.values()
            ],
            "availableMicrotasks": len(state.queue),
            "complete": status.complete,
            "leaderboard": [row.to_dict() for row in project_leaderboard(state)],
        }

    @app.get("/projects/{project_id}/status")
    def status(project_id: str,
               principal: engine.Principal = Depends(principal_from)):
        return registry.get(project_id).status().to_dict()

    # ---- microtasks ----

    @app.post("/projects/{project_id}/microtasks/fetch")
    def fetch_microtask(project_id: str,
                        principal: engine.Principal = Depends(principal_from)):
        worker_id = require_worker(principal)
        runtime = registry.get(project_id)
        now = clock()
        runtime.tick(now)
        batch = runtime.fetch(worker_id, now)
        if batch is None:
            return {"assignment": None}
        record = runtime.state.assignment_of(worker_id)
        policy = runtime.state.policy
        return {
            "assignment": {
                "assignmentId": record.id,
                "deadline": record.deadline,
                "warningAt": (record.assigned_at or 0.0) + policy.warning_at_minutes,
                "microtask": _microtask_view(runtime.state, record),
            }
        }

    @app.post("/assignments/{assignment_id}/submit")
    def submit(assignment_id: str, body: dict = Body(...),
               principal: engine.Principal = Depends(principal_from)):
        worker_id = require_worker(principal)
        runtime, record = registry.find_assignment(assignment_id)
        now = clock()
        runtime.tick(now)
        if record.kind is MicrotaskKind.REVIEW:
            if "stars" not in body:
                raise ValidationFailure(
                    ["a review submission needs {stars, feedback?}"]
                )
            decision = ReviewDecision(
                submission_id=record.submission_id,
                reviewer_worker_id=worker_id,
                stars=body.get("stars"),
                feedback=body.get("feedback", ""),
            )
            batch = runtime.review(decision, now)
            return {"recorded": True, "events": len(batch)}
        if "payload" not in body or not isinstance(body["payload"], dict):
            raise ValidationFailure(
                ["an implement-behavior submission needs a payload object"]
            )
        try:
            payload = payload_from_dict(body["payload"])
        except (KeyError, ValueError) as exc:
            raise ValidationFailure([f"malformed submission payload: {exc}"]) from exc
        submission = Submission(
            id=body.get("submissionId") or runtime.state.next_submission_id(),
            microtask_id=assignment_id,
            worker_id=worker_id,
            payload=payload,
            test_report=body.get("testReport"),
        )
        batch, created = runtime.submit(submission, now)
        return {"submissionId": submission.id, "created": created,
                "events": len(batch)}

    @app.post("/assignments/{assignment_id}/skip")
    def skip(assignment_id: str,
             principal: engine.Principal = Depends(principal_from)):
        worker_id = require_worker(principal)
        runtime, record = registry.find_assignment(assignment_id)
        now = clock()
        runtime.tick(now)
        if record.assigned_worker != worker_id:
            raise StaleAssignmentError(
                f"microtask {assignment_id} is not held by {worker_id}"
            )
        runtime.skip(worker_id, now)
        return {"skipped": True}

    @app.post("/assignments/{assignment_id}/run-tests")
    def run_assignment_tests(assignment_id: str, body: dict = Body(default={}),
                             principal: engine.Principal = Depends(principal_from)):
        require_worker(principal)
        runtime, record = registry.find_assignment(assignment_id)
        if record.kind is not MicrotaskKind.IMPLEMENT_BEHAVIOR:
            raise ConflictError("tests run against implement-behavior assignments")
        tests = None
        if "tests" in body:
            tests = tuple(TestCase.from_dict(t) for t in body["tests"])
        stubs = tuple(Stub.from_dict(s) for s in body.get("stubs", []))
        seed = tuple(
            (s["collection"], s["id"], s.get("value"))
            for s in body.get("persistenceSeed", [])
        )
        report = runtime.run_function_tests(
            record.function_id,
            code=body.get("code"),
            tests=tests,
            stubs=stubs,
            persistence_seed=seed,
        )
        return report.to_wire()

    # ---- leaderboard, q&a, notifications ----

    @app.get("/projects/{project_id}/leaderboard")
    def leaderboard(project_id: str,
                    principal: engine.Principal = Depends(principal_from)):
        state = registry.get(project_id).state
        return {"leaderboard": [row.to_dict() for row in project_leaderboard(state)]}

    @app.post("/projects/{project_id}/questions")
    def post_question(project_id: str, body: dict = Body(...),
                      principal: engine.Principal = Depends(principal_from)):
        worker_id = require_worker(principal)
        runtime = registry.get(project_id)
        batch = runtime.post_question(worker_id, body.get("text", ""), clock())
        return {"questionId": batch[0].payload["questionId"]}

    @app.post("/questions/{question_id}/answers")
    def post_answer(question_id: str, body: dict = Body(...),
                    principal: engine.Principal = Depends(principal_from)):
        worker_id = require_worker(principal)
        project_id = body.get("projectId")
        if project_id:
            runtime = registry.get(project_id)
        else:
            runtime = next(
                (registry.get(p) for p in registry.projects()
                 if question_id in registry.get(p).state.questions),
                None,
            )
            if runtime is None:
                raise UnknownEntityError(f"unknown question {question_id}")
        batch = runtime.post_answer(question_id, worker_id, body.get("text", ""), clock())
        return {"answerId": batch[0].payload["answerId"]}

    @app.get("/projects/{project_id}/questions")
    def list_questions(project_id: str,
                       principal: engine.Principal = Depends(principal_from)):
        state = registry.get(project_id).state
        threads = []
        for question in sorted(state.questions.values(), key=lambda q: (q.timestamp, q.id)):
            answers = sorted(
                (a for a in state.answers.values() if a.question_id == question.id),
                key=lambda a: (a.timestamp, a.id),
            )
            threads.append({
                "question": question.to_dict(),
                "answers": [a.to_dict() for a in answers],
            })
        return {"threads": threads}

    @app.get("/workers/{worker_id}/notifications")
    def notifications(worker_id: str,
                      principal: engine.Principal = Depends(principal_from)):
        results = []
        for project_id in registry.projects():
            state = registry.get(project_id).state
            for note in state.notifications:
                if note.recipient_worker_id == worker_id:
                    view = note.to_dict()
                    view["projectId"] = project_id
                    results.append(view)
        return {"notifications": results}

    # ---- issues and publication ----

    @app.post("/projects/{project_id}/issues/{issue_id}/resolve")
    def resolve_issue(project_id: str, issue_id: str, body: dict = Body(default={}),
                      principal: engine.Principal = Depends(principal_from)):
        runtime = registry.get(project_id)
        batch = runtime.resolve_issue(issue_id, body, principal=principal, now=clock())
        return {"resolved": True, "events": len(batch)}

    @app.get("/projects/{project_id}/issues")
    def list_issues(project_id: str,
                    principal: engine.Principal = Depends(principal_from)):
        state = registry.get(project_id).state
        return {"issues": [issue.to_dict() for issue in state.issues.values()]}

    @app.post("/projects/{project_id}/publish")
    def publish(project_id: str, body: dict = Body(default={}),
                principal: engine.Principal = Depends(principal_from)):
        if not principal.is_client:
            raise AuthorizationError("only the project client may publish")
        runtime = registry.get(project_id)
        target = None
        target_spec = body.get("target", {})
        if target_spec.get("kind") == "local-directory":
            target = LocalDirectoryTarget(target_spec["path"])
        tree, record = runtime.publish(
            target, force=bool(body.get("force", False)), now=clock()
        )
        return {
            "publication": record,
            "files": sorted(tree.files),
            "routes": [r.to_dict() for r in tree.route_manifest],
        }

    @app.get("/projects/{project_id}/events")
    def dump_events(project_id: str,
                    principal: engine.Principal = Depends(principal_from)):
        runtime = registry.get(project_id)
        return {"events": [e.to_dict() for e in runtime.events]}

    return app
