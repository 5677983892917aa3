"""Deterministic crowd simulation against the workflow engine.

Three drivers live here:

* :func:`run_simulation` replays a seeded stochastic worker population
  (fetch, skip, contribute with a defect rate, review by ground-truth
  quality, report issues) against an in-process project runtime and
  returns byte-stable metrics plus the full event log.
* :func:`run_todo_scenario` is the scripted crowd that drives the
   12-endpoint ToDo fixture to completion with 13 functions (one
  crowd-created), optionally leaving the four seeded defects in place.
* :func:`run_timeout_scenario` pins the idle-worker flow: warning at 14
  simulated minutes, auto-skip at 15, completion by another worker.

Simulated time is logical minutes; wall-clock is never consulted, so a
config replays to an identical log.
"""

from __future__ import annotations

import heapq
import random
import statistics
from dataclasses import dataclass, field
from typing import Any

from . import events as ev
from .engine import Principal
from .errors import ValidationFailure
from .fixtures import (
    CHECK_DATE_FORMAT,
    CHECK_DATE_FORMAT_STUB,
    TODO_SEED,
    oracle_checks_for,
    todo_client_request,
    todo_sources,
)
from .model import (
    BehaviorContribution,
    ClientRequest,
    EndpointSpec,
    IssueReport,
    MarkComplete,
    MicrotaskKind,
    ReviewDecision,
    Submission,
    TestCase,
    TypeRef,
)
from .replay import check_events
from .runtime import ProjectRuntime
from .scheduler import AssignmentPolicy
from .state import MicrotaskRecord

QUALITY_OK = "ok"
QUALITY_DEFECTIVE = "defective"
_QUALITY_MARKER = "# quality:"


@dataclass(frozen=True)
class WorkerProfile:
    skip_probability: float = 0.05
    defect_probability: float = 0.15
    issue_probability: float = 0.0
    mark_complete_threshold: int = 2
    review_strictness: dict = field(
        default_factory=lambda: {QUALITY_OK: (4, 5), QUALITY_DEFECTIVE: (1, 2, 3)}
    )

    def __post_init__(self):
        for name, p in (("skipProbability", self.skip_probability),
                        ("defectProbability", self.defect_probability),
                        ("issueProbability", self.issue_probability)):
            if not 0.0 <= p <= 1.0:
                raise ValidationFailure([f"{name} must be in [0,1], got {p}"])

    def stars_for(self, quality: str, rng: random.Random) -> int:
        choices = self.review_strictness.get(quality) or (3,)
        return int(choices[rng.randrange(len(choices))])

    def to_dict(self) -> dict:
        return {
            "skipProbability": self.skip_probability,
            "defectProbability": self.defect_probability,
            "issueProbability": self.issue_probability,
            "markCompleteThreshold": self.mark_complete_threshold,
            "reviewStrictness": {k: list(v) for k, v in self.review_strictness.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WorkerProfile":
        strictness = {
            k: tuple(v)
            for k, v in data.get(
                "reviewStrictness",
                {QUALITY_OK: (4, 5), QUALITY_DEFECTIVE: (1, 2, 3)},
            ).items()
        }
        return cls(
            skip_probability=data.get("skipProbability", 0.05),
            defect_probability=data.get("defectProbability", 0.15),
            issue_probability=data.get("issueProbability", 0.0),
            mark_complete_threshold=data.get("markCompleteThreshold", 2),
            review_strictness=strictness,
        )


@dataclass(frozen=True)
class Session:
    duration_minutes: float
    workers: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"durationMinutes": self.duration_minutes, "workers": list(self.workers)}


@dataclass(frozen=True)
class SimulationConfig:
    seed: int = 1
    worker_count: int = 3
    sessions: tuple[Session, ...] = ()
    per_worker: WorkerProfile = WorkerProfile()
    per_worker_overrides: dict = field(default_factory=dict)
    client_request_fixture: str = "todo"
    policy: AssignmentPolicy = AssignmentPolicy()

    def __post_init__(self):
        if self.worker_count < 1:
            raise ValidationFailure(["workerCount must be >= 1"])

    def worker_ids(self) -> list[str]:
        ids: list[str] = []
        for session in self.effective_sessions():
            for worker in session.workers:
                if worker not in ids:
                    ids.append(worker)
        return ids

    def effective_sessions(self) -> tuple[Session, ...]:
        if self.sessions:
            return self.sessions
        workers = tuple(f"w{i + 1}" for i in range(self.worker_count))
        return (Session(duration_minutes=240.0, workers=workers),)

    def profile_for(self, worker_id: str) -> WorkerProfile:
        override = self.per_worker_overrides.get(worker_id)
        if override is None:
            return self.per_worker
        merged = self.per_worker.to_dict()
        merged.update(override)
        return WorkerProfile.from_dict(merged)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "workerCount": self.worker_count,
            "sessions": [s.to_dict() for s in self.effective_sessions()],
            "perWorker": self.per_worker.to_dict(),
            "perWorkerOverrides": dict(self.per_worker_overrides),
            "clientRequestFixture": self.client_request_fixture,
            "policy": {"assignment": self.policy.to_dict()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationConfig":
        sessions = tuple(
            Session(duration_minutes=s["durationMinutes"], workers=tuple(s["workers"]))
            for s in data.get("sessions", [])
        )
        return cls(
            seed=data.get("seed", 1),
            worker_count=data.get("workerCount", 3),
            sessions=sessions,
            per_worker=WorkerProfile.from_dict(data.get("perWorker", {})),
            per_worker_overrides=dict(data.get("perWorkerOverrides", {})),
            client_request_fixture=data.get("clientRequestFixture", "todo"),
            policy=AssignmentPolicy.from_config(data.get("policy", {})),
        )


def fixture_request(name: str) -> ClientRequest:
    if name == "todo":
        return todo_client_request()
    if name == "ping":
        return ping_client_request()
    raise ValidationFailure([f"unknown client request fixture {name!r}"])


def ping_client_request() -> ClientRequest:
    return ClientRequest(
        project_name="ping-service",
        project_description="Single health-check endpoint.",
        endpoints=(
            EndpointSpec(
                "ping",
                "Returns the string 'pong' so callers can check liveness.",
                (),
                TypeRef("string"),
            ),
        ),
    )


@dataclass
class SimulationMetrics:
    completed_by_kind: dict = field(default_factory=dict)
    skipped_by_kind: dict = field(default_factory=dict)
    fetched_by_kind: dict = field(default_factory=dict)
    in_flight_by_kind: dict = field(default_factory=dict)
    median_minutes_by_kind: dict = field(default_factory=dict)
    functions_implemented: int = 0
    tests_written: int = 0
    reviews_accepted: int = 0
    max_concurrent_assignments: int = 0
    invariant_violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "completedByKind": dict(self.completed_by_kind),
            "skippedByKind": dict(self.skipped_by_kind),
            "fetchedByKind": dict(self.fetched_by_kind),
            "inFlightByKind": dict(self.in_flight_by_kind),
            "medianSimulatedMinutesByKind": dict(self.median_minutes_by_kind),
            "functionsImplemented": self.functions_implemented,
            "testsWritten": self.tests_written,
            "reviewsAccepted": self.reviews_accepted,
            "maxConcurrentAssignments": self.max_concurrent_assignments,
            "invariantViolations": list(self.invariant_violations),
        }


@dataclass
class SimulationResult:
    metrics: SimulationMetrics
    events: list[ev.ProjectEvent]
    runtime: ProjectRuntime

    @property
    def state(self):
        return self.runtime.state


def quality_of(code: str) -> str:
    for line in code.splitlines():
        if line.startswith(_QUALITY_MARKER):
            return line[len(_QUALITY_MARKER):].strip()
    return QUALITY_OK


def _contribution_code(quality: str, behavior_index: int) -> str:
    lines = [f"{_QUALITY_MARKER}{quality}"]
    if quality == QUALITY_DEFECTIVE:
        lines.append("fail scripted defect")
    lines.append(f"return {behavior_index}")
    return "\n".join(lines) + "\n"


class _CrowdSimulation:
    """One seeded run; workers interleave through a time-ordered heap."""

    IDLE_RETRY_MINUTES = 1.0
    ISSUE_RESOLVE_MINUTES = 2.0

    def __init__(self, config: SimulationConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.runtime = ProjectRuntime.create(
            fixture_request(config.client_request_fixture),
            project_id=f"sim-{config.seed}",
            policy=config.policy,
            now=0.0,
        )
        self.submission_count = 0
        self.test_count = 0

    def run(self) -> SimulationResult:
        state = self.runtime.state
        heap: list[tuple[float, int, str]] = []
        session_start = 0.0
        worker_order = {w: i for i, w in enumerate(self.config.worker_ids())}
        windows: dict[str, list[tuple[float, float]]] = {}
        for session in self.config.effective_sessions():
            session_end = session_start + session.duration_minutes
            for worker in session.workers:
                windows.setdefault(worker, []).append((session_start, session_end))
                heapq.heappush(heap, (session_start, worker_order[worker], worker))
            session_start = session_end
        horizon = session_start

        while heap:
            now, order, worker = heapq.heappop(heap)
            if now >= horizon:
                continue
            self.runtime.tick(now)
            self._resolve_open_issues(now)
            if self.runtime.status().complete:
                break
            if not self._within_window(windows.get(worker, []), now):
                continue
            next_time = self._act(worker, now)
            if next_time is not None:
                heapq.heappush(heap, (next_time, order, worker))

        events = list(self.runtime.events)
        return SimulationResult(
            metrics=compute_metrics(events, state),
            events=events,
            runtime=self.runtime,
        )

    @staticmethod
    def _within_window(windows: list[tuple[float, float]], now: float) -> bool:
        return any(start <= now < end for start, end in windows)

    def _resolve_open_issues(self, now: float) -> None:
        state = self.runtime.state
        for issue in list(state.issues.values()):
            if not issue.resolved and now - issue.opened_at >= self.ISSUE_RESOLVE_MINUTES:
                self.runtime.resolve_issue(
                    issue.id,
                    {"description": state.functions[issue.function_id].description
                     + " (clarified by the client)"},
                    principal=Principal("client", "client-1"),
                    now=now,
                )

    def _act(self, worker: str, now: float) -> float | None:
        state = self.runtime.state
        profile = self.config.profile_for(worker)
        assignment = state.assignment_of(worker)
        if assignment is None:
            batch = self.runtime.fetch(worker, now)
            if batch is None:
                return now + self.IDLE_RETRY_MINUTES
            assignment = state.assignment_of(worker)
            if self.rng.random() < profile.skip_probability:
                self.runtime.skip(worker, now)
                return now + round(self.rng.uniform(0.2, 1.0), 3)
            duration = (
                round(self.rng.uniform(2.0, 6.0), 3)
                if assignment.kind is MicrotaskKind.IMPLEMENT_BEHAVIOR
                else round(self.rng.uniform(1.0, 3.0), 3)
            )
            return now + duration
        # Holding an assignment: submit it now.
        if assignment.kind is MicrotaskKind.IMPLEMENT_BEHAVIOR:
            self._submit_behavior(worker, assignment, profile, now)
        else:
            self._submit_review(worker, assignment, profile, now)
        return now + 0.001

    def _submit_behavior(self, worker: str, assignment: MicrotaskRecord,
                         profile: WorkerProfile, now: float) -> None:
        state = self.runtime.state
        function = state.functions[assignment.function_id]
        self.submission_count += 1
        submission_id = f"s-{self.submission_count}"

        never_halted = not any(
            issue.function_id == function.id for issue in state.issues.values()
        )
        if (
            assignment.rework_feedback is None
            and function.behaviors_applied == 0
            and never_halted
            and self.rng.random() < profile.issue_probability
        ):
            payload: Any = IssueReport(
                text=f"the description of {function.name} is ambiguous; please clarify"
            )
        elif (
            assignment.rework_feedback is None
            and function.behaviors_applied >= profile.mark_complete_threshold
        ):
            payload = MarkComplete()
        else:
            defective = (
                assignment.rework_feedback is None
                and self.rng.random() < profile.defect_probability
            )
            quality = QUALITY_DEFECTIVE if defective else QUALITY_OK
            self.test_count += 1
            test = TestCase.io_pair(
                f"t-{self.test_count}",
                ["probe"] * len(function.params),
                function.behaviors_applied,
                description=f"behavior {function.behaviors_applied + 1}"
                f" of {function.name}",
                author_worker_id=worker,
            )
            code = _contribution_code(quality, function.behaviors_applied)
            report = self.runtime.run_function_tests(
                function.id, code=code, tests=(test,)
            )
            payload = BehaviorContribution(
                code_diff=code,
                tests_added=(test,),
            )
            submission = Submission(
                id=submission_id,
                microtask_id=assignment.id,
                worker_id=worker,
                payload=payload,
                test_report=report.to_wire(),
            )
            self.runtime.submit(submission, now)
            return
        submission = Submission(
            id=submission_id,
            microtask_id=assignment.id,
            worker_id=worker,
            payload=payload,
        )
        self.runtime.submit(submission, now)

    def _submit_review(self, worker: str, assignment: MicrotaskRecord,
                       profile: WorkerProfile, now: float) -> None:
        state = self.runtime.state
        record = state.submissions[assignment.submission_id]
        payload = record.submission.payload
        if isinstance(payload, BehaviorContribution):
            quality = quality_of(payload.code_diff)
        else:
            quality = QUALITY_OK
        stars = profile.stars_for(quality, self.rng)
        feedback = ""
        if stars <= 3:
            feedback = f"behavior incomplete, please address ({quality} contribution)"
        elif self.rng.random() < 0.3:
            feedback = "looks good"
        decision = ReviewDecision(
            submission_id=assignment.submission_id,
            reviewer_worker_id=worker,
            stars=stars,
            feedback=feedback,
        )
        self.runtime.review(decision, now)


def run_simulation(config: SimulationConfig) -> SimulationResult:
    return _CrowdSimulation(config).run()


def compute_metrics(events: list[ev.ProjectEvent], state) -> SimulationMetrics:
    """Metrics are a pure function of the event log (plus terminal state for
    artifact-level counts), so identical logs give identical metrics."""
    metrics = SimulationMetrics()
    kinds = {m.id: m.kind.value for m in state.microtasks.values()}
    assigned_at: dict[str, float] = {}
    durations: dict[str, list[float]] = {}
    concurrent = 0
    submission_task: dict[str, str] = {}

    def bump(bucket: dict, kind: str) -> None:
        bucket[kind] = bucket.get(kind, 0) + 1

    for event in events:
        if event.kind == ev.MICROTASK_ASSIGNED:
            kind = kinds[event.payload["microtaskId"]]
            bump(metrics.fetched_by_kind, kind)
            assigned_at[event.payload["microtaskId"]] = event.timestamp
            concurrent += 1
            metrics.max_concurrent_assignments = max(
                metrics.max_concurrent_assignments, concurrent
            )
        elif event.kind in (ev.MICROTASK_SKIPPED, ev.MICROTASK_EXPIRED):
            bump(metrics.skipped_by_kind, kinds[event.payload["microtaskId"]])
            concurrent -= 1
        elif event.kind == ev.SUBMISSION_RECEIVED:
            task_id = event.payload["microtaskId"]
            submission_task[event.payload["id"]] = task_id
            kind = kinds[task_id]
            bump(metrics.completed_by_kind, kind)
            durations.setdefault(kind, []).append(
                event.timestamp - assigned_at.get(task_id, event.timestamp)
            )
            concurrent -= 1
        elif event.kind == ev.REVIEW_RECORDED:
            task_id = event.payload["microtaskId"]
            kind = kinds[task_id]
            bump(metrics.completed_by_kind, kind)
            durations.setdefault(kind, []).append(
                event.timestamp - assigned_at.get(task_id, event.timestamp)
            )
            concurrent -= 1
            if event.payload["stars"] >= 4:
                metrics.reviews_accepted += 1

    for kind, values in durations.items():
        metrics.median_minutes_by_kind[kind] = round(statistics.median(values), 3)
    metrics.in_flight_by_kind = {}
    for record in state.microtasks.values():
        if record.state.value == "assigned":
            bump(metrics.in_flight_by_kind, record.kind.value)
    metrics.functions_implemented = sum(
        1 for f in state.functions.values() if f.state.value == "completed"
    )
    metrics.tests_written = sum(len(f.tests) for f in state.functions.values())
    metrics.invariant_violations = check_events(events).violations

    # Accounting identity: every fetch ends completed, skipped, or in flight.
    for kind in metrics.fetched_by_kind:
        fetched = metrics.fetched_by_kind.get(kind, 0)
        ended = (
            metrics.completed_by_kind.get(kind, 0)
            + metrics.skipped_by_kind.get(kind, 0)
            + metrics.in_flight_by_kind.get(kind, 0)
        )
        if fetched != ended:
            metrics.invariant_violations.append(
                f"accounting identity broken for {kind}: fetched {fetched},"
                f" ended {ended}"
            )
    return metrics


# ---- scripted scenarios ----


@dataclass
class ScenarioResult:
    runtime: ProjectRuntime
    events: list[ev.ProjectEvent]

    @property
    def state(self):
        return self.runtime.state


_REWORK_TARGET = "updateTodo"
_ISSUE_TARGET = "fetchDueReminders"
_CREATOR_HOST = "createTodo"


def _partial_source(final: str) -> str:
    """First-behavior version of a scripted source: everything up to and
    including the first conditional, then the fallback."""
    lines = final.rstrip("\n").splitlines()
    head: list[str] = []
    for line in lines:
        head.append(line)
        if line.startswith("when "):
            break
    if lines and not lines[-1].startswith("when ") and lines[-1] not in head:
        head.append(lines[-1])
    return "\n".join(head) + "\n"


class _ScriptedCrowd:
    """Deterministic three-worker crowd that completes the ToDo fixture.

    Every endpoint function takes two behavior contributions and a
    completion claim; the first contribution on ``createTodo`` creates
    ``checkTodoDateFormat`` (with a stub standing in for it), the first
    contribution on ``updateTodo`` is rejected and reworked, and the first
    assignment on ``fetchDueReminders`` reports an issue that the client
    then resolves.
    """

    def __init__(self, *, defective: bool):
        self.sources = todo_sources(defective=defective)
        self.runtime = ProjectRuntime.create(
            todo_client_request(),
            project_id="todo-scenario",
            policy=AssignmentPolicy(),
            now=0.0,
        )
        self.workers = ("w1", "w2", "w3")
        self.now = 0.0
        self.submission_count = 0
        self.test_cursor: dict[str, int] = {}
        self.issue_filed = False
        self.reviewed_first: set[str] = set()

    def run(self) -> ScenarioResult:
        state = self.runtime.state
        for _ in range(4000):
            if self.runtime.status().complete:
                break
            self._resolve_issue_if_open()
            progressed = False
            for worker in self.workers:
                if state.assignment_of(worker) is not None:
                    self._complete_assignment(worker)
                    progressed = True
                    continue
                self.now += 1.0
                if self.runtime.fetch(worker, self.now) is not None:
                    self._complete_assignment(worker)
                    progressed = True
            if not progressed:
                self.now += 1.0
        else:
            raise RuntimeError("scripted scenario did not converge")
        return ScenarioResult(runtime=self.runtime, events=list(self.runtime.events))

    def _resolve_issue_if_open(self) -> None:
        state = self.runtime.state
        for issue in state.issues.values():
            if not issue.resolved:
                self.now += 1.0
                self.runtime.resolve_issue(
                    issue.id,
                    {"description": state.functions[issue.function_id].description
                     + " Times are local 'MM/DD/YY,HH:MM' strings."},
                    principal=Principal("client", "client-1"),
                    now=self.now,
                )

    def _complete_assignment(self, worker: str) -> None:
        state = self.runtime.state
        assignment = state.assignment_of(worker)
        assert assignment is not None
        self.now += 1.0
        if assignment.kind is MicrotaskKind.REVIEW:
            self._review(worker, assignment)
        else:
            self._implement(worker, assignment)

    def _next_tests(self, function_name: str, count: int, worker: str) -> tuple[TestCase, ...]:
        checks = oracle_checks_for(function_name)
        start = self.test_cursor.get(function_name, 0)
        picked = checks[start:start + count]
        self.test_cursor[function_name] = start + len(picked)
        return tuple(
            TestCase.io_pair(
                f"{function_name}-test-{start + i + 1}",
                list(c.inputs),
                c.expected,
                description=c.description,
                author_worker_id=worker,
            )
            for i, c in enumerate(picked)
        )

    def _implement(self, worker: str, assignment: MicrotaskRecord) -> None:
        state = self.runtime.state
        function = state.functions[assignment.function_id]
        self.submission_count += 1
        submission_id = f"scn-{self.submission_count}"

        if function.name == _ISSUE_TARGET and not self.issue_filed:
            self.issue_filed = True
            payload: Any = IssueReport(
                text="the expected format of currentTime is unclear; is it the"
                " same 'MM/DD/YY,HH:MM' shape as dueDate?"
            )
            self.runtime.submit(
                Submission(id=submission_id, microtask_id=assignment.id,
                           worker_id=worker, payload=payload),
                self.now,
            )
            return

        final_source = self.sources[function.name]
        threshold = 1 if function.name == CHECK_DATE_FORMAT.name else 2
        applied = function.behaviors_applied

        if applied >= threshold:
            self.runtime.submit(
                Submission(id=submission_id, microtask_id=assignment.id,
                           worker_id=worker, payload=MarkComplete()),
                self.now,
            )
            return

        last_behavior = applied >= threshold - 1
        code = final_source if last_behavior else _partial_source(final_source)
        tests = self._next_tests(function.name, 2 if not last_behavior else 1, worker)
        new_functions = ()
        stubs = ()
        if function.name == _CREATOR_HOST and applied == 0:
            new_functions = (CHECK_DATE_FORMAT,)
            stubs = (CHECK_DATE_FORMAT_STUB,)
        payload = BehaviorContribution(
            code_diff=code,
            tests_added=tests,
            stubs_added=stubs,
            new_functions=new_functions,
        )
        report = self.runtime.run_function_tests(
            function.id, code=code, tests=tests, stubs=stubs,
            persistence_seed=TODO_SEED,
        )
        self.runtime.submit(
            Submission(id=submission_id, microtask_id=assignment.id,
                       worker_id=worker, payload=payload,
                       test_report=report.to_wire()),
            self.now,
        )

    def _review(self, worker: str, assignment: MicrotaskRecord) -> None:
        state = self.runtime.state
        record = state.submissions[assignment.submission_id]
        parent = state.microtasks[record.submission.microtask_id]
        function = state.functions[parent.function_id]

        if function.name == _REWORK_TARGET and function.name not in self.reviewed_first:
            self.reviewed_first.add(function.name)
            decision = ReviewDecision(
                submission_id=assignment.submission_id,
                reviewer_worker_id=worker,
                stars=2,
                feedback="only handled the happy path; cover the missing-todo"
                " and second-user behaviors",
            )
        else:
            index = list(state.functions).index(function.id)
            stars = 4 if index % 3 == 2 else 5
            decision = ReviewDecision(
                submission_id=assignment.submission_id,
                reviewer_worker_id=worker,
                stars=stars,
                feedback="" if stars == 5 else "accepted with minor reservations",
            )
        self.runtime.review(decision, self.now)


def run_todo_scenario(*, defective: bool = False) -> ScenarioResult:
    return _ScriptedCrowd(defective=defective).run()


def run_timeout_scenario() -> ScenarioResult:
    """Idle worker w1 is warned at 14:00, auto-skipped at 15:00; w2 picks the
    microtask up and the function completes through the normal chain."""
    runtime = ProjectRuntime.create(
        ping_client_request(),
        project_id="timeout-scenario",
        policy=AssignmentPolicy(),
        now=0.0,
    )
    runtime.fetch("w1", 0.0)
    runtime.tick(14.0)   # warning
    runtime.tick(15.0)   # expiry, re-enqueue
    runtime.fetch("w2", 15.0)
    code = '# quality:ok\nreturn "pong"\n'
    test = TestCase.io_pair("ping-test-1", [], "pong", description="returns pong",
                            author_worker_id="w2")
    report = runtime.run_function_tests("fn-1", code=code, tests=(test,))
    runtime.submit(
        Submission(
            id="timeout-s1",
            microtask_id="mt-1",
            worker_id="w2",
            payload=BehaviorContribution(code_diff=code, tests_added=(test,)),
            test_report=report.to_wire(),
        ),
        18.0,
    )
    runtime.fetch("w1", 19.0)
    runtime.review(
        ReviewDecision(submission_id="timeout-s1", reviewer_worker_id="w1", stars=5),
        20.0,
    )
    runtime.fetch("w1", 21.0)
    runtime.submit(
        Submission(id="timeout-s2", microtask_id="mt-3", worker_id="w1",
                   payload=MarkComplete()),
        22.0,
    )
    runtime.fetch("w2", 23.0)
    runtime.review(
        ReviewDecision(submission_id="timeout-s2", reviewer_worker_id="w2", stars=5),
        24.0,
    )
    return ScenarioResult(runtime=runtime, events=list(runtime.events))
