"""Single-writer runtime for one project: serializes commands, appends
atomic event batches, keeps the folded state current, and optionally
persists the log (plus periodic snapshots) to a data directory.

All command methods take an explicit logical ``now`` in minutes; only the
HTTP edge converts wall-clock time.
"""

from __future__ import annotations

import copy
import json
import threading
from pathlib import Path
from typing import Any, Iterable

from . import engine
from . import events as ev
from .assembler import (
    DeployTarget,
    LocalDirectoryTarget,
    ProjectArtifactTree,
    assemble_project,
    publish as deliver_tree,
)
from .errors import UnknownEntityError
from .model import ClientRequest, ReviewDecision, Submission
from .sandbox import (
    ExecutionBundle,
    ExecutorPort,
    MockExecutor,
    TestRunReport,
    bundle_for_function,
    run_tests,
)
from .scheduler import AssignmentPolicy, Scheduler
from .state import ProjectState

DEFAULT_SNAPSHOT_EVERY = 500


class ProjectRuntime:
    def __init__(self, *, data_dir: str | Path | None = None,
                 executor: ExecutorPort | None = None,
                 snapshot_every: int = DEFAULT_SNAPSHOT_EVERY):
        self.state = ProjectState()
        self.events: list[ev.ProjectEvent] = []
        self.executor: ExecutorPort = executor or MockExecutor()
        self.snapshot_every = snapshot_every
        self._data_dir = Path(data_dir) if data_dir else None
        self._scheduler: Scheduler | None = None
        self._lock = threading.RLock()
        self._run_count = 0

    # ---- lifecycle ----

    @classmethod
    def create(cls, request: ClientRequest, *, project_id: str,
               policy: AssignmentPolicy | None = None, now: float = 0.0,
               data_dir: str | Path | None = None,
               executor: ExecutorPort | None = None,
               snapshot_every: int = DEFAULT_SNAPSHOT_EVERY) -> "ProjectRuntime":
        runtime = cls(data_dir=data_dir, executor=executor, snapshot_every=snapshot_every)
        batch = engine.init_project(request, project_id=project_id, policy=policy, now=now)
        runtime._append(batch)
        return runtime

    @classmethod
    def open(cls, data_dir: str | Path, project_id: str, *,
             executor: ExecutorPort | None = None,
             snapshot_every: int = DEFAULT_SNAPSHOT_EVERY) -> "ProjectRuntime":
        """Rebuild a runtime from its persisted snapshot and event log."""
        root = Path(data_dir) / project_id
        log_path = root / "events.ndjson"
        if not log_path.exists():
            raise UnknownEntityError(f"no event log for project {project_id}")
        runtime = cls(data_dir=data_dir, executor=executor, snapshot_every=snapshot_every)
        runtime.events = ev.read_log(log_path)
        snapshot_path = root / "snapshot.json"
        start_sequence = 0
        if snapshot_path.exists():
            snapshot = json.loads(snapshot_path.read_text(encoding="utf-8"))
            runtime.state = ProjectState.from_dict(snapshot["state"])
            start_sequence = runtime.state.last_sequence
        for event in runtime.events:
            if event.sequence > start_sequence:
                runtime.state.apply(event)
        return runtime

    @property
    def project_id(self) -> str:
        return self.state.project_id or ""

    @property
    def scheduler(self) -> Scheduler:
        if self._scheduler is None:
            self._scheduler = Scheduler(self.state.policy)
        return self._scheduler

    # ---- event plumbing ----

    def _append(self, batch: list[ev.ProjectEvent]) -> list[ev.ProjectEvent]:
        if not batch:
            return batch
        for event in batch:
            self.state.apply(event)
        self.events.extend(batch)
        if self._data_dir is not None:
            root = self._data_dir / self.project_id
            root.mkdir(parents=True, exist_ok=True)
            ev.append_log(root / "events.ndjson", batch)
            since_snapshot = self.state.last_sequence % max(self.snapshot_every, 1)
            if self.snapshot_every > 0 and since_snapshot < len(batch):
                self._write_snapshot(root)
        return batch

    def _write_snapshot(self, root: Path) -> None:
        snapshot = {"lastSequence": self.state.last_sequence, "state": self.state.to_dict()}
        (root / "snapshot.json").write_text(
            json.dumps(snapshot, sort_keys=True), encoding="utf-8"
        )

    # ---- commands (each appends one atomic batch) ----

    def fetch(self, worker_id: str, now: float) -> list[ev.ProjectEvent] | None:
        with self._lock:
            batch = self.scheduler.fetch(self.state, worker_id, now)
            if batch is None:
                return None
            return self._append(batch)

    def skip(self, worker_id: str, now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(self.scheduler.skip(self.state, worker_id, now))

    def tick(self, now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(self.scheduler.tick(self.state, now))

    def submit(self, submission: Submission, now: float) -> tuple[list[ev.ProjectEvent], bool]:
        """Handle an implement-behavior submission; idempotent on the
        submission id (a replayed id returns no new events)."""
        with self._lock:
            if submission.id in self.state.submissions:
                return [], False
            batch = engine.handle_ifb_submission(self.state, submission, now=now)
            return self._append(batch), True

    def review(self, decision: ReviewDecision, now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(engine.handle_review_submission(self.state, decision, now=now))

    def resolve_issue(self, issue_id: str, resolution: dict, *,
                      principal: engine.Principal, now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(
                engine.resolve_issue(self.state, issue_id, resolution,
                                     principal=principal, now=now)
            )

    def post_question(self, worker_id: str, text: str, now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(engine.post_question(self.state, worker_id, text, now=now))

    def post_answer(self, question_id: str, worker_id: str, text: str,
                    now: float) -> list[ev.ProjectEvent]:
        with self._lock:
            return self._append(
                engine.post_answer(self.state, question_id, worker_id, text, now=now)
            )

    def status(self) -> engine.ProjectStatus:
        return engine.project_status(self.state)

    # ---- test runs (read-only; no events) ----

    def run_function_tests(self, function_id: str, *,
                           code: str | None = None,
                           tests: Iterable | None = None,
                           stubs: Iterable = (),
                           persistence_seed: Iterable[tuple[str, str, Any]] = ()) -> TestRunReport:
        """Run a function's tests (optionally with workspace overrides)
        through the configured executor."""
        with self._lock:
            function = self.state.functions.get(function_id)
            if function is None:
                raise UnknownEntityError(f"unknown function {function_id}")
            self._run_count += 1
            snapshot = list(self.state.functions.values())
            if code is not None:
                snapshot = [copy.copy(f) for f in snapshot]
                for record in snapshot:
                    if record.id == function_id:
                        record.code = code
                        function = record
            bundle = bundle_for_function(
                function,
                snapshot,
                bundle_id=f"run-{self.project_id}-{self._run_count}",
                tests=tuple(tests) if tests is not None else None,
                extra_stubs=tuple(stubs),
                persistence_seed=tuple(persistence_seed),
            )
        return run_tests(bundle, self.executor)

    def run_bundle(self, bundle: ExecutionBundle) -> TestRunReport:
        return run_tests(bundle, self.executor)

    # ---- publication ----

    def publish(self, target: DeployTarget | None = None, *, force: bool = False,
                now: float = 0.0) -> tuple[ProjectArtifactTree, dict]:
        """Assemble and deliver the project; the ProjectPublished event is
        appended only after the target accepted the tree."""
        with self._lock:
            tree = assemble_project(self.state, force=force)
            if target is None:
                if self._data_dir is None:
                    raise UnknownEntityError("no publish target and no data directory")
                target = LocalDirectoryTarget(
                    str(self._data_dir / self.project_id / "published")
                )
            record = deliver_tree(tree, target, timestamp=now)
            self._append(
                engine.record_publication(self.state, record.location,
                                          record.content_hash, now=now)
            )
            return tree, record.to_dict()
