"""Test execution: bundles, stub interception, executors, and reports.

The engine never runs authored code itself. It assembles an
:class:`ExecutionBundle` (function sources, tests, stubs, persistence
seed), hands it to an executor, and interprets the resulting
:class:`TestRunReport`. Two executors are provided:

* :class:`MockExecutor` runs hermetically and deterministically. It
  understands a tiny line-oriented script form (below) used by fixtures
  and the crowd simulator, and can additionally be scripted with forced
  outcomes keyed by (entry function, entry version, test id).
* :class:`SubprocessExecutor` speaks the length-delimited wire protocol to
  an external harness process over stdin/stdout for real authored code.

Script form, one operation per line (``#`` starts a comment)::

    when <args-json> -> <value-expr>     conditional return on exact args
    call <name> <args-json>              call through stub interception
    save <collection> <id> <value-json>
    update <collection> <id> <value-json>
    remove <collection> <id>
    return <value-expr>
    fail <message>                       test fails with message
    throw <message>                      authored code raises

``<value-expr>`` is JSON text, ``list <collection>``, or
``get <collection> <id>``. Code tests additionally support
``expect <name> <args-json> -> <value-expr>``.

Every test runs against a fresh store built from the bundle's persistence
seed, so the store never leaks between tests. Stub matching is exact on
the canonical form of the argument list; a matching stub always
intercepts, even for implemented callees. A call to an unimplemented
function with no matching stub is a stub miss and errors the test.
"""

from __future__ import annotations

import subprocess
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Any, IO, Iterable, Protocol

from .canonical import CanonicalizationError, canonicalize, parse_canonical
from .errors import ExecutorUnavailableError, ValidationFailure
from .model import Stub, TestCase, TestKind
from .store import DocumentStore, MissingDocumentError

_MAX_CALL_DEPTH = 16


@dataclass(frozen=True)
class BundleFunction:
    name: str
    params: tuple[str, ...]
    source: str

    def to_dict(self) -> dict:
        return {"name": self.name, "params": list(self.params), "source": self.source}

    @classmethod
    def from_dict(cls, data: dict) -> "BundleFunction":
        return cls(
            name=data["name"],
            params=tuple(data.get("params", [])),
            source=data.get("source", ""),
        )


@dataclass(frozen=True)
class ExecutionLimits:
    wall_time_seconds: float = 5.0
    output_bytes: int = 65536

    def to_dict(self) -> dict:
        return {"wallTimeSeconds": self.wall_time_seconds, "outputBytes": self.output_bytes}

    @classmethod
    def from_dict(cls, data: dict) -> "ExecutionLimits":
        return cls(
            wall_time_seconds=data.get("wallTimeSeconds", 5.0),
            output_bytes=data.get("outputBytes", 65536),
        )


@dataclass(frozen=True)
class ExecutionBundle:
    """Everything an executor needs for one test run.

    ``entry_version`` is bookkeeping for scripted executors; it does not
    travel on the wire.
    """

    bundle_id: str
    functions: tuple[BundleFunction, ...]
    entry_function: str
    tests: tuple[TestCase, ...]
    stubs: tuple[Stub, ...] = ()
    persistence_seed: tuple[tuple[str, str, Any], ...] = ()
    limits: ExecutionLimits = ExecutionLimits()
    entry_version: int = 0

    def validate(self) -> None:
        names = [f.name for f in self.functions]
        if self.entry_function not in names:
            raise ValidationFailure(
                [f"entry function {self.entry_function!r} is not in the bundle"]
            )
        if len(set(names)) != len(names):
            raise ValidationFailure(["bundle function names must be unique"])
        test_ids = [t.id for t in self.tests]
        if len(set(test_ids)) != len(test_ids):
            raise ValidationFailure(["bundle test ids must be unique"])

    def implemented_set(self) -> set[str]:
        """Functions with an actual body; empty bodies are unimplemented."""
        return {f.name for f in self.functions if f.source.strip()}

    def to_wire(self) -> dict:
        return {
            "bundleId": self.bundle_id,
            "functions": [f.to_dict() for f in self.functions],
            "entryFunction": self.entry_function,
            "tests": [_strip_author(t.to_dict()) for t in self.tests],
            "stubs": [
                {
                    "calleeName": s.callee_name,
                    "argumentTuple": s.argument_tuple,
                    "returnValue": s.return_value,
                }
                for s in self.stubs
            ],
            "persistenceSeed": [
                {"collection": c, "id": i, "value": v} for c, i, v in self.persistence_seed
            ],
            "limits": self.limits.to_dict(),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "ExecutionBundle":
        return cls(
            bundle_id=data["bundleId"],
            functions=tuple(BundleFunction.from_dict(f) for f in data.get("functions", [])),
            entry_function=data["entryFunction"],
            tests=tuple(TestCase.from_dict(t) for t in data.get("tests", [])),
            stubs=tuple(Stub.from_dict(s) for s in data.get("stubs", [])),
            persistence_seed=tuple(
                (s["collection"], s["id"], s.get("value"))
                for s in data.get("persistenceSeed", [])
            ),
            limits=ExecutionLimits.from_dict(data.get("limits", {})),
        )


def _strip_author(test_dict: dict) -> dict:
    test_dict.pop("authorWorkerId", None)
    return test_dict


class TestStatus(str, Enum):
    __test__ = False  # keep pytest from collecting this domain type

    PASSED = "passed"
    FAILED = "failed"
    ERRORED = "errored"


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # keep pytest from collecting this domain type

    test_id: str
    status: TestStatus
    message: str = ""
    traces: tuple[tuple[str, tuple], ...] = ()  # (expression, observed values)
    stub_hits: tuple[tuple[str, str], ...] = ()
    stub_misses: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "testId": self.test_id,
            "status": self.status.value,
            "traces": [
                {"expression": expr, "values": list(values)} for expr, values in self.traces
            ],
            "stubHits": [
                {"calleeName": c, "argumentTuple": a} for c, a in self.stub_hits
            ],
            "stubMisses": [
                {"calleeName": c, "argumentTuple": a} for c, a in self.stub_misses
            ],
        }
        if self.status is not TestStatus.PASSED:
            data["message"] = self.message
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TestResult":
        return cls(
            test_id=data["testId"],
            status=TestStatus(data["status"]),
            message=data.get("message", ""),
            traces=tuple(
                (t["expression"], tuple(t.get("values", []))) for t in data.get("traces", [])
            ),
            stub_hits=tuple(
                (h["calleeName"], h["argumentTuple"]) for h in data.get("stubHits", [])
            ),
            stub_misses=tuple(
                (m["calleeName"], m["argumentTuple"]) for m in data.get("stubMisses", [])
            ),
        )


@dataclass(frozen=True)
class TestRunReport:
    __test__ = False  # keep pytest from collecting this domain type

    bundle_id: str
    per_test: tuple[TestResult, ...]
    persistence_final_state: tuple = ()

    def passed(self) -> bool:
        return all(r.status is TestStatus.PASSED for r in self.per_test)

    def to_wire(self) -> dict:
        return {
            "bundleId": self.bundle_id,
            "perTest": [r.to_dict() for r in self.per_test],
            "persistenceFinalState": list(self.persistence_final_state),
        }

    @classmethod
    def from_wire(cls, data: dict) -> "TestRunReport":
        return cls(
            bundle_id=data["bundleId"],
            per_test=tuple(TestResult.from_dict(r) for r in data.get("perTest", [])),
            persistence_final_state=tuple(data.get("persistenceFinalState", [])),
        )


class ExecutorPort(Protocol):
    def execute(self, bundle: ExecutionBundle) -> TestRunReport: ...


# ---- stub interception ----

USE_STUB = "use-stub"
CALL_REAL = "call-real"
MISS = "miss"


@dataclass(frozen=True)
class CallResolution:
    kind: str
    return_value: Any = None


def resolve_call(callee_name: str, argument_tuple: str, stubs: Iterable[Stub],
                 implemented_set: set[str]) -> CallResolution:
    """The three-way interception rule.

    An exact (callee, canonical arguments) stub match always intercepts,
    implemented or not. With no match, implemented callees are called for
    real and unimplemented callees are a miss.
    """
    for stub in stubs:
        if stub.callee_name == callee_name and stub.argument_tuple == argument_tuple:
            return CallResolution(USE_STUB, stub.return_value)
    if callee_name in implemented_set:
        return CallResolution(CALL_REAL)
    return CallResolution(MISS)


# ---- the scripted interpreter used by MockExecutor ----


class _ScriptFailure(Exception):
    pass


class _ScriptThrow(Exception):
    pass


class _StubMissError(Exception):
    def __init__(self, callee: str, argument_tuple: str):
        super().__init__(f"call to unimplemented function {callee} with no matching stub"
                         f" for arguments {argument_tuple}")
        self.callee = callee
        self.argument_tuple = argument_tuple


class _Run:
    """Execution context for a single test."""

    def __init__(self, bundle: ExecutionBundle, store: DocumentStore):
        self.bundle = bundle
        self.functions = {f.name: f for f in bundle.functions}
        self.implemented = bundle.implemented_set()
        self.store = store
        self.traces: list[tuple[str, tuple]] = []
        self.stub_hits: list[tuple[str, str]] = []
        self.stub_misses: list[tuple[str, str]] = []

    def call(self, callee: str, args: list, depth: int) -> Any:
        argument_tuple = canonicalize(list(args))
        resolution = resolve_call(callee, argument_tuple, self.bundle.stubs, self.implemented)
        if resolution.kind == USE_STUB:
            self.stub_hits.append((callee, argument_tuple))
            return resolution.return_value
        if resolution.kind == MISS:
            self.stub_misses.append((callee, argument_tuple))
            raise _StubMissError(callee, argument_tuple)
        return self.run_function(callee, args, depth + 1)

    def run_function(self, name: str, args: list, depth: int = 0) -> Any:
        if depth > _MAX_CALL_DEPTH:
            raise _ScriptThrow(f"call depth limit exceeded in {name}")
        source = self.functions[name].source
        call_args = canonicalize(list(args))
        for line in _script_lines(source):
            op, rest = _split_op(line)
            if op == "when":
                guard, value_expr = _split_arrow(rest, line)
                if canonicalize(parse_canonical(guard)) == call_args:
                    value = self.value_of(value_expr, depth)
                    self.traces.append((line, (value,)))
                    return value
            elif op == "return":
                value = self.value_of(rest, depth)
                self.traces.append((line, (value,)))
                return value
            else:
                self.effect(op, rest, line, depth)
        return None

    def run_code_test(self, source: str) -> None:
        for line in _script_lines(source):
            op, rest = _split_op(line)
            if op == "expect":
                call_part, value_expr = _split_arrow(rest, line)
                name, args_text = _split_name_args(call_part, line)
                actual = self.call(name, parse_canonical(args_text), 0)
                expected = self.value_of(value_expr, 0)
                self.traces.append((line, (actual,)))
                if canonicalize(actual) != canonicalize(expected):
                    raise _ScriptFailure(
                        f"expected {canonicalize(expected)}, got {canonicalize(actual)}"
                    )
            elif op == "return":
                self.value_of(rest, 0)
                return
            else:
                self.effect(op, rest, line, 0)

    def effect(self, op: str, rest: str, line: str, depth: int) -> None:
        if op == "call":
            name, args_text = _split_name_args(rest, line)
            value = self.call(name, parse_canonical(args_text), depth)
            self.traces.append((line, (value,)))
        elif op == "save":
            collection, doc_id, value_text = _split_store_args(rest, line, with_value=True)
            self.store.save(collection, doc_id, parse_canonical(value_text))
        elif op == "update":
            collection, doc_id, value_text = _split_store_args(rest, line, with_value=True)
            try:
                self.store.update(collection, doc_id, parse_canonical(value_text))
            except MissingDocumentError as exc:
                raise _ScriptThrow(str(exc)) from exc
        elif op == "remove":
            collection, doc_id, _ = _split_store_args(rest, line, with_value=False)
            self.store.remove(collection, doc_id)
        elif op == "fail":
            raise _ScriptFailure(rest.strip() or "scripted failure")
        elif op == "throw":
            raise _ScriptThrow(rest.strip() or "scripted error")
        else:
            raise _ScriptThrow(f"invalid script line: {line}")

    def value_of(self, expr: str, depth: int) -> Any:
        expr = expr.strip()
        if expr.startswith("list "):
            return self.store.list(expr[len("list "):].strip())
        if expr.startswith("get "):
            parts = expr[len("get "):].split()
            if len(parts) != 2:
                raise _ScriptThrow(f"invalid get expression: {expr}")
            return self.store.get(parts[0], parts[1])
        try:
            return parse_canonical(expr)
        except CanonicalizationError as exc:
            raise _ScriptThrow(f"invalid value expression {expr!r}: {exc}") from exc


def _script_lines(source: str) -> list[str]:
    lines = []
    for raw in source.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def _split_op(line: str) -> tuple[str, str]:
    parts = line.split(None, 1)
    return parts[0], parts[1] if len(parts) > 1 else ""


def _split_arrow(text: str, line: str) -> tuple[str, str]:
    if "->" not in text:
        raise _ScriptThrow(f"missing '->' in script line: {line}")
    left, right = text.split("->", 1)
    return left.strip(), right.strip()


def _split_name_args(text: str, line: str) -> tuple[str, str]:
    parts = text.split(None, 1)
    if len(parts) != 2:
        raise _ScriptThrow(f"expected '<name> <args-json>' in script line: {line}")
    return parts[0], parts[1]


def _split_store_args(text: str, line: str, *, with_value: bool) -> tuple[str, str, str]:
    parts = text.split(None, 2)
    needed = 3 if with_value else 2
    if len(parts) < needed:
        raise _ScriptThrow(f"malformed store operation: {line}")
    return parts[0], parts[1], parts[2] if with_value else ""


class MockExecutor:
    """Deterministic in-process executor for the hermetic test suites.

    ``outcomes`` forces results for specific tests, keyed by
    ``(entry_function, entry_version, test_id)``; unforced tests are run
    through the script interpreter.
    """

    def __init__(self, outcomes: dict[tuple[str, int, str], TestStatus] | None = None):
        self.outcomes = dict(outcomes or {})

    def execute(self, bundle: ExecutionBundle) -> TestRunReport:
        results = []
        store = DocumentStore(bundle.persistence_seed)
        for test in bundle.tests:
            store.reset(bundle.persistence_seed)
            forced = self.outcomes.get((bundle.entry_function, bundle.entry_version, test.id))
            if forced is not None:
                status = TestStatus(forced)
                message = "" if status is TestStatus.PASSED else "scripted outcome"
                results.append(TestResult(test_id=test.id, status=status, message=message))
                continue
            results.append(self._run_test(bundle, test, store))
        return TestRunReport(
            bundle_id=bundle.bundle_id,
            per_test=tuple(results),
            persistence_final_state=tuple(store.snapshot()),
        )

    def _run_test(self, bundle: ExecutionBundle, test: TestCase,
                  store: DocumentStore) -> TestResult:
        run = _Run(bundle, store)
        status = TestStatus.PASSED
        message = ""
        try:
            if test.kind is TestKind.IO_PAIR:
                actual = run.run_function(bundle.entry_function, list(test.inputs))
                if canonicalize(actual) != canonicalize(test.expected_output):
                    status = TestStatus.FAILED
                    message = (
                        f"expected {canonicalize(test.expected_output)},"
                        f" got {canonicalize(actual)}"
                    )
            else:
                run.run_code_test(test.source)
        except _ScriptFailure as exc:
            status, message = TestStatus.FAILED, str(exc)
        except _StubMissError as exc:
            status, message = TestStatus.ERRORED, str(exc)
        except _ScriptThrow as exc:
            status, message = TestStatus.ERRORED, str(exc)
        except CanonicalizationError as exc:
            status, message = TestStatus.ERRORED, f"uncanonical value: {exc}"
        return TestResult(
            test_id=test.id,
            status=status,
            message=message,
            traces=tuple(run.traces),
            stub_hits=tuple(run.stub_hits),
            stub_misses=tuple(run.stub_misses),
        )


def run_tests(bundle: ExecutionBundle, executor: ExecutorPort) -> TestRunReport:
    """Dispatch a bundle and normalize failures: an unreachable or
    misbehaving executor yields per-test errored statuses, never an
    engine crash."""
    bundle.validate()
    try:
        report = executor.execute(bundle)
    except ExecutorUnavailableError as exc:
        return _all_errored(bundle, f"executor unavailable: {exc}")
    expected_ids = [t.id for t in bundle.tests]
    reported_ids = [r.test_id for r in report.per_test]
    if reported_ids != expected_ids:
        return _all_errored(bundle, "executor returned a malformed report")
    return report


def _all_errored(bundle: ExecutionBundle, message: str) -> TestRunReport:
    return TestRunReport(
        bundle_id=bundle.bundle_id,
        per_test=tuple(
            TestResult(test_id=t.id, status=TestStatus.ERRORED, message=message)
            for t in bundle.tests
        ),
        persistence_final_state=(),
    )


# ---- wire protocol (length-delimited canonical records over stdio) ----
#
# Frame: ASCII decimal byte length, '\n', then exactly that many bytes of
# canonical-form text. One request in flight per harness process.


def write_frame(stream: IO[bytes], payload: dict) -> None:
    data = canonicalize(payload).encode("utf-8")
    stream.write(f"{len(data)}\n".encode("ascii"))
    stream.write(data)
    stream.flush()


def read_frame(stream: IO[bytes]) -> dict | None:
    header = stream.readline()
    if not header:
        return None
    try:
        length = int(header.decode("ascii").strip())
    except ValueError as exc:
        raise ExecutorUnavailableError(f"bad frame header {header!r}") from exc
    data = stream.read(length)
    if data is None or len(data) != length:
        raise ExecutorUnavailableError("truncated frame")
    parsed = parse_canonical(data.decode("utf-8"))
    if not isinstance(parsed, dict):
        raise ExecutorUnavailableError("frame payload is not an object")
    return parsed


class SubprocessExecutor:
    """Dispatches bundles to a harness subprocess over the wire protocol.

    The harness process is started lazily and reused; requests are
    serialized (one in flight per process). A harness that dies or fails
    to answer within the bundle's wall-time budget (plus grace) is killed
    and reported as unavailable.
    """

    GRACE_SECONDS = 10.0

    def __init__(self, command: list[str]):
        self.command = list(command)
        self._process: subprocess.Popen | None = None
        self._lock = threading.Lock()

    def _ensure_process(self) -> subprocess.Popen:
        if self._process is None or self._process.poll() is not None:
            try:
                self._process = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                )
            except OSError as exc:
                raise ExecutorUnavailableError(f"cannot start harness: {exc}") from exc
        return self._process

    def execute(self, bundle: ExecutionBundle) -> TestRunReport:
        timeout = bundle.limits.wall_time_seconds + self.GRACE_SECONDS
        with self._lock:
            process = self._ensure_process()
            try:
                write_frame(process.stdin, bundle.to_wire())
            except (OSError, ValueError) as exc:
                self.close()
                raise ExecutorUnavailableError(f"harness write failed: {exc}") from exc

            box: list = []
            error: list = []

            def _read() -> None:
                try:
                    box.append(read_frame(process.stdout))
                except Exception as exc:  # noqa: BLE001 - reported below
                    error.append(exc)

            reader = threading.Thread(target=_read, daemon=True)
            reader.start()
            reader.join(timeout)
            if reader.is_alive():
                self.close()
                raise ExecutorUnavailableError(
                    f"harness did not answer within {timeout:.1f}s"
                )
            if error:
                self.close()
                raise ExecutorUnavailableError(f"harness read failed: {error[0]}")
            response = box[0]
            if response is None:
                self.close()
                raise ExecutorUnavailableError("harness closed its output")
            if response.get("bundleId") != bundle.bundle_id:
                self.close()
                raise ExecutorUnavailableError("harness answered for a different bundle")
            return TestRunReport.from_wire(response)

    def close(self) -> None:
        process, self._process = self._process, None
        if process is not None and process.poll() is None:
            process.kill()
            process.wait(timeout=5)

    def __enter__(self) -> "SubprocessExecutor":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def bundle_for_function(function, project_functions, *, bundle_id: str,
                        tests: Iterable[TestCase] | None = None,
                        extra_stubs: Iterable[Stub] = (),
                        persistence_seed: Iterable[tuple[str, str, Any]] = (),
                        limits: ExecutionLimits | None = None) -> ExecutionBundle:
    """Build the bundle for running one function's tests against the
    current project code, honoring the function's recorded stubs."""
    stubs: dict[tuple[str, str], Stub] = {s.key(): s for s in function.stubs}
    for stub in extra_stubs:
        stubs[stub.key()] = stub
    return ExecutionBundle(
        bundle_id=bundle_id,
        functions=tuple(
            BundleFunction(
                name=f.name,
                params=tuple(n for n, _ in f.params),
                source=f.code,
            )
            for f in project_functions
        ),
        entry_function=function.name,
        tests=tuple(tests if tests is not None else function.tests),
        stubs=tuple(stubs.values()),
        persistence_seed=tuple(persistence_seed),
        limits=limits or ExecutionLimits(),
        entry_version=function.version,
    )
