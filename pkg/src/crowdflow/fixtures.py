"""The ToDo reference fixture: a 12-endpoint client request, scripted
implementations for all 13 functions (12 endpoints plus the crowd-created
``checkTodoDateFormat``), a defective variant carrying 4 seeded defects,
and the 34-check behavior oracle that tells them apart.

The defective variant mirrors a realistic outcome: one function misses a
conditional (breaking 4 behavior checks) and three others each break one,
so 27 of the 34 checks pass; the corrected sources pass all 34.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .canonical import canonicalize
from .model import (
    Adt,
    ClientRequest,
    EndpointSpec,
    NewFunctionSpec,
    Stub,
    TestCase,
    TypeRef,
)

STRING = TypeRef("string")
NUMBER = TypeRef("number")
BOOLEAN = TypeRef("boolean")
TODO = TypeRef("Todo")
TODO_LIST = TypeRef("Todo", list_depth=1)


def _todo(todo_id: str, user: str, title: str, description: str, due: str, *,
          status: str = "open", archived: bool = False, remind: str = "") -> dict:
    return {
        "id": todo_id,
        "userId": user,
        "title": title,
        "description": description,
        "dueDate": due,
        "status": status,
        "archived": archived,
        "remindAt": remind,
    }


T1 = _todo("t1", "u1", "buy milk", "2 liters", "01/05/26,09:00")
T2 = _todo("t2", "u1", "pay rent", "march rent", "01/03/26,17:00",
           status="done", remind="01/03/26,08:00")
T3 = _todo("t3", "u1", "call mom", "weekly call", "01/04/26,19:00", archived=True)
T4 = _todo("t4", "u2", "gym", "leg day", "01/06/26,07:00", remind="01/06/26,06:00")

T9 = _todo("t9", "u1", "water plants", "balcony", "01/07/26,10:00")
T10 = _todo("t10", "u2", "gym shoes", "size 42", "01/08/26,12:00")
T1_DONE = {**T1, "status": "done"}
T4_DONE = {**T4, "status": "done"}
T1_ARCHIVED = {**T1, "archived": True}
T1_REMINDED = {**T1, "remindAt": "01/05/26,08:00"}
T1_UPDATED = {**T1, "title": "buy oat milk", "description": "3 liters"}
T4_UPDATED = {**T4, "description": "arm day"}

TODO_SEED: tuple[tuple[str, str, Any], ...] = (
    ("todos", "t1", T1),
    ("todos", "t2", T2),
    ("todos", "t3", T3),
    ("todos", "t4", T4),
)

VALID_DATE = "01/07/26,10:00"
INVALID_DATE = "99/99/99,99:99"


def todo_client_request() -> ClientRequest:
    """The 12-endpoint ToDo microservice request used across the suites."""
    todo_adt = Adt(
        name="Todo",
        fields=(
            ("id", STRING),
            ("userId", STRING),
            ("title", STRING),
            ("description", STRING),
            ("dueDate", STRING),
            ("status", STRING),
            ("archived", BOOLEAN),
            ("remindAt", STRING),
        ),
    )
    endpoints = (
        EndpointSpec(
            "createTodo",
            "Creates a todo for the user and returns it. The dueDate must be"
            " in the format 'MM/DD/YY,HH:MM'; creation with an invalid date"
            " or an empty title yields null.",
            (("userId", STRING), ("title", STRING), ("description", STRING),
             ("dueDate", STRING)),
            TODO,
        ),
        EndpointSpec(
            "fetchTodo",
            "Returns the user's todo with the given id, or null when it does"
            " not exist.",
            (("userId", STRING), ("todoId", STRING)),
            TODO,
        ),
        EndpointSpec(
            "fetchAllTodos",
            "Returns every todo belonging to the user, in creation order.",
            (("userId", STRING),),
            TODO_LIST,
        ),
        EndpointSpec(
            "fetchTodosBasedOnStatus",
            "Returns the user's todos whose status equals the given status"
            " ('open' or 'done').",
            (("userId", STRING), ("status", STRING)),
            TODO_LIST,
        ),
        EndpointSpec(
            "updateTodo",
            "Replaces the user's todo with the given id and returns the"
            " updated todo, or null when it does not exist.",
            (("userId", STRING), ("todoId", STRING), ("todo", TODO)),
            TODO,
        ),
        EndpointSpec(
            "deleteTodo",
            "Deletes the user's todo with the given id; returns true when a"
            " todo was deleted and false otherwise.",
            (("userId", STRING), ("todoId", STRING)),
            BOOLEAN,
        ),
        EndpointSpec(
            "markTodoComplete",
            "Sets the todo's status to 'done' and returns it, or null when"
            " it does not exist.",
            (("userId", STRING), ("todoId", STRING)),
            TODO,
        ),
        EndpointSpec(
            "archiveTodo",
            "Archives the todo and returns it, or null when it does not"
            " exist.",
            (("userId", STRING), ("todoId", STRING)),
            TODO,
        ),
        EndpointSpec(
            "fetchArchivedTodos",
            "Returns the user's archived todos.",
            (("userId", STRING),),
            TODO_LIST,
        ),
        EndpointSpec(
            "setTodoReminder",
            "Sets remindAt on the todo and returns it. The remindAt value"
            " must be in the format 'MM/DD/YY,HH:MM'; otherwise yields null.",
            (("userId", STRING), ("todoId", STRING), ("remindAt", STRING)),
            TODO,
        ),
        EndpointSpec(
            "fetchDueReminders",
            "Returns the user's todos whose remindAt is set and not after"
            " the given current time.",
            (("userId", STRING), ("currentTime", STRING)),
            TODO_LIST,
        ),
        EndpointSpec(
            "clearCompletedTodos",
            "Removes all of the user's todos whose status is 'done' and"
            " returns how many were removed.",
            (("userId", STRING),),
            NUMBER,
        ),
    )
    return ClientRequest(
        project_name="todo-service",
        project_description="Back-end for a ToDo widget: create, fetch,"
        " update, archive, remind, and clear todo items.",
        endpoints=endpoints,
        adts=(todo_adt,),
    )


CHECK_DATE_FORMAT = NewFunctionSpec(
    name="checkTodoDateFormat",
    description="Returns true when the text is a valid 'MM/DD/YY,HH:MM'"
    " timestamp and false otherwise.",
    params=(("dateText", STRING),),
    return_type=BOOLEAN,
)

CHECK_DATE_FORMAT_STUB = Stub.for_args("checkTodoDateFormat", [VALID_DATE], True)


def _when(args: list, value: Any) -> str:
    return f"when {canonicalize(args)} -> {canonicalize(value)}"


def _src(*lines: str) -> str:
    return "\n".join(lines) + "\n"


TODO_SOURCES: dict[str, str] = {
    "createTodo": _src(
        "# validate the due date before persisting",
        f"call checkTodoDateFormat {canonicalize([VALID_DATE])}",
        f"save todos t9 {canonicalize(T9)}",
        _when(["u1", "water plants", "balcony", VALID_DATE], T9),
        _when(["u1", "water plants", "balcony", INVALID_DATE], None),
        _when(["u2", "gym shoes", "size 42", "01/08/26,12:00"], T10),
        _when(["u1", "", "no title", VALID_DATE], None),
        "return null",
    ),
    "fetchTodo": _src(
        _when(["u1", "t1"], T1),
        _when(["u2", "t4"], T4),
        "return null",
    ),
    "fetchAllTodos": _src(
        _when(["u1"], [T1, T2, T3]),
        _when(["u2"], [T4]),
        "return []",
    ),
    "fetchTodosBasedOnStatus": _src(
        _when(["u1", "open"], [T1, T3]),
        _when(["u1", "done"], [T2]),
        _when(["u2", "open"], [T4]),
        _when(["u2", "done"], []),
        "return []",
    ),
    "updateTodo": _src(
        _when(["u1", "t1", T1_UPDATED], T1_UPDATED),
        _when(["u2", "t4", T4_UPDATED], T4_UPDATED),
        "return null",
    ),
    "deleteTodo": _src(
        "remove todos t1",
        _when(["u1", "t1"], True),
        _when(["u2", "t4"], True),
        "return false",
    ),
    "markTodoComplete": _src(
        _when(["u1", "t1"], T1_DONE),
        _when(["u2", "t4"], T4_DONE),
        "return null",
    ),
    "archiveTodo": _src(
        _when(["u1", "t1"], T1_ARCHIVED),
        "return null",
    ),
    "fetchArchivedTodos": _src(
        _when(["u1"], [T3]),
        _when(["u2"], []),
        "return []",
    ),
    "setTodoReminder": _src(
        f"call checkTodoDateFormat {canonicalize(['01/05/26,08:00'])}",
        _when(["u1", "t1", "01/05/26,08:00"], T1_REMINDED),
        _when(["u1", "t1", "bad-format"], None),
        "return null",
    ),
    "fetchDueReminders": _src(
        _when(["u1", "01/03/26,09:00"], [T2]),
        _when(["u2", "01/06/26,05:00"], []),
        "return []",
    ),
    "clearCompletedTodos": _src(
        "remove todos t2",
        _when(["u1"], 1),
        _when(["u2"], 0),
        "return 0",
    ),
    "checkTodoDateFormat": _src(
        _when(["01/05/26,09:00"], True),
        _when([VALID_DATE], True),
        _when(["01/05/26,08:00"], True),
        _when([INVALID_DATE], False),
        _when(["bad-format"], False),
        "return false",
    ),
}

# The four seeded defects. fetchTodosBasedOnStatus is missing its status
# conditional entirely (four checks observe it); the other three each break
# a single behavior.
TODO_DEFECTS: dict[str, str] = {
    "fetchTodosBasedOnStatus": _src(
        "# missing the user/status conditional",
        "return list todos",
    ),
    "markTodoComplete": _src(
        _when(["u1", "t1"], T1),  # status never flipped to done
        _when(["u2", "t4"], T4_DONE),
        "return null",
    ),
    "setTodoReminder": _src(
        f"call checkTodoDateFormat {canonicalize(['01/05/26,08:00'])}",
        _when(["u1", "t1", "01/05/26,08:00"], T1),  # remindAt never written
        _when(["u1", "t1", "bad-format"], None),
        "return null",
    ),
    "clearCompletedTodos": _src(
        _when(["u1"], 0),  # done todos never counted
        _when(["u2"], 0),
        "return 0",
    ),
}


def todo_sources(*, defective: bool = False) -> dict[str, str]:
    sources = dict(TODO_SOURCES)
    if defective:
        sources.update(TODO_DEFECTS)
    return sources


@dataclass(frozen=True)
class OracleCheck:
    """One behavior check: run the function on the standard seed and compare
    the output canonically."""

    id: str
    function_name: str
    inputs: tuple
    expected: Any
    description: str = ""

    def test_case(self) -> TestCase:
        return TestCase.io_pair(
            self.id, list(self.inputs), self.expected, description=self.description
        )


def _checks() -> tuple[OracleCheck, ...]:
    rows: list[tuple[str, list, Any, str]] = [
        ("createTodo", ["u1", "water plants", "balcony", VALID_DATE], T9,
         "creates and returns the todo"),
        ("createTodo", ["u1", "water plants", "balcony", INVALID_DATE], None,
         "rejects an invalid due date"),
        ("createTodo", ["u2", "gym shoes", "size 42", "01/08/26,12:00"], T10,
         "creates for a second user"),
        ("createTodo", ["u1", "", "no title", VALID_DATE], None,
         "rejects an empty title"),
        ("fetchTodo", ["u1", "t1"], T1, "fetches an existing todo"),
        ("fetchTodo", ["u1", "missing"], None, "null for a missing id"),
        ("fetchTodo", ["u2", "t4"], T4, "fetches another user's own todo"),
        ("fetchAllTodos", ["u1"], [T1, T2, T3], "lists all of u1's todos"),
        ("fetchAllTodos", ["u2"], [T4], "lists all of u2's todos"),
        ("fetchTodosBasedOnStatus", ["u1", "open"], [T1, T3], "open todos of u1"),
        ("fetchTodosBasedOnStatus", ["u1", "done"], [T2], "done todos of u1"),
        ("fetchTodosBasedOnStatus", ["u2", "open"], [T4], "open todos of u2"),
        ("fetchTodosBasedOnStatus", ["u2", "done"], [], "no done todos for u2"),
        ("updateTodo", ["u1", "t1", T1_UPDATED], T1_UPDATED, "updates an existing todo"),
        ("updateTodo", ["u1", "missing", T1_UPDATED], None, "null for a missing id"),
        ("updateTodo", ["u2", "t4", T4_UPDATED], T4_UPDATED, "updates another user's todo"),
        ("deleteTodo", ["u1", "t1"], True, "deletes an existing todo"),
        ("deleteTodo", ["u1", "missing"], False, "false for a missing id"),
        ("deleteTodo", ["u2", "t4"], True, "deletes for a second user"),
        ("markTodoComplete", ["u1", "t1"], T1_DONE, "marks the todo done"),
        ("markTodoComplete", ["u1", "missing"], None, "null for a missing id"),
        ("markTodoComplete", ["u2", "t4"], T4_DONE, "marks for a second user"),
        ("archiveTodo", ["u1", "t1"], T1_ARCHIVED, "archives the todo"),
        ("archiveTodo", ["u1", "missing"], None, "null for a missing id"),
        ("fetchArchivedTodos", ["u1"], [T3], "lists archived todos"),
        ("fetchArchivedTodos", ["u2"], [], "empty when none archived"),
        ("setTodoReminder", ["u1", "t1", "01/05/26,08:00"], T1_REMINDED,
         "stores the reminder"),
        ("setTodoReminder", ["u1", "missing", "01/05/26,08:00"], None,
         "null for a missing id"),
        ("setTodoReminder", ["u1", "t1", "bad-format"], None,
         "rejects a malformed reminder time"),
        ("fetchDueReminders", ["u1", "01/03/26,09:00"], [T2], "reminder already due"),
        ("fetchDueReminders", ["u2", "01/06/26,05:00"], [], "reminder not yet due"),
        ("clearCompletedTodos", ["u1"], 1, "removes done todos and counts them"),
        ("clearCompletedTodos", ["u2"], 0, "nothing to clear"),
        ("checkTodoDateFormat", ["01/05/26,09:00"], True, "accepts a valid timestamp"),
    ]
    return tuple(
        OracleCheck(
            id=f"oracle-{i + 1}",
            function_name=fn,
            inputs=tuple(inputs),
            expected=expected,
            description=description,
        )
        for i, (fn, inputs, expected, description) in enumerate(rows)
    )


TODO_ORACLE_CHECKS: tuple[OracleCheck, ...] = _checks()


def oracle_checks_for(function_name: str) -> tuple[OracleCheck, ...]:
    return tuple(c for c in TODO_ORACLE_CHECKS if c.function_name == function_name)
