"""Validation of client requests and of values against declared types.

Violations are returned, not raised: a :class:`ValidationResult` either is
``ok`` or carries human-readable violations naming the offending
endpoint/ADT/field. Only structurally impossible inputs (an unresolvable
type passed to :func:`validate_value`) raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import UnknownEntityError
from .model import Adt, ClientRequest, TypeRef, is_identifier


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def failure(cls, *violations: str) -> "ValidationResult":
        return cls(tuple(violations))


OK = ValidationResult()


def _resolves(type_ref: TypeRef, adt_names: set[str]) -> bool:
    return type_ref.is_primitive or type_ref.base in adt_names


def validate_client_request(request: ClientRequest) -> ValidationResult:
    """Check every structural invariant of a client request."""
    violations: list[str] = []
    adt_names: set[str] = set()

    for adt in request.adts:
        if not is_identifier(adt.name):
            violations.append(f"ADT name {adt.name!r} is not a valid identifier")
        if adt.name in adt_names:
            violations.append(f"ADT {adt.name!r} is defined more than once")
        adt_names.add(adt.name)

    for adt in request.adts:
        seen_fields: set[str] = set()
        for field_name, field_type in adt.fields:
            if not is_identifier(field_name):
                violations.append(
                    f"ADT {adt.name!r}: field name {field_name!r} is not a valid identifier"
                )
            if field_name in seen_fields:
                violations.append(f"ADT {adt.name!r}: duplicate field {field_name!r}")
            seen_fields.add(field_name)
            if not _resolves(field_type, adt_names):
                violations.append(
                    f"ADT {adt.name!r}: field {field_name!r} type {field_type.render()!r}"
                    " does not resolve"
                )

    violations.extend(_by_value_cycles(request.adts))

    if not request.endpoints:
        violations.append("at least one endpoint required")

    seen_endpoints: set[str] = set()
    for endpoint in request.endpoints:
        label = f"endpoint {endpoint.function_name!r}"
        if not is_identifier(endpoint.function_name):
            violations.append(f"{label}: name is not a valid identifier")
        if endpoint.function_name in seen_endpoints:
            violations.append(f"{label}: duplicate function name")
        seen_endpoints.add(endpoint.function_name)
        if not endpoint.description.strip():
            violations.append(f"{label}: description must be nonempty")
        seen_params: set[str] = set()
        for param_name, param_type in endpoint.params:
            if not is_identifier(param_name):
                violations.append(f"{label}: parameter name {param_name!r} is invalid")
            if param_name in seen_params:
                violations.append(f"{label}: duplicate parameter {param_name!r}")
            seen_params.add(param_name)
            if not _resolves(param_type, adt_names):
                violations.append(
                    f"{label}: parameter {param_name!r} type {param_type.render()!r}"
                    " does not resolve"
                )
        if endpoint.return_type is not None and not _resolves(endpoint.return_type, adt_names):
            violations.append(
                f"{label}: return type {endpoint.return_type.render()!r} does not resolve"
            )

    return ValidationResult(tuple(violations))


def _by_value_cycles(adts: tuple[Adt, ...]) -> list[str]:
    """Reject recursive ADT cycles with no list indirection.

    A field that nests its target inside a list bounds the recursion (an
    empty list terminates it), so only by-value edges participate.
    """
    by_name = {adt.name: adt for adt in adts}
    edges: dict[str, list[str]] = {
        adt.name: [
            t.base
            for _, t in adt.fields
            if t.list_depth == 0 and t.base in by_name
        ]
        for adt in adts
    }

    violations = []
    state: dict[str, int] = {}  # 0 = visiting, 1 = done

    def visit(name: str, trail: list[str]) -> None:
        if state.get(name) == 1:
            return
        if state.get(name) == 0:
            cycle = trail[trail.index(name):] + [name]
            violations.append(
                "ADT cycle without list indirection: " + " -> ".join(cycle)
            )
            return
        state[name] = 0
        for target in edges[name]:
            visit(target, trail + [name])
        state[name] = 1

    for name in edges:
        if state.get(name) != 1:
            visit(name, [])
    return violations


def validate_value(value: Any, type_ref: TypeRef, adts: dict[str, Adt],
                   path: str = "$") -> ValidationResult:
    """Structurally match ``value`` against ``type_ref``.

    ADTs require exactly the declared fields: none missing, none extra,
    each recursively valid. Raises :class:`UnknownEntityError` for a type
    that does not resolve in the registry.
    """
    if not type_ref.is_primitive and type_ref.base not in adts:
        raise UnknownEntityError(f"type {type_ref.render()!r} does not resolve")

    if type_ref.list_depth > 0:
        if not isinstance(value, list):
            return ValidationResult.failure(
                f"{path}: expected list of {type_ref.element().render()}, got {_describe(value)}"
            )
        violations: list[str] = []
        for i, item in enumerate(value):
            violations.extend(
                validate_value(item, type_ref.element(), adts, f"{path}[{i}]").violations
            )
        return ValidationResult(tuple(violations))

    base = type_ref.base
    if base == "string":
        if not isinstance(value, str):
            return ValidationResult.failure(f"{path}: expected string, got {_describe(value)}")
        return OK
    if base == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return ValidationResult.failure(f"{path}: expected number, got {_describe(value)}")
        return OK
    if base == "boolean":
        if not isinstance(value, bool):
            return ValidationResult.failure(f"{path}: expected boolean, got {_describe(value)}")
        return OK

    adt = adts[base]
    if not isinstance(value, dict):
        return ValidationResult.failure(f"{path}: expected {base} object, got {_describe(value)}")
    violations = []
    declared = adt.field_map()
    for field_name in declared:
        if field_name not in value:
            violations.append(f"{path}: missing field {field_name!r} of {base}")
    for field_name in value:
        if field_name not in declared:
            violations.append(f"{path}: unexpected field {field_name!r} for {base}")
    for field_name, field_type in declared.items():
        if field_name in value:
            violations.extend(
                validate_value(value[field_name], field_type, adts,
                               f"{path}.{field_name}").violations
            )
    return ValidationResult(tuple(violations))


def _describe(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "list"
    if isinstance(value, dict):
        return "object"
    return type(value).__name__
