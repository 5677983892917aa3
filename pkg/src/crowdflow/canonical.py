"""Canonical text form for structured values.

Every value that crosses a component boundary (stub argument tuples,
io-pair comparisons, event log records, the executor wire protocol) is
serialized with :func:`canonicalize` so that equality of values is exactly
equality of their text forms:

* object keys sorted lexicographically,
* no insignificant whitespace,
* numbers in shortest round-trip decimal form (``2.50`` renders as ``2.5``,
  integral floats render without a fractional part).

Values are JSON-shaped: ``None``, booleans, finite numbers, strings, lists,
and string-keyed objects. Integers outside the exactly-representable float
range (|n| > 2**53) keep their exact decimal digits; equal-valued int/float
pairs in that extreme range may therefore render differently, which is
outside the supported value domain.
"""

from __future__ import annotations

import json
import math
from typing import Any

# Largest integer magnitude a float can represent exactly.
_MAX_SAFE_INTEGER = 2**53


class CanonicalizationError(ValueError):
    """Raised for values that have no canonical form."""


def canonicalize(value: Any) -> str:
    """Render ``value`` in canonical text form."""
    return json.dumps(
        _normalize(value, "$"),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def parse_canonical(text: str) -> Any:
    """Parse a canonical (or plain JSON) text form back into a value."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CanonicalizationError(f"invalid canonical text: {exc}") from exc


def canonical_equal(a: Any, b: Any) -> bool:
    return canonicalize(a) == canonicalize(b)


def _normalize(value: Any, path: str) -> Any:
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise CanonicalizationError(f"{path}: non-finite number {value!r}")
        if value.is_integer() and abs(value) <= _MAX_SAFE_INTEGER:
            return int(value)
        return value
    if isinstance(value, (list, tuple)):
        return [_normalize(item, f"{path}[{i}]") for i, item in enumerate(value)]
    if isinstance(value, dict):
        normalized = {}
        for key, item in value.items():
            if not isinstance(key, str):
                raise CanonicalizationError(f"{path}: non-string object key {key!r}")
            normalized[key] = _normalize(item, f"{path}.{key}")
        return normalized
    raise CanonicalizationError(f"{path}: unsupported value type {type(value).__name__}")
