"""In-memory keyed-document store exposed to authored code.

The five calls (save/get/update/remove/list) mirror what generated
microservice code gets from its persistence adapter. During test execution
every run owns a private store seeded from the bundle, so no state leaks
between tests.
"""

from __future__ import annotations

from typing import Any, Iterable

from .errors import CrowdFlowError


class MissingDocumentError(CrowdFlowError):
    """update() on an id that is not present."""

    code = "missing-document"


class DocumentStore:
    def __init__(self, seed: Iterable[tuple[str, str, Any]] = ()):
        self._collections: dict[str, dict[str, Any]] = {}
        for collection, doc_id, value in seed:
            self.save(collection, doc_id, value)

    @staticmethod
    def _check_key(collection: str, doc_id: str | None = None) -> None:
        if not isinstance(collection, str) or not collection:
            raise ValueError("collection must be a nonempty string")
        if doc_id is not None and (not isinstance(doc_id, str) or not doc_id):
            raise ValueError("id must be a nonempty string")

    def save(self, collection: str, doc_id: str, value: Any) -> Any:
        """Insert or overwrite; returns the stored value."""
        self._check_key(collection, doc_id)
        self._collections.setdefault(collection, {})[doc_id] = value
        return value

    def get(self, collection: str, doc_id: str) -> Any:
        """The stored value, or None when absent (see :meth:`has`)."""
        self._check_key(collection, doc_id)
        return self._collections.get(collection, {}).get(doc_id)

    def has(self, collection: str, doc_id: str) -> bool:
        self._check_key(collection, doc_id)
        return doc_id in self._collections.get(collection, {})

    def update(self, collection: str, doc_id: str, value: Any) -> Any:
        self._check_key(collection, doc_id)
        if not self.has(collection, doc_id):
            raise MissingDocumentError(f"no document {collection}/{doc_id}")
        self._collections[collection][doc_id] = value
        return value

    def remove(self, collection: str, doc_id: str) -> bool:
        self._check_key(collection, doc_id)
        bucket = self._collections.get(collection, {})
        if doc_id in bucket:
            del bucket[doc_id]
            return True
        return False

    def list(self, collection: str) -> list:
        """All values in the collection, in insertion order."""
        self._check_key(collection)
        return list(self._collections.get(collection, {}).values())

    def snapshot(self) -> list[dict]:
        """Seed-shaped dump: [{collection, id, value}] in insertion order."""
        dump = []
        for collection, bucket in self._collections.items():
            for doc_id, value in bucket.items():
                dump.append({"collection": collection, "id": doc_id, "value": value})
        return dump

    def reset(self, seed: Iterable[tuple[str, str, Any]] = ()) -> None:
        self._collections.clear()
        for collection, doc_id, value in seed:
            self.save(collection, doc_id, value)
