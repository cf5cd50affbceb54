"""Canonical JSON encoding.

Workflow graphs, journal records and golden files are compared by byte
equality, so there is exactly one way to serialize them: UTF-8, sorted keys,
no whitespace, floats rendered by Python's shortest-repr (stable across runs
and platforms for IEEE-754 doubles). NaN/Inf are rejected.
"""

import hashlib
import json
from typing import Any


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest(obj: Any) -> str:
    """Content hash of an object's canonical form."""
    return sha256_hex(canonical_bytes(obj))
