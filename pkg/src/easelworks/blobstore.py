"""Content-addressed blob store.

Payloads are stored once per distinct content, named by sha256 with a
two-level directory fan-out (`ab/cd/abcd...`). Writes are idempotent, so
concurrent writers of the same payload are safe: both land on the same
final path via an atomic rename.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from .errors import NotFoundError


def blob_hash(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


class BlobStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        return self.root / digest[:2] / digest[2:4] / digest

    def put(self, payload: bytes) -> str:
        """Store payload, return its hash. No-op if already present."""
        digest = blob_hash(payload)
        path = self._path(digest)
        if path.exists():
            return digest
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return digest

    def get(self, digest: str) -> bytes:
        path = self._path(digest)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise NotFoundError(f"blob {digest} not found") from None

    def has(self, digest: str) -> bool:
        return self._path(digest).exists()

    def path(self, digest: str) -> Path:
        return self._path(digest)
