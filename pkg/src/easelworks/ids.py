"""Id and clock providers.

Mutations record the ids and timestamps they were created with, so journal
replay never re-invokes these. Tests inject deterministic providers.
"""

import time
import uuid
from typing import Callable

IdGen = Callable[[], str]
Clock = Callable[[], float]


def uuid_gen() -> str:
    return uuid.uuid4().hex


def wall_clock() -> float:
    return time.time()


class SequentialIds:
    """Deterministic ids for tests and fixture generation."""

    def __init__(self, prefix: str = "id"):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> str:
        self.n += 1
        return f"{self.prefix}{self.n:06d}"


class TickingClock:
    """Monotonic fake clock advancing a fixed step per call."""

    def __init__(self, start: float = 1_700_000_000.0, step: float = 1.0):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        t = self.now
        self.now += self.step
        return t
