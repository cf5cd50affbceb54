"""Engine configuration: file-based with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "EASELWORKS_"


@dataclass
class EngineConfig:
    data_dir: str = "./engine-data"
    backend_mode: str = "mock"  # mock | remote
    backend_url: str = "http://127.0.0.1:8188"
    client_id: str = "easelworks"
    max_inflight: int = 1
    trail_bucket_s: float = 60.0
    snapshot_every: int = 200
    fsync: bool = True
    mock_tick_delay: float = 0.0

    @classmethod
    def load(cls, path: str | Path | None = None) -> "EngineConfig":
        values: dict = {}
        if path:
            values.update(json.loads(Path(path).read_text()))
        cfg = cls(**{k: v for k, v in values.items() if k in {f.name for f in fields(cls)}})
        cfg.apply_env()
        return cfg

    def apply_env(self) -> None:
        for f in fields(self):
            raw = os.environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            if f.type in ("int", int):
                setattr(self, f.name, int(raw))
            elif f.type in ("float", float):
                setattr(self, f.name, float(raw))
            elif f.type in ("bool", bool):
                setattr(self, f.name, raw.lower() in ("1", "true", "yes"))
            else:
                setattr(self, f.name, raw)
