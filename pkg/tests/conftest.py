import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from corpus import build_corpus  # noqa: E402

from easelworks.config import EngineConfig
from easelworks.engine import Engine
from easelworks.ids import SequentialIds, TickingClock

GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"
FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def corpus(tmp_path):
    return build_corpus(tmp_path / "blobs")


@pytest.fixture
def engine(tmp_path):
    cfg = EngineConfig(data_dir=str(tmp_path / "data"), fsync=False, snapshot_every=10_000)
    eng = Engine(cfg, rng=random.Random(99))
    yield eng
    eng.close()


@pytest.fixture
def det_engine(tmp_path):
    """Engine with sequential ids and a fake clock for deterministic state."""
    cfg = EngineConfig(data_dir=str(tmp_path / "data"), fsync=False, snapshot_every=10_000)
    eng = Engine(cfg, idgen=SequentialIds("d"), clock=TickingClock(step=3.0), rng=random.Random(7))
    yield eng
    eng.close()


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR
