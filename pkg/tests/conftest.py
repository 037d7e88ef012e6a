import json
import random

import pytest

from unitutte_core.config import settings
from unitutte_core.matroid import COLOOP, EMPTY, LOOP, U12, RankTable, matroid_classes


@pytest.fixture
def rng():
    return random.Random(settings.seed)


@pytest.fixture
def matroid_zoo() -> list[RankTable]:
    """Every matroid class on at most three elements plus a few named ones."""
    zoo = [m for k in range(4) for m in matroid_classes(k)]
    return zoo + [EMPTY, COLOOP, LOOP, U12, RankTable.uniform(2, 4)]


@pytest.fixture
def write_doc(tmp_path):
    def write(doc: dict, name: str = "input.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write
