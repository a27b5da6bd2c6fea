from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cacaug.cactus import make_instance, validate_cactus  # noqa: E402


def inst(n, cycles, links=(), root=0):
    return make_instance(validate_cactus(n, cycles), links, root)


@pytest.fixture
def two_cycle():
    return inst(2, [[0, 1]], [(0, 1)])


@pytest.fixture
def triangle():
    return inst(3, [[0, 1, 2]], [(0, 1), (0, 2), (1, 2)])
