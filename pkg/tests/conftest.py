from __future__ import annotations

import pytest

from gkforge.construction import build
from gkforge.schedule import Schedule


@pytest.fixture(scope="session")
def default_state():
    return build(Schedule(), 6)


@pytest.fixture(scope="session")
def scaled_state():
    return build(Schedule.scaled_default(onset=2, seed=0), 6)
