import math

import numpy as np
import pytest
from hypothesis import settings

from binarygrating import BinaryProfile, MediumPair, PlaneWaveIncidence

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def reference_binary():
    """Half-period lamellar grating used throughout the modal checks."""
    return BinaryProfile((0.0, math.pi), (0.0, 1.0)), MediumPair(1.0, 1.5), PlaneWaveIncidence(1.0, 0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
