"""
Shared fixtures: bundled systems and small job sets
"""
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from src.documents.system_doc import parse_system  # noqa: E402
from src.model.tasks import Mode, MultiModeSystem, Policy, TaskSpec, TransitionSpec  # noqa: E402

DATA_DIR = os.path.join(ROOT, "data")


def data_path(*parts: str) -> str:
    return os.path.join(DATA_DIR, *parts)


@pytest.fixture
def two_cpu_path() -> str:
    return data_path("systems", "two_cpu_transition.json")


@pytest.fixture
def two_cpu_system(two_cpu_path) -> MultiModeSystem:
    return parse_system(two_cpu_path)


@pytest.fixture
def boundary_path() -> str:
    return data_path("systems", "boundary.json")


@pytest.fixture
def boundary_system(boundary_path) -> MultiModeSystem:
    return parse_system(boundary_path)


@pytest.fixture
def three_mode_system() -> MultiModeSystem:
    return parse_system(data_path("systems", "three_modes.json"))


@pytest.fixture
def tight_system() -> MultiModeSystem:
    """One processor pair whose only transition fails the condition (upms 8 > 7)"""
    old = Mode("old", (TaskSpec("a", 4, 12, 12), TaskSpec("b", 4, 12, 12), TaskSpec("c", 4, 12, 12)), Policy.DM)
    new = Mode("new", (TaskSpec("x", 2, 8, 10),), Policy.EDF)
    return MultiModeSystem(
        2,
        (old, new),
        (TransitionSpec("old", "new", ("a", "b", "c"), {"x": 7}),),
    )
