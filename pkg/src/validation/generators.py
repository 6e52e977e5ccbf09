"""
Seeded random multi-mode systems whose declared transitions satisfy the
upms condition
"""
import math
from typing import List, Optional, Tuple

import numpy as np

from src.analysis.makespan import JobSetSummary, upms
from src.model.tasks import Mode, MultiModeSystem, Policy, TaskSpec, TransitionSpec

POLICIES = (Policy.EDF, Policy.DM, Policy.FIFO)


def _random_mode(
    rng: np.random.Generator,
    name: str,
    m: int,
    tasks_range: Tuple[int, int],
    wcet_range: Tuple[int, int],
    utilization: float,
) -> Mode:
    n = int(rng.integers(tasks_range[0], tasks_range[1] + 1))
    per_task = utilization * m / n
    tasks: List[TaskSpec] = []
    for k in range(n):
        wcet = int(rng.integers(wcet_range[0], wcet_range[1] + 1))
        period = max(wcet, math.ceil(wcet / per_task)) + int(rng.integers(0, 5))
        deadline = int(rng.integers((wcet + period + 1) // 2, period + 1))
        tasks.append(TaskSpec(f"{name}{k + 1}", wcet, max(deadline, wcet), period))
    policy = POLICIES[int(rng.integers(0, len(POLICIES)))]
    return Mode(name, tuple(tasks), policy)


def generate_system(
    rng: np.random.Generator,
    processors: Optional[int] = None,
    n_modes: int = 2,
    tasks_range: Tuple[int, int] = (2, 5),
    wcet_range: Tuple[int, int] = (1, 8),
    utilization: float = 0.4,
    max_slack: int = 3,
    keep_probability: float = 0.6,
) -> MultiModeSystem:
    """
    Random system with a transition declared for every ordered mode pair

    Each transition keeps every old-mode task in C(i,j) with probability
    keep_probability, and every enablement deadline is ceil(upms) plus a
    slack in [0, max_slack], so the condition holds for every pair (slack 0
    lands exactly on the boundary when upms is an integer).

    Args:
        rng: Random generator
        processors: Processor count, drawn in [2, 4] when omitted
        n_modes: Number of modes
        tasks_range: Inclusive range for tasks per mode
        wcet_range: Inclusive range for task WCETs
        utilization: Target per-processor utilization of each mode
        max_slack: Largest extra enablement slack
        keep_probability: Chance that a task must complete across a transition
    """
    m = int(rng.integers(2, 5)) if processors is None else processors
    names = [chr(ord("A") + i) for i in range(n_modes)]
    modes = [_random_mode(rng, name, m, tasks_range, wcet_range, utilization) for name in names]

    transitions = []
    for src in modes:
        for dst in modes:
            if src is dst:
                continue
            keep = tuple(t.name for t in src.tasks if rng.random() < keep_probability)
            wcets = [src.task(name).wcet for name in keep]
            floor = math.ceil(upms(JobSetSummary.of(wcets), m))
            deadlines = {t.name: floor + int(rng.integers(0, max_slack + 1)) for t in dst.tasks}
            transitions.append(TransitionSpec(src.name, dst.name, keep, deadlines))
    return MultiModeSystem(m, tuple(modes), tuple(transitions))
