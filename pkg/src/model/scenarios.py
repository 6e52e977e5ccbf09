"""
Arrival scenarios and worst-case rem-job construction
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.model.checks import Violation
from src.model.tasks import JobInstance, Mode, MultiModeSystem, job_id_for

logger = logging.getLogger(__name__)

Arrival = Tuple[int, int]


@dataclass(frozen=True)
class ArrivalScenario:
    """
    Per-task (arrival, exec_req) pairs, times relative to the mode start

    Only arrivals strictly before the horizon are meaningful.
    """

    horizon: int
    arrivals: Dict[str, Tuple[Arrival, ...]] = field(default_factory=dict)

    def separation_violations(self, mode: Mode) -> List[Violation]:
        """Check sporadic separation and exec_req bounds against a mode"""
        out: List[Violation] = []
        by_name = {t.name: t for t in mode.tasks}
        for name, pairs in self.arrivals.items():
            path = f"$.arrivals.{name}"
            task = by_name.get(name)
            if task is None:
                out.append(Violation(path, "task exists", f"mode {mode.name!r} has no task {name!r}"))
                continue
            prev: Optional[int] = None
            for k, (t, c) in enumerate(pairs):
                if t < 0:
                    out.append(Violation(f"{path}[{k}]", "arrival >= 0", f"arrival {t}"))
                if c < 0 or c > task.wcet:
                    out.append(Violation(f"{path}[{k}]", "0 <= exec_req <= C", f"exec_req {c} with wcet {task.wcet}"))
                if prev is not None and t < prev + task.min_interarrival:
                    out.append(Violation(f"{path}[{k}]", "separation >= T", f"arrival {t} follows {prev} with T={task.min_interarrival}"))
                prev = t
        return out

    def to_jobs(
        self,
        mode: Mode,
        mode_index: int = 0,
        offset: int = 0,
        until: Optional[int] = None,
        first_index: Optional[Dict[str, int]] = None,
    ) -> List[JobInstance]:
        """
        Materialize the scenario as jobs

        Args:
            mode: Mode whose tasks generate the jobs
            mode_index: Index of the mode in its system (priority tie-break)
            offset: Absolute time of the mode start
            until: Drop arrivals at or after this absolute time
            first_index: Per-task index of the first job (defaults to 1)

        Returns:
            Jobs ordered by task declaration, then by arrival
        """
        jobs: List[JobInstance] = []
        for k, task in enumerate(mode.tasks):
            j = (first_index or {}).get(task.name, 1)
            for t, c in self.arrivals.get(task.name, ()):
                if t >= self.horizon:
                    continue
                arrival = offset + t
                if until is not None and arrival >= until:
                    continue
                jobs.append(JobInstance(
                    job_id=job_id_for(mode.name, task.name, j),
                    arrival=arrival,
                    exec_req=c,
                    abs_deadline=arrival + task.deadline,
                    task=task.name,
                    mode_index=mode_index,
                    task_index=k,
                    job_index=j,
                    rel_deadline=task.deadline,
                ))
                j += 1
        return jobs


def periodic_scenario(mode: Mode, horizon: int) -> ArrivalScenario:
    """Arrivals at 0, T, 2T, ... below the horizon, each with exec_req = wcet"""
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    arrivals = {
        task.name: tuple((t, task.wcet) for t in range(0, horizon, task.min_interarrival))
        for task in mode.tasks
    }
    return ArrivalScenario(horizon=horizon, arrivals=arrivals)


def sporadic_scenario(
    mode: Mode,
    horizon: int,
    rng: np.random.Generator,
    jitter: int = 0,
    shrink_probability: float = 0.0,
) -> ArrivalScenario:
    """
    Random sporadic arrivals

    Each inter-arrival gap is T plus a uniform extra delay in [0, jitter]
    (the first arrival is delayed the same way), and each job's exec_req
    is drawn in [0, wcet] with probability shrink_probability, else wcet.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    arrivals = {}
    for task in mode.tasks:
        pairs = []
        t = int(rng.integers(0, jitter + 1))
        while t < horizon:
            c = task.wcet
            if shrink_probability > 0 and rng.random() < shrink_probability:
                c = int(rng.integers(0, task.wcet + 1))
            pairs.append((t, c))
            t += task.min_interarrival + int(rng.integers(0, jitter + 1))
        arrivals[task.name] = tuple(pairs)
    return ArrivalScenario(horizon=horizon, arrivals=arrivals)


def build_worst_case_remjobs(sys: MultiModeSystem, from_mode: str, to_mode: str) -> List[JobInstance]:
    """
    Worst-case rem-jobs of a transition

    Every task of C(from, to) releases a job exactly at the MCR (time 0
    here) with exec_req equal to its wcet; deadlines are relative to the MCR.

    Raises:
        UnknownTransitionError: If (from, to) is not declared
    """
    tasks = sys.completable_tasks(from_mode, to_mode)
    mode = sys.mode(from_mode)
    mode_index = sys.mode_index(from_mode)
    jobs = [
        JobInstance(
            job_id=job_id_for(from_mode, task.name, "rem"),
            arrival=0,
            exec_req=task.wcet,
            abs_deadline=task.deadline,
            task=task.name,
            mode_index=mode_index,
            task_index=mode.task_index(task.name),
            job_index=0,
            rel_deadline=task.deadline,
        )
        for task in tasks
    ]
    logger.debug("worst-case rem-jobs %s -> %s: %d job(s)", from_mode, to_mode, len(jobs))
    return jobs
