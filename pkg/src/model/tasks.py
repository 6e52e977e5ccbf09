"""
Sporadic tasks, modes, transitions and jobs of a multi-mode real-time system

Times are integer ticks throughout.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from src.errors import ModeChangeError, UnknownTransitionError


class Policy(str, Enum):
    """Fixed job-level priority scheduling policies"""

    EDF = "edf"
    DM = "dm"
    FIFO = "fifo"


@dataclass(frozen=True)
class TaskSpec:
    """Sporadic task (C, D, T) of one mode"""

    name: str
    wcet: int
    deadline: int
    min_interarrival: int


@dataclass(frozen=True)
class Mode:
    name: str
    tasks: Tuple[TaskSpec, ...]
    policy: Policy = Policy.EDF

    @property
    def task_names(self) -> List[str]:
        return [t.name for t in self.tasks]

    def task(self, name: str) -> TaskSpec:
        for t in self.tasks:
            if t.name == name:
                return t
        raise ModeChangeError(f"mode {self.name!r} has no task {name!r}")

    def task_index(self, name: str) -> int:
        for idx, t in enumerate(self.tasks):
            if t.name == name:
                return idx
        raise ModeChangeError(f"mode {self.name!r} has no task {name!r}")


@dataclass(frozen=True)
class TransitionSpec:
    """
    Transition data for MCR(to_mode) issued while running from_mode

    complete_set is C(i,j): the from-mode tasks whose last released job must
    complete. enablement_deadlines maps each to-mode task to its enablement
    deadline, relative to the MCR.
    """

    from_mode: str
    to_mode: str
    complete_set: Tuple[str, ...] = ()
    enablement_deadlines: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class MultiModeSystem:
    processors: int
    modes: Tuple[Mode, ...]
    transitions: Tuple[TransitionSpec, ...] = ()

    @property
    def mode_names(self) -> List[str]:
        return [m.name for m in self.modes]

    def mode(self, name: str) -> Mode:
        for m in self.modes:
            if m.name == name:
                return m
        raise ModeChangeError(f"unknown mode {name!r}")

    def mode_index(self, name: str) -> int:
        for idx, m in enumerate(self.modes):
            if m.name == name:
                return idx
        raise ModeChangeError(f"unknown mode {name!r}")

    def transition(self, from_mode: str, to_mode: str) -> TransitionSpec:
        for spec in self.transitions:
            if spec.from_mode == from_mode and spec.to_mode == to_mode:
                return spec
        raise UnknownTransitionError(from_mode, to_mode)

    def completable_tasks(self, from_mode: str, to_mode: str) -> List[TaskSpec]:
        """Tasks of C(from, to) in from-mode declaration order"""
        spec = self.transition(from_mode, to_mode)
        keep = set(spec.complete_set)
        return [t for t in self.mode(from_mode).tasks if t.name in keep]


@dataclass(frozen=True)
class JobInstance:
    """
    A released job

    The index fields feed the deterministic priority tie-break
    (mode index, task index, job index). rel_deadline is the relative
    deadline of the generating task, used by deadline-monotonic ordering.
    """

    job_id: str
    arrival: int
    exec_req: int
    abs_deadline: Optional[int]
    task: str = ""
    mode_index: int = 0
    task_index: int = 0
    job_index: int = 0
    rel_deadline: Optional[int] = None

    def with_exec_req(self, exec_req: int) -> "JobInstance":
        return replace(self, exec_req=exec_req)

    @property
    def tie_key(self) -> Tuple[int, int, int, str]:
        return (self.mode_index, self.task_index, self.job_index, self.job_id)


@dataclass(frozen=True)
class MCREvent:
    time: int
    target_mode: str


def job_id_for(mode: str, task: str, index) -> str:
    return f"{mode}.{task}.{index}"
