"""
Fixed job-level priority assignment (EDF, DM, FIFO)
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from src.model.tasks import JobInstance, Policy

_INF = float("inf")


@dataclass(frozen=True)
class PriorityAssignment:
    """Strict total order over job ids; rank 0 is the highest priority"""

    order: Tuple[str, ...]
    _rank: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rank = {job_id: idx for idx, job_id in enumerate(self.order)}
        if len(rank) != len(self.order):
            raise ValueError("priority order repeats a job id")
        object.__setattr__(self, "_rank", rank)

    @classmethod
    def from_order(cls, job_ids: Iterable[str]) -> "PriorityAssignment":
        return cls(tuple(job_ids))

    def rank(self, job_id: str) -> int:
        return self._rank[job_id]

    def __contains__(self, job_id: str) -> bool:
        return job_id in self._rank

    def higher(self, a: str, b: str) -> bool:
        """True if job a has strictly higher priority than job b"""
        return self._rank[a] < self._rank[b]

    def restrict(self, job_ids: Iterable[str]) -> "PriorityAssignment":
        """Same relative order over a subset of jobs"""
        keep = set(job_ids)
        return PriorityAssignment(tuple(j for j in self.order if j in keep))


def _policy_key(policy: Policy, job: JobInstance) -> Tuple:
    if policy is Policy.EDF:
        primary = job.abs_deadline if job.abs_deadline is not None else _INF
    elif policy is Policy.DM:
        primary = job.rel_deadline if job.rel_deadline is not None else _INF
    elif policy is Policy.FIFO:
        primary = job.arrival
    else:
        raise ValueError(f"unsupported policy {policy!r}")
    return (primary,) + job.tie_key


def assign_priorities(policy: Policy, jobs: Sequence[JobInstance]) -> PriorityAssignment:
    """
    Order jobs by a fixed job-level priority policy

    Args:
        policy: EDF (absolute deadline), DM (relative deadline of the task)
            or FIFO (arrival)
        jobs: Jobs with distinct ids

    Returns:
        Priority assignment, ties broken by (mode index, task index, job index)
    """
    ids = [j.job_id for j in jobs]
    if len(set(ids)) != len(ids):
        raise ValueError("jobs must have distinct job ids")
    policy = Policy(policy)
    ranked: List[JobInstance] = sorted(jobs, key=lambda j: _policy_key(policy, j))
    return PriorityAssignment(tuple(j.job_id for j in ranked))
