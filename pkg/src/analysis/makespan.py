"""
Upper bound on the makespan of jobs ready at time 0, valid for any fixed
job-level priority order under a global work-conserving scheduler
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from src.model.tasks import JobInstance, TransitionSpec


@dataclass(frozen=True)
class JobSetSummary:
    processing_times: Tuple[int, ...] = ()

    @classmethod
    def of(cls, times: Iterable[int]) -> "JobSetSummary":
        return cls(tuple(int(p) for p in times))

    @classmethod
    def from_jobs(cls, jobs: Sequence[JobInstance]) -> "JobSetSummary":
        return cls(tuple(j.exec_req for j in jobs))

    @property
    def n(self) -> int:
        return len(self.processing_times)

    @property
    def p_max(self) -> int:
        return max(self.processing_times, default=0)

    @property
    def total(self) -> int:
        return sum(self.processing_times)

    def scaled(self, factor: int) -> "JobSetSummary":
        return JobSetSummary(tuple(p * factor for p in self.processing_times))


def upms(jobset: JobSetSummary, m: int) -> Fraction:
    """
    Makespan upper bound on m identical processors

    p_max when m >= n, otherwise total/m + (1 - 1/m) * p_max. An empty set
    gives 0 and a single processor gives the total work.

    Args:
        jobset: Processing times of the jobs
        m: Processor count (>= 1)

    Returns:
        Exact bound as a Fraction
    """
    if m < 1:
        raise ValueError(f"processor count must be >= 1, got {m}")
    if jobset.n == 0:
        return Fraction(0)
    if m == 1:
        return Fraction(jobset.total)
    if m >= jobset.n:
        return Fraction(jobset.p_max)
    return Fraction(jobset.total, m) + (1 - Fraction(1, m)) * jobset.p_max


def min_enablement_deadline(spec: TransitionSpec) -> int:
    """Smallest enablement deadline of the to-mode tasks"""
    if not spec.enablement_deadlines:
        raise ValueError(
            f"transition {spec.from_mode} -> {spec.to_mode} has no enablement deadline"
        )
    return min(spec.enablement_deadlines.values())
