"""
Event-driven simulator for global, work-conserving, preemptive scheduling
with fixed job-level priorities on m identical processors
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

from src.engine.priorities import PriorityAssignment
from src.model.tasks import JobInstance

logger = logging.getLogger(__name__)


class EventKind(str, Enum):
    ARRIVAL = "ARRIVAL"
    COMPLETION = "COMPLETION"
    PREEMPTION = "PREEMPTION"
    IDLE_START = "IDLE-START"


@dataclass(frozen=True)
class Slice:
    """Job job_id runs on processor (1-based) during [start, end)"""

    start: int
    end: int
    processor: int
    job_id: str

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class TraceEvent:
    time: int
    kind: EventKind
    job_id: str = ""
    processor: Optional[int] = None


@dataclass
class ScheduleTrace:
    processors: int
    slices: List[Slice] = field(default_factory=list)
    completions: Dict[str, int] = field(default_factory=dict)
    events: List[TraceEvent] = field(default_factory=list)

    @property
    def makespan(self) -> int:
        return max(self.completions.values(), default=0)

    def executed(self, job_id: str) -> int:
        """Total processor time the job received in this trace"""
        return sum(s.length for s in self.slices if s.job_id == job_id)

    def slices_of(self, job_id: str) -> List[Slice]:
        return [s for s in self.slices if s.job_id == job_id]

    def job_ids(self) -> List[str]:
        seen = dict.fromkeys(s.job_id for s in self.slices)
        for job_id in self.completions:
            seen.setdefault(job_id)
        for ev in self.events:
            if ev.job_id:
                seen.setdefault(ev.job_id)
        return list(seen)


def simulate(
    jobs: Sequence[JobInstance],
    prio: PriorityAssignment,
    m: int,
    until: Optional[int] = None,
) -> ScheduleTrace:
    """
    Simulate a finite job set

    At every instant the running jobs are the min(m, #pending) highest
    priority pending jobs. The running set only changes at arrivals and
    completions, so time jumps from event to event. Completions at an
    instant are handled before arrivals at that instant.

    Args:
        jobs: Jobs to schedule (distinct ids, all ranked by prio)
        prio: Fixed priority order
        m: Number of processors
        until: Optional stop time; slices are clipped there and jobs still
            running or pending get no completion entry

    Returns:
        Trace with slices, completions and the event log
    """
    if m < 1:
        raise ValueError(f"processor count must be >= 1, got {m}")
    ids = [j.job_id for j in jobs]
    if len(set(ids)) != len(ids):
        raise ValueError("jobs must have distinct job ids")
    for job_id in ids:
        if job_id not in prio:
            raise ValueError(f"job {job_id!r} has no priority")

    trace = ScheduleTrace(processors=m)
    if not jobs:
        return trace

    arrivals = sorted(jobs, key=lambda j: (j.arrival, prio.rank(j.job_id)))
    remaining: Dict[str, int] = {}
    pending: List[str] = []
    running: Dict[int, str] = {}
    slice_start: Dict[int, int] = {}
    slices: List[Slice] = []

    def close(proc: int, now: int) -> None:
        start = slice_start.pop(proc)
        if now > start:
            slices.append(Slice(start, now, proc, running[proc]))

    idx = 0
    t = arrivals[0].arrival
    while True:
        busy_before = set(running)

        for proc in sorted(running):
            job_id = running[proc]
            if remaining[job_id] == 0:
                close(proc, t)
                del running[proc]
                pending.remove(job_id)
                trace.completions[job_id] = t
                trace.events.append(TraceEvent(t, EventKind.COMPLETION, job_id, proc))

        if until is not None and t >= until:
            break

        while idx < len(arrivals) and arrivals[idx].arrival <= t:
            job = arrivals[idx]
            idx += 1
            trace.events.append(TraceEvent(t, EventKind.ARRIVAL, job.job_id))
            if job.exec_req == 0:
                trace.completions[job.job_id] = t
                trace.events.append(TraceEvent(t, EventKind.COMPLETION, job.job_id))
            else:
                remaining[job.job_id] = job.exec_req
                pending.append(job.job_id)

        top = sorted(pending, key=prio.rank)[:m]
        chosen = set(top)
        for proc in sorted(running):
            job_id = running[proc]
            if job_id not in chosen:
                close(proc, t)
                del running[proc]
                trace.events.append(TraceEvent(t, EventKind.PREEMPTION, job_id, proc))

        on_cpu = set(running.values())
        free = [p for p in range(1, m + 1) if p not in running]
        newcomers = [j for j in top if j not in on_cpu]
        for job_id, proc in zip(newcomers, free):
            running[proc] = job_id
            slice_start[proc] = t

        for proc in sorted(busy_before - set(running)):
            trace.events.append(TraceEvent(t, EventKind.IDLE_START, "", proc))

        horizon = []
        if idx < len(arrivals):
            horizon.append(arrivals[idx].arrival)
        if running:
            horizon.append(t + min(remaining[j] for j in running.values()))
        if not horizon:
            break
        t_next = min(horizon)
        if until is not None:
            t_next = min(t_next, until)
        for job_id in running.values():
            remaining[job_id] -= t_next - t
        t = t_next

    for proc in sorted(running):
        close(proc, t)

    trace.slices = sorted(slices, key=lambda s: (s.start, s.processor))
    logger.debug(
        "simulated %d job(s) on %d processor(s): makespan %d, %d slice(s)",
        len(jobs), m, trace.makespan, len(trace.slices),
    )
    return trace
