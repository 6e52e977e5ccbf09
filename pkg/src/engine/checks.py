"""
Deadline verdicts and well-formedness checks for schedule traces
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from src.engine.priorities import PriorityAssignment
from src.engine.simulator import ScheduleTrace
from src.errors import UnknownJobError
from src.model.checks import Violation
from src.model.tasks import JobInstance


@dataclass(frozen=True)
class JobVerdict:
    job_id: str
    abs_deadline: int
    completion: Optional[int]
    met: bool


@dataclass
class DeadlineReport:
    verdicts: List[JobVerdict] = field(default_factory=list)

    @property
    def all_met(self) -> bool:
        return all(v.met for v in self.verdicts)

    @property
    def missed(self) -> List[JobVerdict]:
        return [v for v in self.verdicts if not v.met]

    def excluding(self, job_ids: Iterable[str]) -> "DeadlineReport":
        drop = set(job_ids)
        return DeadlineReport([v for v in self.verdicts if v.job_id not in drop])

    def merged(self, other: "DeadlineReport") -> "DeadlineReport":
        return DeadlineReport(self.verdicts + other.verdicts)


def check_trace_deadlines(trace: ScheduleTrace, jobs: Sequence[JobInstance]) -> DeadlineReport:
    """
    Compare completions against absolute deadlines (completion <= deadline is met)

    Jobs without a deadline are skipped; a job that never completed misses.

    Raises:
        UnknownJobError: If the trace mentions a job absent from jobs
    """
    known = {j.job_id for j in jobs}
    for job_id in trace.job_ids():
        if job_id not in known:
            raise UnknownJobError(job_id)

    report = DeadlineReport()
    for job in jobs:
        if job.abs_deadline is None:
            continue
        done = trace.completions.get(job.job_id)
        met = done is not None and done <= job.abs_deadline
        report.verdicts.append(JobVerdict(job.job_id, job.abs_deadline, done, met))
    return report


def verify_trace_wellformed(
    trace: ScheduleTrace,
    jobs: Sequence[JobInstance],
    prio: PriorityAssignment,
    m: int,
) -> List[Violation]:
    """
    Audit a trace against the scheduling model

    Checks (a) no overlap on a processor, (b) no job on two processors at
    once, (c) no processor idles while a pending job waits, (d) no running
    job has lower priority than a waiting one, plus work accounting
    (slices within [arrival, completion], executed time = exec_req).

    Returns:
        Violations, empty when the trace is well-formed
    """
    out: List[Violation] = []
    by_id: Dict[str, JobInstance] = {j.job_id: j for j in jobs}

    per_cpu = defaultdict(list)
    per_job = defaultdict(list)
    for s in trace.slices:
        if s.job_id not in by_id:
            out.append(Violation(f"trace.job[{s.job_id}]", "known job", "slice for a job outside the job set"))
            continue
        if not 1 <= s.processor <= m:
            out.append(Violation(f"trace.cpu[{s.processor}]", "(a) no overlap", f"processor index outside 1..{m}"))
        if s.end <= s.start:
            out.append(Violation(f"trace.cpu[{s.processor}]", "(a) no overlap", f"empty or reversed slice [{s.start},{s.end})"))
        per_cpu[s.processor].append(s)
        per_job[s.job_id].append(s)

    for cpu, slices in sorted(per_cpu.items()):
        slices.sort(key=lambda s: s.start)
        for prev, cur in zip(slices, slices[1:]):
            if cur.start < prev.end:
                out.append(Violation(f"trace.cpu[{cpu}]", "(a) no overlap", f"{prev.job_id} and {cur.job_id} overlap at {cur.start}"))

    for job_id, slices in sorted(per_job.items()):
        slices.sort(key=lambda s: s.start)
        for prev, cur in zip(slices, slices[1:]):
            if cur.start < prev.end:
                out.append(Violation(f"trace.job[{job_id}]", "(b) no parallelism", f"runs on P{prev.processor} and P{cur.processor} at {cur.start}"))

    for job_id, job in by_id.items():
        slices = per_job.get(job_id, [])
        done = trace.completions.get(job_id)
        if slices and min(s.start for s in slices) < job.arrival:
            out.append(Violation(f"trace.job[{job_id}]", "work accounting", "runs before its arrival"))
        if done is not None:
            if slices and max(s.end for s in slices) > done:
                out.append(Violation(f"trace.job[{job_id}]", "work accounting", "runs after its completion"))
            executed = sum(s.length for s in slices)
            if executed != job.exec_req:
                out.append(Violation(f"trace.job[{job_id}]", "work accounting", f"executed {executed} but requires {job.exec_req}"))

    points = set()
    for s in trace.slices:
        points.update((s.start, s.end))
    for job in jobs:
        points.add(job.arrival)
    points.update(trace.completions.values())
    instants = sorted(points)

    by_start = sorted((s for s in trace.slices if s.job_id in by_id), key=lambda s: s.start)
    by_arrival = sorted((j for j in jobs if j.exec_req > 0), key=lambda j: j.arrival)
    covering: List = []
    live: List[JobInstance] = []
    s_ptr = j_ptr = 0
    for a in instants[:-1]:
        while s_ptr < len(by_start) and by_start[s_ptr].start <= a:
            covering.append(by_start[s_ptr])
            s_ptr += 1
        covering = [s for s in covering if s.end > a]
        while j_ptr < len(by_arrival) and by_arrival[j_ptr].arrival <= a:
            live.append(by_arrival[j_ptr])
            j_ptr += 1
        live = [
            j for j in live
            if trace.completions.get(j.job_id) is None or trace.completions[j.job_id] > a
        ]
        running = {s.job_id for s in covering}
        waiting = [j.job_id for j in live if j.job_id not in running]
        if not waiting:
            continue
        if len(covering) < m:
            out.append(Violation(f"trace@{a}", "(c) work-conserving", f"{m - len(covering)} idle processor(s) while {sorted(waiting)} wait"))
        ranked = [j for j in running if j in prio]
        ranked_waiting = [j for j in waiting if j in prio]
        if ranked and ranked_waiting:
            best_waiting = min(ranked_waiting, key=prio.rank)
            worst_running = max(ranked, key=prio.rank)
            if prio.higher(best_waiting, worst_running):
                out.append(Violation(f"trace@{a}", "(d) priority rule", f"{worst_running} runs while higher-priority {best_waiting} waits"))
    return out
