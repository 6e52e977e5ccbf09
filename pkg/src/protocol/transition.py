"""
Synchronous mode transition: abort tau^i minus C(i,j), let the rem-jobs
finish under the old-mode scheduler, then enable every new-mode task at once
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from src.engine.checks import DeadlineReport, check_trace_deadlines, verify_trace_wellformed
from src.engine.priorities import PriorityAssignment, assign_priorities
from src.engine.simulator import ScheduleTrace, simulate
from src.errors import InvariantBreachError, NotCompletableTaskError, ProtocolError
from src.model.tasks import JobInstance, MultiModeSystem, TransitionSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnablementVerdict:
    task: str
    deadline: int
    enabled_at: int
    met: bool


@dataclass
class TransitionTrace:
    from_mode: str
    to_mode: str
    t_mcr: int
    rem_jobs: List[JobInstance]
    rem_schedule: ScheduleTrace
    t_enable: int
    enablement_report: List[EnablementVerdict]
    remjob_deadline_report: DeadlineReport
    aborted_jobs: List[str] = field(default_factory=list)

    @property
    def delay(self) -> int:
        return self.t_enable - self.t_mcr

    @property
    def enablement_met(self) -> bool:
        return all(v.met for v in self.enablement_report)

    @property
    def all_met(self) -> bool:
        return self.enablement_met and self.remjob_deadline_report.all_met


def abort_and_collect(
    active_jobs: Sequence[JobInstance],
    spec: TransitionSpec,
) -> Tuple[List[JobInstance], List[JobInstance]]:
    """
    Split the incomplete old-mode jobs at an MCR

    Jobs of tasks outside C(i,j) are aborted. For each task of C(i,j) the
    last released incomplete job becomes a rem-job (remaining exec_req,
    deadline and ordering fields untouched); older incomplete jobs of the
    same task are aborted. A C(i,j) task with no incomplete job contributes
    nothing. Jobs with no remaining work are ignored.

    Args:
        active_jobs: Incomplete jobs, exec_req holding the remaining work
        spec: Transition being taken

    Returns:
        (aborted, rem_jobs), both in input order
    """
    keep = set(spec.complete_set)
    live = [j for j in active_jobs if j.exec_req > 0]
    last: Dict[str, JobInstance] = {}
    for job in live:
        if job.task in keep:
            best = last.get(job.task)
            if best is None or (job.arrival, job.job_index) > (best.arrival, best.job_index):
                last[job.task] = job
    rem_ids = {j.job_id for j in last.values()}
    aborted = [j for j in live if j.job_id not in rem_ids]
    remjobs = [j for j in live if j.job_id in rem_ids]
    return aborted, remjobs


def run_transition(
    sys: MultiModeSystem,
    from_mode: str,
    to_mode: str,
    remjobs: Sequence[JobInstance],
    t_mcr: int,
    prio: Optional[PriorityAssignment] = None,
    verify: bool = True,
) -> TransitionTrace:
    """
    Execute one transition from the MCR to the enablement of the new mode

    Args:
        sys: The multi-mode system
        from_mode: Mode running when the MCR was released
        to_mode: Target mode of the MCR
        remjobs: Rem-jobs (released at or before t_mcr, exec_req = remaining)
        t_mcr: Release time of the MCR
        prio: Priorities fixed at release; derived from the old-mode policy
            when omitted
        verify: Audit the rem-job schedule for well-formedness

    Returns:
        Transition trace with enablement and rem-job deadline verdicts
    """
    spec = sys.transition(from_mode, to_mode)
    keep = set(spec.complete_set)
    seen = set()
    for job in remjobs:
        if job.task not in keep:
            raise NotCompletableTaskError(job.task, from_mode, to_mode)
        if job.task in seen:
            raise ProtocolError(f"task {job.task!r} has more than one rem-job")
        seen.add(job.task)
        if job.arrival > t_mcr:
            raise ProtocolError(f"rem-job {job.job_id} released at {job.arrival}, after the MCR at {t_mcr}")

    if prio is None:
        prio = assign_priorities(sys.mode(from_mode).policy, remjobs)
    else:
        prio = prio.restrict(j.job_id for j in remjobs)

    ready = [replace(j, arrival=t_mcr) for j in remjobs]
    trace = simulate(ready, prio, sys.processors)
    if verify:
        violations = verify_trace_wellformed(trace, ready, prio, sys.processors)
        if violations:
            raise InvariantBreachError(violations)

    t_enable = max(trace.completions.values(), default=t_mcr)
    enablement = []
    for task in sys.mode(to_mode).tasks:
        deadline = t_mcr + spec.enablement_deadlines[task.name]
        enablement.append(EnablementVerdict(task.name, deadline, t_enable, t_enable <= deadline))

    result = TransitionTrace(
        from_mode=from_mode,
        to_mode=to_mode,
        t_mcr=t_mcr,
        rem_jobs=list(remjobs),
        rem_schedule=trace,
        t_enable=t_enable,
        enablement_report=enablement,
        remjob_deadline_report=check_trace_deadlines(trace, remjobs),
    )
    logger.info(
        "transition %s -> %s: MCR at %d, %d rem-job(s), enabled at %d",
        from_mode, to_mode, t_mcr, len(remjobs), t_enable,
    )
    return result
