"""
Full multi-mode runs: steady phases interleaved with synchronous transitions
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence

from src.engine.checks import DeadlineReport, check_trace_deadlines, verify_trace_wellformed
from src.engine.priorities import assign_priorities
from src.engine.simulator import EventKind, ScheduleTrace, simulate
from src.errors import InvalidSystemError, InvariantBreachError, ModeChangeError, ProtocolError
from src.model.checks import validate_system
from src.model.scenarios import ArrivalScenario
from src.model.tasks import JobInstance, MCREvent, MultiModeSystem
from src.protocol.phases import PhaseMachine
from src.protocol.transition import TransitionTrace, abort_and_collect, run_transition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhaseRecord:
    kind: str
    mode: str
    start: int
    end: int
    to_mode: str = ""


@dataclass
class FullRunTrace:
    processors: int
    phases: List[PhaseRecord] = field(default_factory=list)
    traces: List[ScheduleTrace] = field(default_factory=list)
    mcrs: List[MCREvent] = field(default_factory=list)
    transitions: List[TransitionTrace] = field(default_factory=list)
    aborted_jobs: List[str] = field(default_factory=list)
    deadline_report: DeadlineReport = field(default_factory=DeadlineReport)

    @property
    def enablement_met(self) -> bool:
        return all(t.enablement_met for t in self.transitions)

    @property
    def all_met(self) -> bool:
        return self.enablement_met and self.deadline_report.all_met

    def combined(self) -> ScheduleTrace:
        """All phases as one trace; a rem-job keeps a single ARRIVAL event"""
        out = ScheduleTrace(processors=self.processors)
        arrived = set()
        for trace in self.traces:
            out.slices.extend(trace.slices)
            out.completions.update(trace.completions)
            for ev in trace.events:
                if ev.kind is EventKind.ARRIVAL:
                    if ev.job_id in arrived:
                        continue
                    arrived.add(ev.job_id)
                out.events.append(ev)
        out.slices.sort(key=lambda s: (s.start, s.processor))
        out.events.sort(key=lambda e: e.time)
        return out


def _audit(trace, jobs, prio, m, verify: bool) -> None:
    if not verify:
        return
    violations = verify_trace_wellformed(trace, jobs, prio, m)
    if violations:
        raise InvariantBreachError(violations)


def run_multimode(
    sys: MultiModeSystem,
    initial_mode: str,
    scenarios: Mapping[str, ArrivalScenario],
    mcrs: Sequence[MCREvent],
    verify: bool = True,
) -> FullRunTrace:
    """
    Run the system through a sequence of mode change requests

    Each steady phase releases the active mode's scenario, shifted to the
    phase start. At an MCR the jobs still incomplete are aborted or turned
    into rem-jobs, the transition runs under the old policy, and the new
    mode's scenario starts at the enablement instant.

    Args:
        sys: A valid multi-mode system
        initial_mode: Mode running at time 0
        scenarios: Arrival scenario per mode (times relative to mode start)
        mcrs: Mode change requests, strictly increasing in time

    Returns:
        Full run trace with phase boundaries and aggregated verdicts
    """
    violations = validate_system(sys)
    if violations:
        raise InvalidSystemError(violations)
    sys.mode(initial_mode)
    times = [e.time for e in mcrs]
    if any(t < 0 for t in times):
        raise ProtocolError("MCR times must be >= 0")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ProtocolError("MCR times must be strictly increasing")

    m = sys.processors
    machine = PhaseMachine(initial_mode)
    counters: Dict[str, Dict[str, int]] = {}
    run = FullRunTrace(processors=m, mcrs=list(mcrs))

    def phase_jobs(mode_name: str, start: int, until=None) -> List[JobInstance]:
        if mode_name not in scenarios:
            raise ModeChangeError(f"no arrival scenario for mode {mode_name!r}")
        mode = sys.mode(mode_name)
        next_index = counters.setdefault(mode_name, {})
        jobs = scenarios[mode_name].to_jobs(
            mode, sys.mode_index(mode_name), offset=start, until=until, first_index=next_index,
        )
        for job in jobs:
            next_index[job.task] = job.job_index + 1
        return jobs

    for mcr in mcrs:
        steady = machine.phase
        mode_name = machine.mode
        start = steady.since
        machine.request(mcr.time, mcr.target_mode)
        spec = sys.transition(mode_name, mcr.target_mode)

        jobs = phase_jobs(mode_name, start, until=mcr.time)
        prio = assign_priorities(sys.mode(mode_name).policy, jobs)
        trace = simulate(jobs, prio, m, until=mcr.time)
        _audit(trace, jobs, prio, m, verify)

        active = [
            j.with_exec_req(j.exec_req - trace.executed(j.job_id))
            for j in jobs
            if j.job_id not in trace.completions
        ]
        cut = [j.job_id for j in active]
        run.deadline_report = run.deadline_report.merged(check_trace_deadlines(trace, jobs).excluding(cut))
        run.phases.append(PhaseRecord("steady", mode_name, start, mcr.time))
        run.traces.append(trace)

        aborted, remjobs = abort_and_collect(active, spec)
        ttrace = run_transition(sys, mode_name, mcr.target_mode, remjobs, mcr.time, prio=prio, verify=verify)
        ttrace.aborted_jobs = [j.job_id for j in aborted]
        run.aborted_jobs.extend(ttrace.aborted_jobs)
        run.deadline_report = run.deadline_report.merged(ttrace.remjob_deadline_report)
        run.transitions.append(ttrace)
        run.phases.append(PhaseRecord("transition", mode_name, mcr.time, ttrace.t_enable, to_mode=mcr.target_mode))
        run.traces.append(ttrace.rem_schedule)
        if aborted:
            logger.info("MCR at %d aborted %d job(s): %s", mcr.time, len(aborted), ttrace.aborted_jobs)

        machine.complete(ttrace.t_enable)

    mode_name = machine.mode
    start = machine.phase.since
    jobs = phase_jobs(mode_name, start)
    prio = assign_priorities(sys.mode(mode_name).policy, jobs)
    trace = simulate(jobs, prio, m)
    _audit(trace, jobs, prio, m, verify)
    run.deadline_report = run.deadline_report.merged(check_trace_deadlines(trace, jobs))
    end = max(start + scenarios[mode_name].horizon, trace.makespan)
    run.phases.append(PhaseRecord("steady", mode_name, start, end))
    run.traces.append(trace)
    return run
