"""
Sufficient transition-schedulability test: upms of the C(i,j) WCETs must
not exceed the smallest enablement deadline of the new mode
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.analysis.makespan import JobSetSummary, min_enablement_deadline, upms
from src.engine.priorities import assign_priorities
from src.engine.simulator import simulate
from src.errors import InvalidSystemError
from src.model.checks import validate_system
from src.model.scenarios import build_worst_case_remjobs
from src.model.tasks import MultiModeSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransitionReport:
    from_mode: str
    to_mode: str
    upms_value: Fraction
    min_enable_deadline: int
    satisfied: bool
    worst_case_jobset: JobSetSummary
    simulated_delay: Optional[int] = None

    @property
    def slack(self) -> Fraction:
        return self.min_enable_deadline - self.upms_value


def check_transition_condition(sys: MultiModeSystem, from_mode: str, to_mode: str) -> TransitionReport:
    """
    Evaluate the condition for one declared transition

    Also simulates the worst-case rem-jobs under the from-mode policy to
    report the delay that policy actually produces.

    Raises:
        UnknownTransitionError: If (from, to) is not declared
    """
    spec = sys.transition(from_mode, to_mode)
    remjobs = build_worst_case_remjobs(sys, from_mode, to_mode)
    jobset = JobSetSummary.from_jobs(remjobs)
    bound = upms(jobset, sys.processors)
    deadline = min_enablement_deadline(spec)

    policy = sys.mode(from_mode).policy
    trace = simulate(remjobs, assign_priorities(policy, remjobs), sys.processors)

    report = TransitionReport(
        from_mode=from_mode,
        to_mode=to_mode,
        upms_value=bound,
        min_enable_deadline=deadline,
        satisfied=bound <= deadline,
        worst_case_jobset=jobset,
        simulated_delay=trace.makespan,
    )
    logger.info(
        "%s -> %s: upms=%s min deadline=%d satisfied=%s",
        from_mode, to_mode, bound, deadline, report.satisfied,
    )
    return report


def check_system(sys: MultiModeSystem) -> List[TransitionReport]:
    """
    One report per declared transition, in declaration order

    Raises:
        InvalidSystemError: If the system breaks a model invariant
    """
    violations = validate_system(sys)
    if violations:
        raise InvalidSystemError(violations)
    return [check_transition_condition(sys, t.from_mode, t.to_mode) for t in sys.transitions]


def is_valid_protocol(reports: Sequence[TransitionReport]) -> bool:
    """Conjunction of the per-transition verdicts"""
    return all(r.satisfied for r in reports)


def undeclared_transitions(sys: MultiModeSystem) -> List[Tuple[str, str]]:
    """Ordered mode pairs with no transition spec; MCRs between them are rejected"""
    declared = {(t.from_mode, t.to_mode) for t in sys.transitions}
    return [
        (a, b)
        for a in sys.mode_names
        for b in sys.mode_names
        if a != b and (a, b) not in declared
    ]
