"""
Brute-force makespan oracle: worst makespan over every priority order
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from src.analysis.makespan import JobSetSummary, upms
from src.engine.checks import verify_trace_wellformed
from src.engine.priorities import PriorityAssignment
from src.engine.simulator import simulate
from src.errors import ExhaustiveCapError, InvariantBreachError
from src.model.tasks import JobInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    max_makespan: int
    witness_order: PriorityAssignment
    bound: Fraction
    exhaustive: bool = True
    orders_checked: int = 0

    @property
    def holds(self) -> bool:
        return self.max_makespan <= self.bound


def ready_jobs(ps: Sequence[int]) -> List[JobInstance]:
    """Jobs J1..Jn ready at time 0 with the given processing times"""
    return [
        JobInstance(job_id=f"J{i + 1}", arrival=0, exec_req=int(p), abs_deadline=None, task=f"J{i + 1}", task_index=i)
        for i, p in enumerate(ps)
    ]


def makespan_under(jobs: Sequence[JobInstance], prio: PriorityAssignment, m: int, verify: bool = True) -> int:
    trace = simulate(jobs, prio, m)
    if verify:
        violations = verify_trace_wellformed(trace, jobs, prio, m)
        if violations:
            raise InvariantBreachError(violations)
    return trace.makespan


def brute_force_max_makespan(
    ps: Sequence[int],
    m: int,
    cap: Optional[int] = None,
    samples: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    verify: bool = True,
) -> OracleResult:
    """
    Simulate every priority order of jobs ready at 0 and keep the worst makespan

    Args:
        ps: Processing times
        m: Processor count
        cap: Largest n enumerated exhaustively (settings default)
        samples: Above the cap, number of random orders to try instead of
            failing; the result is then flagged exhaustive=False
        rng: Generator for sampled orders
        verify: Audit every simulated trace

    Returns:
        Worst makespan, a witness order, and the upms bound

    Raises:
        ExhaustiveCapError: If n exceeds the cap and sampling is off
    """
    cap = settings.exhaustive_cap if cap is None else cap
    jobs = ready_jobs(ps)
    ids = [j.job_id for j in jobs]
    bound = upms(JobSetSummary.of(ps), m)

    if len(jobs) <= cap:
        orders: Iterable[Tuple[str, ...]] = permutations(ids)
        exhaustive = True
    elif samples:
        rng = rng if rng is not None else np.random.default_rng(settings.default_seed)
        orders = (tuple(ids[k] for k in rng.permutation(len(ids))) for _ in range(samples))
        exhaustive = False
    else:
        raise ExhaustiveCapError(len(jobs), cap)

    worst = -1
    witness = PriorityAssignment(tuple(ids))
    checked = 0
    for order in orders:
        prio = PriorityAssignment(tuple(order))
        span = makespan_under(jobs, prio, m, verify)
        checked += 1
        if span > worst:
            worst, witness = span, prio
    worst = max(worst, 0)

    result = OracleResult(worst, witness, bound, exhaustive, checked)
    logger.debug("oracle ps=%s m=%d: max makespan %d, bound %s", list(ps), m, worst, bound)
    return result
