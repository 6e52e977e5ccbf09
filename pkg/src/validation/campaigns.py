"""
Seeded fuzz campaigns for the makespan bound, predictability and the
sufficiency of the transition condition
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import settings
from src.analysis.condition import check_transition_condition
from src.analysis.makespan import JobSetSummary, upms
from src.engine.checks import check_trace_deadlines, verify_trace_wellformed
from src.engine.priorities import PriorityAssignment, assign_priorities
from src.engine.simulator import simulate
from src.errors import ConditionNotSatisfiedError, InvariantBreachError
from src.model.scenarios import build_worst_case_remjobs, periodic_scenario, sporadic_scenario
from src.model.tasks import JobInstance, MultiModeSystem
from src.protocol.transition import abort_and_collect, run_transition
from src.validation.generators import generate_system
from src.validation.oracles import brute_force_max_makespan

logger = logging.getLogger(__name__)

Range = Tuple[int, int]


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 100
    n_range: Range = (1, 7)
    m_range: Range = (2, 4)
    p_range: Range = (1, 20)
    release_jitter: int = 6
    shrink_probability: float = 0.5
    horizon: int = 40
    workers: int = 1

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name, (lo, hi), floor in (
            ("n_range", self.n_range, 0),
            ("m_range", self.m_range, 1),
            ("p_range", self.p_range, 0),
        ):
            if lo > hi or lo < floor:
                raise ValueError(f"{name} must be a non-empty range with lower bound >= {floor}, got {(lo, hi)}")
        if self.release_jitter < 0:
            raise ValueError("release_jitter must be >= 0")
        if not 0.0 <= self.shrink_probability <= 1.0:
            raise ValueError("shrink_probability must be within [0, 1]")
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class TrialOutcome:
    ok: bool = True
    skipped: bool = False
    detail: str = ""


@dataclass(frozen=True)
class FuzzFailure:
    trial: str
    seed: Optional[int]
    detail: str


@dataclass
class FuzzSummary:
    campaign: str
    trials: int = 0
    skipped: int = 0
    failures: List[FuzzFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def absorb(self, other: "FuzzSummary", label: str = "") -> None:
        self.trials += other.trials
        self.skipped += other.skipped
        for f in other.failures:
            trial = f"{label}/{f.trial}" if label else f.trial
            self.failures.append(FuzzFailure(trial, f.seed, f.detail))


def trial_seed(*keys: int) -> int:
    """Integer seed derived from (campaign seed, indices...)"""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def _draw(rng: np.random.Generator, bounds: Range) -> int:
    return int(rng.integers(bounds[0], bounds[1] + 1))


def _audit(trace, jobs, prio, m) -> None:
    violations = verify_trace_wellformed(trace, jobs, prio, m)
    if violations:
        raise InvariantBreachError(violations)


def _run_trials(
    campaign: str,
    cfg: FuzzConfig,
    trial: Callable[[int], TrialOutcome],
    seeds: List[int],
) -> FuzzSummary:
    summary = FuzzSummary(campaign)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes: Iterable[TrialOutcome] = list(pool.map(trial, seeds, chunksize=max(1, len(seeds) // (cfg.workers * 4))))
    else:
        outcomes = map(trial, seeds)
    progress = tqdm(outcomes, total=len(seeds), desc=campaign, disable=not settings.show_progress())
    for k, outcome in enumerate(progress):
        summary.trials += 1
        if outcome.skipped:
            summary.skipped += 1
        elif not outcome.ok:
            summary.failures.append(FuzzFailure(str(k), seeds[k], outcome.detail))
    logger.info(
        "%s: %d trial(s), %d skipped, %d failure(s)",
        campaign, summary.trials, summary.skipped, len(summary.failures),
    )
    return summary


def bound_trial(seed: int, cfg: FuzzConfig) -> TrialOutcome:
    """One random job set checked against upms over every priority order"""
    rng = np.random.default_rng(seed)
    n = _draw(rng, cfg.n_range)
    m = _draw(rng, cfg.m_range)
    ps = [_draw(rng, cfg.p_range) for _ in range(n)]
    try:
        result = brute_force_max_makespan(ps, m, samples=settings.sampled_orders, rng=rng)
    except InvariantBreachError as exc:
        return TrialOutcome(ok=False, detail=f"ps={ps} m={m}: {exc}")
    if result.holds:
        return TrialOutcome()
    return TrialOutcome(
        ok=False,
        detail=f"ps={ps} m={m} max makespan {result.max_makespan} > upms {result.bound} "
               f"(order {list(result.witness_order.order)})",
    )


def verify_bound_fuzz(cfg: FuzzConfig) -> FuzzSummary:
    seeds = [trial_seed(cfg.seed, k) for k in range(cfg.trials)]
    return _run_trials("bound", cfg, partial(bound_trial, cfg=cfg), seeds)


def predictability_trial(seed: int, cfg: FuzzConfig) -> TrialOutcome:
    """
    Shrink some execution requirements under the same priorities and check
    that no completion time moves later
    """
    rng = np.random.default_rng(seed)
    n = max(1, _draw(rng, cfg.n_range))
    m = _draw(rng, cfg.m_range)
    jobs: List[JobInstance] = []
    for i in range(n):
        arrival = int(rng.integers(0, cfg.release_jitter + 1))
        exec_req = _draw(rng, cfg.p_range)
        deadline = arrival + exec_req + int(rng.integers(0, cfg.release_jitter + 1))
        jobs.append(JobInstance(f"J{i + 1}", arrival, exec_req, deadline, task=f"J{i + 1}", task_index=i))
    prio = PriorityAssignment(tuple(jobs[k].job_id for k in rng.permutation(n)))
    reduced = [
        j.with_exec_req(int(rng.integers(0, j.exec_req + 1))) if rng.random() < cfg.shrink_probability else j
        for j in jobs
    ]
    try:
        original = simulate(jobs, prio, m)
        _audit(original, jobs, prio, m)
        shrunk = simulate(reduced, prio, m)
        _audit(shrunk, reduced, prio, m)
    except InvariantBreachError as exc:
        return TrialOutcome(ok=False, detail=str(exc))

    if reduced == jobs and (shrunk.slices != original.slices or shrunk.completions != original.completions):
        return TrialOutcome(ok=False, detail=f"m={m} unchanged execution requirements gave a different trace")

    later = [
        f"{j.job_id}: {shrunk.completions[j.job_id]} > {original.completions[j.job_id]}"
        for j in jobs
        if shrunk.completions[j.job_id] > original.completions[j.job_id]
    ]
    if later:
        return TrialOutcome(ok=False, detail=f"m={m} completions moved later: {later}")
    if check_trace_deadlines(original, jobs).all_met and not check_trace_deadlines(shrunk, reduced).all_met:
        return TrialOutcome(ok=False, detail=f"m={m} shrinking broke a deadline")
    return TrialOutcome()


def verify_predictability(cfg: FuzzConfig) -> FuzzSummary:
    seeds = [trial_seed(cfg.seed, k) for k in range(cfg.trials)]
    return _run_trials("predictability", cfg, partial(predictability_trial, cfg=cfg), seeds)


def sufficiency_trial(seed: int, cfg: FuzzConfig, sys: MultiModeSystem, from_mode: str, to_mode: str) -> TrialOutcome:
    """
    One fuzzed transition

    The old mode runs a random sporadic scenario; an MCR lands at a random
    instant and the incomplete jobs become rem-jobs or are aborted. Trials
    whose old-mode run (without MCR) already misses a deadline are skipped.
    """
    rng = np.random.default_rng(seed)
    mode = sys.mode(from_mode)
    spec = sys.transition(from_mode, to_mode)
    m = sys.processors

    scenario = sporadic_scenario(mode, cfg.horizon, rng, cfg.release_jitter, cfg.shrink_probability)
    jobs = scenario.to_jobs(mode, sys.mode_index(from_mode))
    prio = assign_priorities(mode.policy, jobs)
    try:
        full = simulate(jobs, prio, m)
        _audit(full, jobs, prio, m)
        if not check_trace_deadlines(full, jobs).all_met:
            return TrialOutcome(skipped=True, detail="old mode misses deadlines without the MCR")

        t_mcr = int(rng.integers(0, cfg.horizon + 1))
        before = [j for j in jobs if j.arrival < t_mcr]
        prefix_prio = prio.restrict(j.job_id for j in before)
        prefix = simulate(before, prefix_prio, m, until=t_mcr)
        _audit(prefix, before, prefix_prio, m)
        active = [
            j.with_exec_req(j.exec_req - prefix.executed(j.job_id))
            for j in before
            if j.job_id not in prefix.completions
        ]
        _, remjobs = abort_and_collect(active, spec)
        result = run_transition(sys, from_mode, to_mode, remjobs, t_mcr, prio=prio)
    except InvariantBreachError as exc:
        return TrialOutcome(ok=False, detail=str(exc))

    problems = []
    if not result.enablement_met:
        problems.append(f"enabled at {result.t_enable}, deadlines {[v.deadline for v in result.enablement_report]}")
    if not result.remjob_deadline_report.all_met:
        problems.append(f"rem-job misses {[v.job_id for v in result.remjob_deadline_report.missed]}")
    for job in remjobs:
        if result.rem_schedule.completions[job.job_id] > full.completions[job.job_id]:
            problems.append(f"{job.job_id} completes later with the MCR")
    bound = upms(JobSetSummary.from_jobs(remjobs), m)
    if result.delay > bound:
        problems.append(f"delay {result.delay} > upms {bound} of remaining work")
    if problems:
        return TrialOutcome(ok=False, detail=f"{from_mode}->{to_mode} t_mcr={t_mcr}: " + "; ".join(problems))
    return TrialOutcome()


def _boundary_trials(sys: MultiModeSystem, from_mode: str, to_mode: str, horizon: int) -> FuzzSummary:
    """Worst-case release at the MCR, and the all-zero variant"""
    summary = FuzzSummary("sufficiency")
    mode = sys.mode(from_mode)
    worst = build_worst_case_remjobs(sys, from_mode, to_mode)

    synchronous = periodic_scenario(mode, max(horizon, max(t.min_interarrival for t in mode.tasks)))
    sync_jobs = synchronous.to_jobs(mode, sys.mode_index(from_mode))
    sync_prio = assign_priorities(mode.policy, sync_jobs)
    sync_ok = check_trace_deadlines(simulate(sync_jobs, sync_prio, sys.processors), sync_jobs).all_met

    result = run_transition(sys, from_mode, to_mode, worst, 0)
    summary.trials += 1
    if not result.enablement_met:
        summary.failures.append(FuzzFailure("worst-case", None, f"enabled at {result.t_enable} past a deadline"))
    elif sync_ok and not result.remjob_deadline_report.all_met:
        summary.failures.append(FuzzFailure("worst-case", None, "rem-job deadline missed"))

    t_mcr = max((t.deadline for t in mode.tasks), default=0)
    zero = run_transition(sys, from_mode, to_mode, [j.with_exec_req(0) for j in worst], t_mcr)
    summary.trials += 1
    if zero.t_enable != t_mcr or not zero.enablement_met:
        summary.failures.append(FuzzFailure("all-zero", None, f"enabled at {zero.t_enable}, MCR at {t_mcr}"))
    return summary


def verify_condition_sufficiency(
    sys: MultiModeSystem,
    from_mode: str,
    to_mode: str,
    cfg: FuzzConfig,
) -> FuzzSummary:
    """
    Fuzz one transition that satisfies the condition

    Raises:
        ConditionNotSatisfiedError: If the transition fails the condition
    """
    if not check_transition_condition(sys, from_mode, to_mode).satisfied:
        raise ConditionNotSatisfiedError(from_mode, to_mode)
    summary = _boundary_trials(sys, from_mode, to_mode, cfg.horizon)
    seeds = [trial_seed(cfg.seed, k) for k in range(cfg.trials)]
    fuzzed = _run_trials(
        f"sufficiency {from_mode}->{to_mode}",
        cfg,
        partial(sufficiency_trial, cfg=cfg, sys=sys, from_mode=from_mode, to_mode=to_mode),
        seeds,
    )
    summary.absorb(fuzzed)
    return summary


def system_seed(seed: int, index: int) -> int:
    return trial_seed(seed, 1_000_003, index)


def verify_generated_systems(cfg: FuzzConfig, systems: int = 20, n_modes: int = 2) -> FuzzSummary:
    """
    Sufficiency campaign over random systems built to satisfy the condition

    Failure labels carry the system seed, which rebuilds the system through
    generate_system(np.random.default_rng(seed)).
    """
    summary = FuzzSummary("sufficiency")
    for s in range(systems):
        sys_seed = system_seed(cfg.seed, s)
        sys = generate_system(np.random.default_rng(sys_seed), n_modes=n_modes)
        sub_cfg = replace(cfg, seed=sys_seed % (2 ** 31))
        for spec in sys.transitions:
            result = verify_condition_sufficiency(sys, spec.from_mode, spec.to_mode, sub_cfg)
            summary.absorb(result, label=f"system {sys_seed} {spec.from_mode}->{spec.to_mode}")
    return summary
