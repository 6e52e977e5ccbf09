"""
Command-line front end for the multi-mode scheduling toolkit
"""
import argparse
import logging
import sys
import os
from dataclasses import replace
from typing import List, Optional

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import numpy as np

from config.settings import settings, setup_logging
from src.analysis.condition import check_system, is_valid_protocol, undeclared_transitions
from src.documents.gantt import render_gantt
from src.documents.reports import (
    deadline_report_dict,
    deadline_table,
    enablement_table,
    full_run_dict,
    fuzz_summary_dict,
    phase_meta,
    phases_table,
    reports_table,
    summary_lines,
    to_json,
    transition_report_dict,
    transition_trace_dict,
)
from src.documents.system_doc import (
    parse_arrival_scenario,
    parse_mcr_script,
    parse_system,
    parse_transition_scenario,
)
from src.documents.trace_doc import write_trace
from src.engine.checks import check_trace_deadlines, verify_trace_wellformed
from src.engine.priorities import assign_priorities
from src.engine.simulator import simulate
from src.errors import (
    ConditionNotSatisfiedError,
    DocumentSchemaError,
    DocumentSyntaxError,
    InvalidSystemError,
    InvariantBreachError,
    ModeChangeError,
)
from src.model.scenarios import build_worst_case_remjobs, periodic_scenario
from src.protocol.multimode import run_multimode
from src.protocol.transition import run_transition
from src.validation.campaigns import (
    FuzzConfig,
    FuzzFailure,
    FuzzSummary,
    bound_trial,
    predictability_trial,
    sufficiency_trial,
    verify_bound_fuzz,
    verify_condition_sufficiency,
    verify_generated_systems,
    verify_predictability,
)
from src.validation.generators import generate_system

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNSATISFIED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_BREACH = 4


def cmd_analyze(args) -> int:
    system = parse_system(args.system)
    reports = check_system(system)
    missing = undeclared_transitions(system)
    valid = is_valid_protocol(reports)

    if args.json:
        print(to_json({
            "processors": system.processors,
            "transitions": [transition_report_dict(r) for r in reports],
            "undeclared": [[a, b] for a, b in missing],
            "valid_protocol": valid,
        }))
    else:
        print(f"\n📐 {args.system}: {len(system.modes)} mode(s) on {system.processors} processor(s)\n")
        print(reports_table(reports))
        if missing:
            print(f"\nℹ️  No transition declared for: {', '.join(f'{a} -> {b}' for a, b in missing)}")
        if valid:
            print("\n✅ Every declared transition satisfies the condition")
        else:
            print("\n❌ At least one transition violates the condition")
    return EXIT_OK if valid else EXIT_UNSATISFIED


def cmd_transition(args) -> int:
    system = parse_system(args.system)
    if args.scenario:
        t_mcr, remjobs = parse_transition_scenario(args.scenario, system, args.from_mode)
    else:
        t_mcr, remjobs = 0, build_worst_case_remjobs(system, args.from_mode, args.to_mode)
    result = run_transition(system, args.from_mode, args.to_mode, remjobs, t_mcr)

    if args.trace:
        write_trace(args.trace, result.rem_schedule, {
            "from": result.from_mode, "to": result.to_mode, "t_mcr": result.t_mcr, "t_enable": result.t_enable,
        })

    if args.json:
        print(to_json(transition_trace_dict(result)))
    else:
        source = "scenario" if args.scenario else "worst case"
        print(f"\n🔀 {result.from_mode} -> {result.to_mode} ({source}), MCR at {result.t_mcr}")
        if result.aborted_jobs:
            print(f"   aborted: {', '.join(result.aborted_jobs)}")
        print(f"   rem-jobs: {', '.join(j.job_id for j in result.rem_jobs) or 'none'}")
        print(f"\n⏱️  All new-mode tasks enabled at t = {result.t_enable} (delay {result.delay})\n")
        print(enablement_table(result))
        if result.rem_jobs:
            print()
            print(deadline_table(result.remjob_deadline_report))
        if args.gantt:
            print()
            print(render_gantt(
                result.rem_schedule,
                markers=[(result.t_mcr, "MCR"), (result.t_enable, "enable")],
                start=result.t_mcr,
            ))
        print("\n✅ All deadlines met" if result.all_met else "\n❌ Deadline(s) missed")
    return EXIT_OK if result.all_met else EXIT_UNSATISFIED


def cmd_simulate(args) -> int:
    system = parse_system(args.system)
    mode = system.mode(args.mode)
    if args.scenario:
        scenario = parse_arrival_scenario(args.scenario, mode)
    else:
        scenario = periodic_scenario(mode, args.horizon)
    jobs = scenario.to_jobs(mode, system.mode_index(args.mode), until=args.horizon)
    prio = assign_priorities(mode.policy, jobs)
    trace = simulate(jobs, prio, system.processors)
    violations = verify_trace_wellformed(trace, jobs, prio, system.processors)
    if violations:
        raise InvariantBreachError(violations)
    report = check_trace_deadlines(trace, jobs)

    if args.trace:
        write_trace(args.trace, trace, {"mode": mode.name, "policy": mode.policy.value, "horizon": args.horizon})

    if args.json:
        print(to_json({
            "mode": mode.name,
            "policy": mode.policy.value,
            "jobs": len(jobs),
            "makespan": trace.makespan,
            "deadlines": deadline_report_dict(report),
        }))
    else:
        print(f"\n▶️  Mode {mode.name} ({mode.policy.value}), {len(jobs)} job(s), makespan {trace.makespan}\n")
        print(deadline_table(report))
        if args.gantt:
            print()
            print(render_gantt(trace))
        print("\n✅ All deadlines met" if report.all_met else f"\n❌ {len(report.missed)} deadline(s) missed")
    return EXIT_OK if report.all_met else EXIT_UNSATISFIED


def cmd_run(args) -> int:
    system = parse_system(args.system)
    initial, scenarios, mcrs = parse_mcr_script(args.script, system)
    run = run_multimode(system, initial, scenarios, mcrs)
    combined = run.combined()

    if args.trace:
        write_trace(args.trace, combined, phase_meta(run))

    if args.json:
        print(to_json(full_run_dict(run)))
    else:
        print(f"\n🧭 {len(mcrs)} mode change request(s), starting in {initial}\n")
        print(phases_table(run))
        for tt in run.transitions:
            status = "✅" if tt.enablement_met else "❌"
            print(f"   {status} {tt.from_mode} -> {tt.to_mode}: MCR {tt.t_mcr}, enabled {tt.t_enable}")
        missed = run.deadline_report.missed
        if args.gantt:
            print()
            print(render_gantt(combined, markers=[(e.time, f"MCR->{e.target_mode}") for e in mcrs]))
        print("\n✅ All deadlines met" if run.all_met else f"\n❌ {len(missed)} job deadline(s) missed or enablement late")
    return EXIT_OK if run.all_met else EXIT_UNSATISFIED


def _replay(args, cfg: FuzzConfig) -> FuzzSummary:
    """Re-run one trial (or one generated system) from its seed"""
    summary = FuzzSummary(f"{args.campaign} replay")
    if args.campaign == "sufficiency" and not args.system:
        system = generate_system(np.random.default_rng(args.replay))
        cfg = replace(cfg, seed=args.replay % (2 ** 31))
        for spec in system.transitions:
            result = verify_condition_sufficiency(system, spec.from_mode, spec.to_mode, cfg)
            summary.absorb(result, label=f"{spec.from_mode}->{spec.to_mode}")
        return summary

    if args.campaign == "bound":
        outcome = bound_trial(args.replay, cfg)
    elif args.campaign == "predictability":
        outcome = predictability_trial(args.replay, cfg)
    else:
        system = parse_system(args.system)
        outcome = sufficiency_trial(args.replay, cfg, system, args.from_mode, args.to_mode)
    summary.trials = 1
    if outcome.skipped:
        summary.skipped = 1
    elif not outcome.ok:
        summary.failures.append(FuzzFailure("replay", args.replay, outcome.detail))
    return summary


def cmd_validate(args) -> int:
    if args.campaign == "sufficiency" and args.system and not (args.from_mode and args.to_mode):
        print("❌ --system needs --from and --to", file=sys.stderr)
        return EXIT_PARSE
    cfg = FuzzConfig(seed=args.seed, trials=args.trials, workers=args.workers)

    if args.replay is not None:
        summary = _replay(args, cfg)
    elif args.campaign == "bound":
        summary = verify_bound_fuzz(cfg)
    elif args.campaign == "predictability":
        summary = verify_predictability(cfg)
    elif args.system:
        system = parse_system(args.system)
        summary = verify_condition_sufficiency(system, args.from_mode, args.to_mode, cfg)
    else:
        summary = verify_generated_systems(cfg, systems=args.systems)

    if args.json:
        print(to_json(fuzz_summary_dict(summary)))
    else:
        print("\n🧪 " + "\n".join(summary_lines(summary)))
        print(f"\n{'✅' if summary.ok else '❌'} {len(summary.failures)} failures")
    return EXIT_OK if summary.ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modechange",
        description="Mode transition analysis and simulation for global multiprocessor scheduling",
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: MODECHANGE_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Check the transition condition for every declared transition")
    p.add_argument("system")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("transition", help="Run one mode transition")
    p.add_argument("system")
    p.add_argument("--from", dest="from_mode", required=True)
    p.add_argument("--to", dest="to_mode", required=True)
    source = p.add_mutually_exclusive_group()
    source.add_argument("--worst-case", action="store_true", help="Every completable task releases at the MCR (default)")
    source.add_argument("--scenario", help="Transition scenario document")
    p.add_argument("--trace", help="Write the schedule as JSON lines")
    p.add_argument("--gantt", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_transition)

    p = sub.add_parser("simulate", help="Simulate one mode in steady state")
    p.add_argument("system")
    p.add_argument("--mode", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--scenario", help="Arrival scenario document (periodic when omitted)")
    p.add_argument("--trace")
    p.add_argument("--gantt", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("run", help="Run a script of mode change requests")
    p.add_argument("system")
    p.add_argument("--script", required=True)
    p.add_argument("--trace")
    p.add_argument("--gantt", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("validate", help="Seeded validation campaigns")
    p.add_argument("campaign", choices=["bound", "predictability", "sufficiency"])
    p.add_argument("--seed", type=int, default=settings.default_seed)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=settings.workers)
    p.add_argument("--replay", type=int, default=None, metavar="SEED", help="Re-run a single failing trial")
    p.add_argument("--system", help="Fuzz one transition of this system (sufficiency)")
    p.add_argument("--from", dest="from_mode")
    p.add_argument("--to", dest="to_mode")
    p.add_argument("--systems", type=int, default=20, help="Generated systems when --system is omitted")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, dispatch the subcommand and map errors to exit codes

    Returns:
        0 on success, 1 unsatisfied/missed, 2 input error, 3 validation
        failure, 4 invariant breach
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except (DocumentSyntaxError, DocumentSchemaError, InvalidSystemError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_PARSE
    except ConditionNotSatisfiedError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_UNSATISFIED
    except InvariantBreachError as e:
        logger.error("invariant breach: %s", e)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_BREACH
    except (ModeChangeError, ValueError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
