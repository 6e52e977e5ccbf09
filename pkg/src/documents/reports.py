"""
Machine (dict/JSON) and human (table) renderings of analysis and run results
"""
import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence

import pandas as pd

from src.analysis.condition import TransitionReport
from src.engine.checks import DeadlineReport
from src.protocol.multimode import FullRunTrace
from src.protocol.transition import TransitionTrace
from src.validation.campaigns import FuzzSummary


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


def transition_report_dict(report: TransitionReport) -> Dict[str, Any]:
    js = report.worst_case_jobset
    return {
        "from": report.from_mode,
        "to": report.to_mode,
        "upms": fraction_str(report.upms_value),
        "upms_decimal": round(float(report.upms_value), 6),
        "min_enable_deadline": report.min_enable_deadline,
        "satisfied": report.satisfied,
        "slack": fraction_str(report.slack),
        "simulated_delay": report.simulated_delay,
        "worst_case_jobset": {
            "processing_times": list(js.processing_times),
            "n": js.n,
            "p_max": js.p_max,
            "total": js.total,
        },
    }


def reports_table(reports: Sequence[TransitionReport]) -> str:
    if not reports:
        return "(no declared transition)"
    frame = pd.DataFrame([
        {
            "from": r.from_mode,
            "to": r.to_mode,
            "|C|": r.worst_case_jobset.n,
            "upms": fraction_str(r.upms_value),
            "min D": r.min_enable_deadline,
            "slack": fraction_str(r.slack),
            "sim delay": r.simulated_delay,
            "verdict": "ok" if r.satisfied else "VIOLATED",
        }
        for r in reports
    ])
    return frame.to_string(index=False)


def deadline_report_dict(report: DeadlineReport) -> Dict[str, Any]:
    return {
        "all_met": report.all_met,
        "jobs": [
            {"job": v.job_id, "deadline": v.abs_deadline, "completion": v.completion, "met": v.met}
            for v in report.verdicts
        ],
    }


def deadline_table(report: DeadlineReport) -> str:
    if not report.verdicts:
        return "(no job with a deadline)"
    frame = pd.DataFrame([
        {
            "job": v.job_id,
            "deadline": v.abs_deadline,
            "completion": "-" if v.completion is None else v.completion,
            "met": "yes" if v.met else "MISSED",
        }
        for v in report.verdicts
    ])
    return frame.to_string(index=False)


def transition_trace_dict(tt: TransitionTrace) -> Dict[str, Any]:
    return {
        "from": tt.from_mode,
        "to": tt.to_mode,
        "t_mcr": tt.t_mcr,
        "t_enable": tt.t_enable,
        "delay": tt.delay,
        "aborted_jobs": list(tt.aborted_jobs),
        "rem_jobs": [
            {"job": j.job_id, "task": j.task, "arrival": j.arrival, "remaining": j.exec_req, "deadline": j.abs_deadline}
            for j in tt.rem_jobs
        ],
        "enablement": [
            {"task": v.task, "deadline": v.deadline, "enabled_at": v.enabled_at, "met": v.met}
            for v in tt.enablement_report
        ],
        "enablement_met": tt.enablement_met,
        "rem_job_deadlines": deadline_report_dict(tt.remjob_deadline_report),
    }


def enablement_table(tt: TransitionTrace) -> str:
    frame = pd.DataFrame([
        {"task": v.task, "deadline": v.deadline, "enabled at": v.enabled_at, "met": "yes" if v.met else "MISSED"}
        for v in tt.enablement_report
    ])
    return frame.to_string(index=False)


def full_run_dict(run: FullRunTrace) -> Dict[str, Any]:
    return {
        "processors": run.processors,
        "phases": [
            {"kind": p.kind, "mode": p.mode, "to": p.to_mode or None, "start": p.start, "end": p.end}
            for p in run.phases
        ],
        "mcrs": [{"time": e.time, "to": e.target_mode} for e in run.mcrs],
        "transitions": [transition_trace_dict(t) for t in run.transitions],
        "aborted_jobs": list(run.aborted_jobs),
        "deadlines": deadline_report_dict(run.deadline_report),
        "all_met": run.all_met,
    }


def phases_table(run: FullRunTrace) -> str:
    frame = pd.DataFrame([
        {
            "phase": p.kind,
            "mode": f"{p.mode} -> {p.to_mode}" if p.to_mode else p.mode,
            "start": p.start,
            "end": p.end,
        }
        for p in run.phases
    ])
    return frame.to_string(index=False)


def fuzz_summary_dict(summary: FuzzSummary) -> Dict[str, Any]:
    return {
        "campaign": summary.campaign,
        "trials": summary.trials,
        "skipped": summary.skipped,
        "failures": [{"trial": f.trial, "seed": f.seed, "detail": f.detail} for f in summary.failures],
        "ok": summary.ok,
    }


def phase_meta(run: FullRunTrace) -> Dict[str, Any]:
    """Header metadata for a full-run trace document"""
    return {
        "phases": [
            {"kind": p.kind, "mode": p.mode, "to": p.to_mode or None, "start": p.start, "end": p.end}
            for p in run.phases
        ],
        "mcrs": [{"time": e.time, "to": e.target_mode} for e in run.mcrs],
    }


def summary_lines(summary: FuzzSummary) -> List[str]:
    lines = [f"{summary.campaign}: {summary.trials} trial(s), {summary.skipped} skipped, {len(summary.failures)} failures"]
    for f in summary.failures[:20]:
        seed = "-" if f.seed is None else f.seed
        lines.append(f"  trial {f.trial} (seed {seed}): {f.detail}")
    if len(summary.failures) > 20:
        lines.append(f"  ... {len(summary.failures) - 20} more")
    return lines
