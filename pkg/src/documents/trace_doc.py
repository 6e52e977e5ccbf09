"""
JSON-lines trace codec

Line 1 is a header record {"kind": "header", "version", "m", "meta"}; then
event records {"t", "ev", "job"[, "cpu"]} and slice records
{"t0", "t1", "cpu", "job"} in time order (events first at equal times).
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from src.engine.simulator import EventKind, ScheduleTrace, Slice, TraceEvent
from src.errors import DocumentSchemaError, DocumentSyntaxError

TRACE_VERSION = 1


def _line(record: Dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"), ensure_ascii=False)


def trace_records(trace: ScheduleTrace) -> List[Dict[str, Any]]:
    keyed = []
    for seq, ev in enumerate(trace.events):
        record: Dict[str, Any] = {"t": ev.time, "ev": ev.kind.value, "job": ev.job_id}
        if ev.processor is not None:
            record["cpu"] = ev.processor
        keyed.append(((ev.time, 0, seq), record))
    slices = sorted(trace.slices, key=lambda s: (s.start, s.processor))
    for seq, s in enumerate(slices):
        keyed.append(((s.start, 1, seq), {"t0": s.start, "t1": s.end, "cpu": s.processor, "job": s.job_id}))
    keyed.sort(key=lambda item: item[0])
    return [record for _, record in keyed]


def dump_trace(trace: ScheduleTrace, meta: Optional[Dict[str, Any]] = None) -> str:
    header = {"kind": "header", "version": TRACE_VERSION, "m": trace.processors, "meta": meta or {}}
    lines = [_line(header)] + [_line(r) for r in trace_records(trace)]
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> Tuple[ScheduleTrace, Dict[str, Any]]:
    """
    Decode a trace document

    Returns:
        (trace, header meta); completions are rebuilt from COMPLETION events
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DocumentSchemaError(["trace: empty document"])
    try:
        records = [json.loads(ln) for ln in lines]
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(f"trace: invalid JSON record: {e.msg}")

    header = records[0]
    if not isinstance(header, dict) or header.get("kind") != "header":
        raise DocumentSchemaError(["trace line 1: expected a header record"])
    if header.get("version") != TRACE_VERSION:
        raise DocumentSchemaError([f"trace line 1: unsupported version {header.get('version')!r}"])

    trace = ScheduleTrace(processors=int(header["m"]))
    problems = []
    for lineno, rec in enumerate(records[1:], start=2):
        if not isinstance(rec, dict):
            problems.append(f"trace line {lineno}: expected an object")
        elif set(rec) == {"t0", "t1", "cpu", "job"}:
            trace.slices.append(Slice(rec["t0"], rec["t1"], rec["cpu"], rec["job"]))
        elif set(rec) in ({"t", "ev", "job"}, {"t", "ev", "job", "cpu"}):
            try:
                kind = EventKind(rec["ev"])
            except ValueError:
                problems.append(f"trace line {lineno}: unknown event kind {rec['ev']!r}")
                continue
            trace.events.append(TraceEvent(rec["t"], kind, rec["job"], rec.get("cpu")))
            if kind is EventKind.COMPLETION:
                trace.completions[rec["job"]] = rec["t"]
        else:
            problems.append(f"trace line {lineno}: unrecognized record keys {sorted(rec)}")
    if problems:
        raise DocumentSchemaError(problems)
    return trace, header.get("meta", {})


def write_trace(path: Union[str, Path], trace: ScheduleTrace, meta: Optional[Dict[str, Any]] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dump_trace(trace, meta))


def read_trace(path: Union[str, Path]) -> Tuple[ScheduleTrace, Dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_trace(f.read())
