"""
ASCII Gantt charts for schedule traces
"""
import math
from typing import Dict, List, Optional, Sequence, Tuple

from src.engine.simulator import ScheduleTrace

SYMBOLS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"


def render_gantt(
    trace: ScheduleTrace,
    markers: Sequence[Tuple[int, str]] = (),
    max_width: int = 96,
    start: Optional[int] = None,
) -> str:
    """
    Draw one row per processor, one column per tick (or per group of ticks
    when the schedule is wider than max_width)

    Args:
        trace: Schedule to draw
        markers: (time, label) pairs drawn under the time axis
        max_width: Widest chart in columns
        start: First tick drawn (earliest slice by default)

    Returns:
        Multi-line chart with a legend
    """
    end = max([s.end for s in trace.slices] + list(trace.completions.values()) + [t for t, _ in markers] + [0])
    if start is None:
        start = min([s.start for s in trace.slices] + [t for t, _ in markers] + [end])
    span = end - start
    if span <= 0:
        return "(empty schedule)"

    scale = max(1, math.ceil(span / max_width))
    cols = math.ceil(span / scale)

    symbols: Dict[str, str] = {}
    for s in trace.slices:
        if s.job_id not in symbols:
            symbols[s.job_id] = SYMBOLS[len(symbols)] if len(symbols) < len(SYMBOLS) else "#"

    rows: List[str] = []
    for proc in range(1, trace.processors + 1):
        cells = ["."] * cols
        for s in trace.slices:
            if s.processor != proc:
                continue
            first = (s.start - start) // scale
            last = math.ceil((s.end - start) / scale)
            for c in range(max(first, 0), min(last, cols)):
                cells[c] = symbols[s.job_id]
        rows.append(f"P{proc:<3}|{''.join(cells)}|")

    axis = [" "] * (cols + 1)
    labels = [" "] * (cols + 12)
    for c in range(0, cols + 1, 10):
        axis[c] = "+"
        text = str(start + c * scale)
        for k, ch in enumerate(text):
            if c + k < len(labels):
                labels[c + k] = ch
    rows.append("     " + "".join(axis).rstrip())
    rows.append("     " + "".join(labels).rstrip())

    for t, label in markers:
        c = min(max((t - start) // scale, 0), cols)
        rows.append("     " + " " * c + f"^ {label} @ {t}")

    if scale > 1:
        rows.append(f"(1 column = {scale} ticks)")
    legend = "  ".join(f"{sym}={job}" for job, sym in symbols.items())
    if legend:
        rows.append("legend: " + legend)
    return "\n".join(rows)
