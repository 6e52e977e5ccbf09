"""
Structural validation of multi-mode systems
"""
from collections import Counter
from dataclasses import dataclass
from typing import List

from src.model.tasks import MultiModeSystem


@dataclass(frozen=True)
class Violation:
    """One broken rule; path uses the JSON path of the system document"""

    path: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: [{self.rule}] {self.message}"


def validate_system(sys: MultiModeSystem) -> List[Violation]:
    """
    Check every model invariant of a system

    Args:
        sys: System to check

    Returns:
        List of violations, empty when the system is well-formed
    """
    out: List[Violation] = []

    if sys.processors < 1:
        out.append(Violation("$.processors", "m >= 1", f"processor count {sys.processors} < 1"))
    if not sys.modes:
        out.append(Violation("$.modes", "modes non-empty", "system declares no mode"))

    mode_counts = Counter(m.name for m in sys.modes)
    for i, mode in enumerate(sys.modes):
        mpath = f"$.modes[{i}]"
        if mode_counts[mode.name] > 1:
            out.append(Violation(f"{mpath}.name", "unique mode names", f"mode {mode.name!r} declared {mode_counts[mode.name]} times"))
        if not mode.tasks:
            out.append(Violation(f"{mpath}.tasks", "tasks non-empty", f"mode {mode.name!r} has no task"))
        task_counts = Counter(t.name for t in mode.tasks)
        for k, task in enumerate(mode.tasks):
            tpath = f"{mpath}.tasks[{k}]"
            if task_counts[task.name] > 1:
                out.append(Violation(f"{tpath}.name", "unique task names", f"task {task.name!r} repeated in mode {mode.name!r}"))
            if task.wcet < 1:
                out.append(Violation(f"{tpath}.wcet", "C >= 1", f"task {task.name!r} has wcet {task.wcet}"))
            if task.deadline < task.wcet:
                out.append(Violation(f"{tpath}.deadline", "D >= C", f"task {task.name!r} has deadline {task.deadline} < wcet {task.wcet}"))
            if task.deadline > task.min_interarrival:
                out.append(Violation(f"{tpath}.deadline", "D <= T", f"task {task.name!r} has deadline {task.deadline} > period {task.min_interarrival}"))

    modes = {m.name: m for m in sys.modes}
    seen_pairs = Counter()
    for i, spec in enumerate(sys.transitions):
        spath = f"$.transitions[{i}]"
        pair = (spec.from_mode, spec.to_mode)
        seen_pairs[pair] += 1
        if seen_pairs[pair] == 2:
            out.append(Violation(spath, "one spec per pair", f"transition {spec.from_mode} -> {spec.to_mode} declared more than once"))
        if spec.from_mode == spec.to_mode:
            out.append(Violation(spath, "no self-transition", f"transition {spec.from_mode} -> {spec.to_mode} targets its own mode"))

        src = modes.get(spec.from_mode)
        dst = modes.get(spec.to_mode)
        if src is None:
            out.append(Violation(f"{spath}.from", "mode exists", f"unknown mode {spec.from_mode!r}"))
        if dst is None:
            out.append(Violation(f"{spath}.to", "mode exists", f"unknown mode {spec.to_mode!r}"))

        if src is not None:
            src_tasks = set(src.task_names)
            for k, name in enumerate(spec.complete_set):
                if name not in src_tasks:
                    out.append(Violation(f"{spath}.complete[{k}]", "C(i,j) subset of from-mode", f"task {name!r} is not in mode {src.name!r}"))
            dup = [n for n, c in Counter(spec.complete_set).items() if c > 1]
            for name in dup:
                out.append(Violation(f"{spath}.complete", "C(i,j) is a set", f"task {name!r} listed more than once"))

        for name, value in spec.enablement_deadlines.items():
            if value < 0:
                out.append(Violation(f"{spath}.enable_deadlines.{name}", "enablement deadline >= 0", f"deadline {value} for task {name!r}"))
        if dst is not None:
            dst_tasks = dst.task_names
            for name in dst_tasks:
                if name not in spec.enablement_deadlines:
                    out.append(Violation(f"{spath}.enable_deadlines", "one deadline per to-mode task", f"missing enablement deadline for task {name!r}"))
            for name in spec.enablement_deadlines:
                if name not in dst_tasks:
                    out.append(Violation(f"{spath}.enable_deadlines.{name}", "one deadline per to-mode task", f"task {name!r} is not in mode {dst.name!r}"))

    return out
