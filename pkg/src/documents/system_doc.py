"""
Strict JSON documents: systems, arrival scenarios, transition scenarios and
MCR scripts
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple, Union

from src.errors import DocumentSchemaError, DocumentSyntaxError, InvalidSystemError
from src.model.checks import validate_system
from src.model.scenarios import ArrivalScenario, periodic_scenario
from src.model.tasks import (
    JobInstance,
    MCREvent,
    Mode,
    MultiModeSystem,
    Policy,
    TaskSpec,
    TransitionSpec,
    job_id_for,
)

logger = logging.getLogger(__name__)

DOCUMENT_VERSION = 1
PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    """Read a JSON file, mapping I/O and syntax problems to DocumentSyntaxError"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    except OSError as e:
        raise DocumentSyntaxError(f"{path}: cannot read file: {e.strerror}")


class _Schema:
    """Collects schema problems with their JSON paths"""

    def __init__(self):
        self.problems: List[str] = []

    def object(self, value: Any, path: str, required: Tuple[str, ...], optional: Tuple[str, ...] = ()) -> bool:
        if not isinstance(value, dict):
            self.problems.append(f"{path}: expected an object")
            return False
        for key in required:
            if key not in value:
                self.problems.append(f"{path}.{key}: missing required key")
        for key in value:
            if key not in required and key not in optional:
                self.problems.append(f"{path}.{key}: unknown key")
        return all(key in value for key in required)

    def integer(self, value: Any, path: str) -> bool:
        if isinstance(value, bool) or not isinstance(value, int):
            self.problems.append(f"{path}: expected an integer")
            return False
        return True

    def string(self, value: Any, path: str) -> bool:
        if not isinstance(value, str) or not value:
            self.problems.append(f"{path}: expected a non-empty string")
            return False
        return True

    def array(self, value: Any, path: str) -> bool:
        if not isinstance(value, list):
            self.problems.append(f"{path}: expected an array")
            return False
        return True

    def version(self, doc: Dict[str, Any]) -> None:
        if self.integer(doc["version"], "$.version") and doc["version"] != DOCUMENT_VERSION:
            self.problems.append(f"$.version: unsupported version {doc['version']} (expected {DOCUMENT_VERSION})")

    def raise_if_any(self) -> None:
        if self.problems:
            raise DocumentSchemaError(self.problems)


def system_from_document(doc: Any) -> MultiModeSystem:
    """
    Build and validate a system from a decoded document

    Raises:
        DocumentSchemaError: Missing, unknown or mistyped keys
        InvalidSystemError: Model invariants broken (violations carry JSON paths)
    """
    schema = _Schema()
    if not schema.object(doc, "$", ("version", "processors", "modes", "transitions")):
        schema.raise_if_any()
    schema.version(doc)
    schema.integer(doc["processors"], "$.processors")

    modes: List[Mode] = []
    if schema.array(doc["modes"], "$.modes"):
        for i, raw in enumerate(doc["modes"]):
            mpath = f"$.modes[{i}]"
            if not schema.object(raw, mpath, ("name", "policy", "tasks")):
                continue
            schema.string(raw["name"], f"{mpath}.name")
            policy = Policy.EDF
            try:
                policy = Policy(raw["policy"])
            except ValueError:
                schema.problems.append(f"{mpath}.policy: expected one of {[p.value for p in Policy]}")
            tasks: List[TaskSpec] = []
            if schema.array(raw["tasks"], f"{mpath}.tasks"):
                for k, t in enumerate(raw["tasks"]):
                    tpath = f"{mpath}.tasks[{k}]"
                    if not schema.object(t, tpath, ("name", "wcet", "deadline", "period")):
                        continue
                    ok = schema.string(t["name"], f"{tpath}.name")
                    for key in ("wcet", "deadline", "period"):
                        ok = schema.integer(t[key], f"{tpath}.{key}") and ok
                    if ok:
                        tasks.append(TaskSpec(t["name"], t["wcet"], t["deadline"], t["period"]))
            modes.append(Mode(str(raw["name"]), tuple(tasks), policy))

    transitions: List[TransitionSpec] = []
    if schema.array(doc["transitions"], "$.transitions"):
        for i, raw in enumerate(doc["transitions"]):
            spath = f"$.transitions[{i}]"
            if not schema.object(raw, spath, ("from", "to", "complete", "enable_deadlines")):
                continue
            schema.string(raw["from"], f"{spath}.from")
            schema.string(raw["to"], f"{spath}.to")
            complete: List[str] = []
            if schema.array(raw["complete"], f"{spath}.complete"):
                for k, name in enumerate(raw["complete"]):
                    if schema.string(name, f"{spath}.complete[{k}]"):
                        complete.append(name)
            deadlines: Dict[str, int] = {}
            if isinstance(raw["enable_deadlines"], dict):
                for name, value in raw["enable_deadlines"].items():
                    if schema.integer(value, f"{spath}.enable_deadlines.{name}"):
                        deadlines[name] = value
            else:
                schema.problems.append(f"{spath}.enable_deadlines: expected an object")
            transitions.append(TransitionSpec(str(raw["from"]), str(raw["to"]), tuple(complete), deadlines))

    schema.raise_if_any()
    system = MultiModeSystem(doc["processors"], tuple(modes), tuple(transitions))
    violations = validate_system(system)
    if violations:
        raise InvalidSystemError(violations)
    return system


def parse_system(path: PathLike) -> MultiModeSystem:
    """Read, strictly parse and validate a system document"""
    system = system_from_document(load_json(path))
    logger.info("loaded %s: %d mode(s), %d transition(s), m=%d",
                path, len(system.modes), len(system.transitions), system.processors)
    return system


def system_to_document(system: MultiModeSystem) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "processors": system.processors,
        "modes": [
            {
                "name": mode.name,
                "policy": mode.policy.value,
                "tasks": [
                    {"name": t.name, "wcet": t.wcet, "deadline": t.deadline, "period": t.min_interarrival}
                    for t in mode.tasks
                ],
            }
            for mode in system.modes
        ],
        "transitions": [
            {
                "from": spec.from_mode,
                "to": spec.to_mode,
                "complete": list(spec.complete_set),
                "enable_deadlines": dict(spec.enablement_deadlines),
            }
            for spec in system.transitions
        ],
    }


def _arrival_scenario(raw: Any, path: str, schema: _Schema, versioned: bool) -> ArrivalScenario:
    required = ("version", "horizon", "arrivals") if versioned else ("horizon", "arrivals")
    if not schema.object(raw, path, required):
        return ArrivalScenario(0)
    if versioned:
        schema.version(raw)
    schema.integer(raw["horizon"], f"{path}.horizon")
    arrivals = {}
    if isinstance(raw["arrivals"], dict):
        for name, pairs in raw["arrivals"].items():
            apath = f"{path}.arrivals.{name}"
            if not schema.array(pairs, apath):
                continue
            parsed = []
            for k, pair in enumerate(pairs):
                if (
                    isinstance(pair, list) and len(pair) == 2
                    and schema.integer(pair[0], f"{apath}[{k}][0]")
                    and schema.integer(pair[1], f"{apath}[{k}][1]")
                ):
                    parsed.append((pair[0], pair[1]))
                elif not isinstance(pair, list) or len(pair) != 2:
                    schema.problems.append(f"{apath}[{k}]: expected [arrival, exec_req]")
            arrivals[name] = tuple(parsed)
    else:
        schema.problems.append(f"{path}.arrivals: expected an object")
    horizon = raw["horizon"] if isinstance(raw["horizon"], int) else 0
    return ArrivalScenario(horizon, arrivals)


def _check_scenario(scenario: ArrivalScenario, mode: Mode, path: str) -> None:
    violations = scenario.separation_violations(mode)
    if violations:
        raise DocumentSchemaError([f"{path}{str(v)[1:]}" for v in violations])


def parse_arrival_scenario(path: PathLike, mode: Mode) -> ArrivalScenario:
    """Arrival scenario document for one mode, checked for sporadic separation"""
    schema = _Schema()
    scenario = _arrival_scenario(load_json(path), "$", schema, versioned=True)
    schema.raise_if_any()
    _check_scenario(scenario, mode, "$")
    return scenario


def parse_transition_scenario(
    path: PathLike,
    system: MultiModeSystem,
    from_mode: str,
) -> Tuple[int, List[JobInstance]]:
    """
    Rem-jobs at an MCR: {"version", "t_mcr", "rem_jobs": [{"task", "arrival", "remaining"}]}

    Returns:
        (t_mcr, rem-jobs with their true release, remaining work and deadline)
    """
    doc = load_json(path)
    schema = _Schema()
    if not schema.object(doc, "$", ("version", "t_mcr", "rem_jobs")):
        schema.raise_if_any()
    schema.version(doc)
    schema.integer(doc["t_mcr"], "$.t_mcr")
    mode = system.mode(from_mode)
    mode_index = system.mode_index(from_mode)
    names = set(mode.task_names)
    jobs: List[JobInstance] = []
    if schema.array(doc["rem_jobs"], "$.rem_jobs"):
        for k, raw in enumerate(doc["rem_jobs"]):
            rpath = f"$.rem_jobs[{k}]"
            if not schema.object(raw, rpath, ("task", "arrival", "remaining")):
                continue
            ok = schema.string(raw["task"], f"{rpath}.task")
            ok = schema.integer(raw["arrival"], f"{rpath}.arrival") and ok
            ok = schema.integer(raw["remaining"], f"{rpath}.remaining") and ok
            if not ok:
                continue
            if raw["task"] not in names:
                schema.problems.append(f"{rpath}.task: mode {from_mode!r} has no task {raw['task']!r}")
                continue
            task = mode.task(raw["task"])
            if not 0 <= raw["remaining"] <= task.wcet:
                schema.problems.append(f"{rpath}.remaining: must lie in [0, {task.wcet}]")
                continue
            jobs.append(JobInstance(
                job_id=job_id_for(from_mode, task.name, "rem"),
                arrival=raw["arrival"],
                exec_req=raw["remaining"],
                abs_deadline=raw["arrival"] + task.deadline,
                task=task.name,
                mode_index=mode_index,
                task_index=mode.task_index(task.name),
                job_index=0,
                rel_deadline=task.deadline,
            ))
    schema.raise_if_any()
    return doc["t_mcr"], jobs


def parse_mcr_script(
    path: PathLike,
    system: MultiModeSystem,
) -> Tuple[str, Dict[str, ArrivalScenario], List[MCREvent]]:
    """
    MCR script: initial mode, per-mode scenarios (periodic over the horizon
    when absent) and the MCR list

    Returns:
        (initial_mode, scenarios, mcrs)
    """
    doc = load_json(path)
    schema = _Schema()
    if not schema.object(doc, "$", ("version", "initial_mode", "horizon", "mcrs"), ("scenarios",)):
        schema.raise_if_any()
    schema.version(doc)
    schema.string(doc["initial_mode"], "$.initial_mode")
    schema.integer(doc["horizon"], "$.horizon")
    known = set(system.mode_names)
    if isinstance(doc["initial_mode"], str) and doc["initial_mode"] not in known:
        schema.problems.append(f"$.initial_mode: unknown mode {doc['initial_mode']!r}")

    scenarios: Dict[str, ArrivalScenario] = {}
    raw_scenarios: Mapping[str, Any] = doc.get("scenarios", {})
    if not isinstance(raw_scenarios, dict):
        schema.problems.append("$.scenarios: expected an object")
        raw_scenarios = {}
    for name, raw in raw_scenarios.items():
        if name not in known:
            schema.problems.append(f"$.scenarios.{name}: unknown mode")
            continue
        scenarios[name] = _arrival_scenario(raw, f"$.scenarios.{name}", schema, versioned=False)

    mcrs: List[MCREvent] = []
    if schema.array(doc["mcrs"], "$.mcrs"):
        for k, raw in enumerate(doc["mcrs"]):
            rpath = f"$.mcrs[{k}]"
            if not schema.object(raw, rpath, ("time", "to")):
                continue
            if schema.integer(raw["time"], f"{rpath}.time") and schema.string(raw["to"], f"{rpath}.to"):
                if raw["to"] not in known:
                    schema.problems.append(f"{rpath}.to: unknown mode {raw['to']!r}")
                else:
                    mcrs.append(MCREvent(raw["time"], raw["to"]))
    schema.raise_if_any()

    for name, scenario in scenarios.items():
        _check_scenario(scenario, system.mode(name), f"$.scenarios.{name}")
    horizon = doc["horizon"]
    for mode in system.modes:
        scenarios.setdefault(mode.name, periodic_scenario(mode, max(horizon, 0)))
    return doc["initial_mode"], scenarios, mcrs
