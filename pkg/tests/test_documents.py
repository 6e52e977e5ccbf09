"""
Tests for document parsing, the trace codec, Gantt charts and report rendering
"""
import json
from fractions import Fraction

import pytest

from src.analysis.condition import check_system
from src.documents.gantt import render_gantt
from src.documents.reports import fraction_str, reports_table, transition_report_dict
from src.documents.system_doc import (
    parse_arrival_scenario,
    parse_mcr_script,
    parse_system,
    parse_transition_scenario,
    system_from_document,
    system_to_document,
)
from src.documents.trace_doc import dump_trace, parse_trace, read_trace, write_trace
from src.engine.priorities import PriorityAssignment
from src.engine.simulator import simulate
from src.errors import DocumentSchemaError, DocumentSyntaxError, InvalidSystemError
from src.model.scenarios import build_worst_case_remjobs
from src.protocol.transition import run_transition
from src.validation.oracles import ready_jobs

from conftest import data_path


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return str(path)


class TestSystemDocuments:

    def test_document_round_trip(self, two_cpu_system):
        assert system_from_document(system_to_document(two_cpu_system)) == two_cpu_system

    def test_invalid_json(self, tmp_path):
        with pytest.raises(DocumentSyntaxError, match="invalid JSON"):
            parse_system(_write(tmp_path, "bad.json", "{not json"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentSyntaxError):
            parse_system(str(tmp_path / "missing.json"))

    def test_schema_problems_are_collected(self, two_cpu_path):
        with open(two_cpu_path, encoding="utf-8") as f:
            doc = json.load(f)
        doc["extra"] = 1
        doc["modes"][0]["tasks"][0]["wcet"] = "3"
        doc["modes"][1]["policy"] = "rm"
        with pytest.raises(DocumentSchemaError) as info:
            system_from_document(doc)
        problems = "\n".join(info.value.problems)
        assert "$.extra: unknown key" in problems
        assert "$.modes[0].tasks[0].wcet: expected an integer" in problems
        assert "$.modes[1].policy" in problems

    def test_booleans_are_not_integers(self, two_cpu_path):
        with open(two_cpu_path, encoding="utf-8") as f:
            doc = json.load(f)
        doc["processors"] = True
        with pytest.raises(DocumentSchemaError):
            system_from_document(doc)

    def test_unsupported_version(self, two_cpu_path):
        with open(two_cpu_path, encoding="utf-8") as f:
            doc = json.load(f)
        doc["version"] = 2
        with pytest.raises(DocumentSchemaError, match="unsupported version"):
            system_from_document(doc)

    def test_semantic_violations(self, two_cpu_path):
        with open(two_cpu_path, encoding="utf-8") as f:
            doc = json.load(f)
        doc["modes"][0]["tasks"][1]["deadline"] = 1
        with pytest.raises(InvalidSystemError) as info:
            system_from_document(doc)
        assert info.value.violations[0].path == "$.modes[0].tasks[1].deadline"


class TestScenarioDocuments:

    def test_arrival_scenario(self, two_cpu_system):
        scenario = parse_arrival_scenario(data_path("scenarios", "normal_sporadic.json"), two_cpu_system.mode("normal"))
        assert scenario.horizon == 30
        assert scenario.arrivals["t3"] == ((1, 3), (12, 3))

    def test_arrival_scenario_separation(self, tmp_path, two_cpu_system):
        path = _write(tmp_path, "s.json", {"version": 1, "horizon": 20, "arrivals": {"t1": [[0, 3], [4, 3]]}})
        with pytest.raises(DocumentSchemaError, match="separation"):
            parse_arrival_scenario(path, two_cpu_system.mode("normal"))

    def test_transition_scenario(self, two_cpu_system):
        t_mcr, jobs = parse_transition_scenario(data_path("scenarios", "mcr_at_11.json"), two_cpu_system, "normal")
        assert t_mcr == 11
        assert [(j.job_id, j.arrival, j.exec_req, j.abs_deadline) for j in jobs] == [
            ("normal.t3.rem", 8, 2, 16),
            ("normal.t4.rem", 8, 3, 16),
        ]

    def test_transition_scenario_rejects_excess_work(self, tmp_path, two_cpu_system):
        path = _write(tmp_path, "t.json", {"version": 1, "t_mcr": 3, "rem_jobs": [{"task": "t2", "arrival": 0, "remaining": 5}]})
        with pytest.raises(DocumentSchemaError, match="remaining"):
            parse_transition_scenario(path, two_cpu_system, "normal")

    def test_mcr_script(self, two_cpu_system):
        initial, scenarios, mcrs = parse_mcr_script(data_path("scripts", "two_cpu_run.json"), two_cpu_system)
        assert initial == "normal"
        assert [(e.time, e.target_mode) for e in mcrs] == [(11, "degraded"), (30, "normal")]
        assert set(scenarios) == {"normal", "degraded"}
        assert scenarios["degraded"].arrivals["u2"] == ((0, 5), (12, 5), (24, 5), (36, 5))

    def test_mcr_script_unknown_mode(self, tmp_path, two_cpu_system):
        path = _write(tmp_path, "m.json", {"version": 1, "initial_mode": "x", "horizon": 10, "mcrs": [{"time": 1, "to": "y"}]})
        with pytest.raises(DocumentSchemaError) as info:
            parse_mcr_script(path, two_cpu_system)
        assert len(info.value.problems) == 2


class TestTraceDocuments:

    def _trace(self):
        jobs = ready_jobs([2, 3, 4])
        return simulate(jobs, PriorityAssignment(("J1", "J2", "J3")), 2)

    def test_round_trip_is_byte_identical(self):
        text = dump_trace(self._trace(), {"note": "x"})
        trace, meta = parse_trace(text)
        assert meta == {"note": "x"}
        assert dump_trace(trace, meta) == text

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        original = self._trace()
        write_trace(path, original)
        trace, _ = read_trace(path)
        assert trace.slices == original.slices
        assert trace.completions == original.completions

    def test_records(self):
        lines = dump_trace(self._trace()).splitlines()
        assert json.loads(lines[0]) == {"kind": "header", "version": 1, "m": 2, "meta": {}}
        assert '{"t0":2,"t1":6,"cpu":1,"job":"J3"}' in lines

    def test_rejects_bad_records(self):
        with pytest.raises(DocumentSchemaError):
            parse_trace('{"kind":"header","version":1,"m":1,"meta":{}}\n{"t":0,"ev":"BOOM","job":"a"}\n')
        with pytest.raises(DocumentSyntaxError):
            parse_trace('{"kind":"header","version":1,"m":1,"meta":{}}\n{oops\n')
        with pytest.raises(DocumentSchemaError):
            parse_trace("")


class TestRendering:

    def test_gantt_rows_and_markers(self, two_cpu_system):
        remjobs = build_worst_case_remjobs(two_cpu_system, "normal", "degraded")
        result = run_transition(two_cpu_system, "normal", "degraded", remjobs, 0)
        chart = render_gantt(result.rem_schedule, markers=[(0, "MCR"), (result.t_enable, "enable")], start=0)
        lines = chart.splitlines()
        assert lines[0].startswith("P1  |") and lines[1].startswith("P2  |")
        assert lines[0] == "P1  |AAADDD|"
        assert lines[1] == "P2  |BBCCC.|"
        assert "^ enable @ 6" in chart
        assert "legend: A=normal.t1.rem" in chart

    def test_gantt_scales_wide_schedules(self):
        trace = simulate(ready_jobs([300]), PriorityAssignment(("J1",)), 1)
        chart = render_gantt(trace, max_width=100)
        assert "(1 column = 3 ticks)" in chart
        assert chart.splitlines()[0] == "P1  |" + "A" * 100 + "|"

    def test_empty_gantt(self):
        assert render_gantt(simulate([], PriorityAssignment(()), 1)) == "(empty schedule)"

    def test_report_dict_uses_exact_fractions(self, three_mode_system, two_cpu_system):
        report = check_system(two_cpu_system)[0]
        payload = transition_report_dict(report)
        assert payload["upms"] == "7" and payload["slack"] == "1"
        assert payload["simulated_delay"] == 6
        assert fraction_str(Fraction(13, 2)) == "13/2"
        table = reports_table(check_system(three_mode_system))
        assert "alert" in table and "VIOLATED" not in table
