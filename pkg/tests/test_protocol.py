"""
Tests for the phase machine, single transitions and full multi-mode runs
"""
import pytest

from src.engine.priorities import assign_priorities
from src.engine.simulator import simulate
from src.errors import InvalidSystemError, ModeChangeError, NotCompletableTaskError, ProtocolError, UnknownTransitionError
from src.model.scenarios import ArrivalScenario, build_worst_case_remjobs, periodic_scenario
from src.model.tasks import JobInstance, MCREvent, MultiModeSystem, TransitionSpec
from src.protocol.multimode import run_multimode
from src.protocol.phases import PhaseMachine, Steady, Transition
from src.protocol.transition import abort_and_collect, run_transition


def _periodic(system: MultiModeSystem, horizon: int):
    return {mode.name: periodic_scenario(mode, horizon) for mode in system.modes}


class TestPhaseMachine:

    def test_steady_transition_steady(self):
        machine = PhaseMachine("a")
        assert machine.request(5, "b") == Transition("a", "b", 5)
        assert machine.in_transition and machine.mode == "a"
        assert machine.complete(9) == Steady("b", 9)
        assert [type(p).__name__ for p in machine.history] == ["Steady", "Transition", "Steady"]

    def test_mcr_during_transition_is_out_of_model(self):
        machine = PhaseMachine("a")
        machine.request(5, "b")
        with pytest.raises(ProtocolError, match="MCR during transition is out of model"):
            machine.request(6, "a")

    def test_mcr_before_enablement_is_out_of_model(self):
        machine = PhaseMachine("a")
        machine.request(5, "b")
        machine.complete(9)
        with pytest.raises(ProtocolError, match="MCR during transition is out of model"):
            machine.request(7, "a")

    def test_mcr_at_enablement_instant_is_accepted(self):
        machine = PhaseMachine("a")
        machine.request(5, "b")
        machine.complete(9)
        assert machine.request(9, "a").t_mcr == 9

    def test_complete_without_transition(self):
        with pytest.raises(ProtocolError):
            PhaseMachine("a").complete(3)


class TestAbortAndCollect:

    def _jobs(self):
        return [
            JobInstance("n.t1.1", 0, 2, 8, task="t1", task_index=0, job_index=1),
            JobInstance("n.t1.2", 8, 3, 16, task="t1", task_index=0, job_index=2),
            JobInstance("n.t2.2", 8, 1, 16, task="t2", task_index=1, job_index=2),
            JobInstance("n.t3.2", 8, 0, 16, task="t3", task_index=2, job_index=2),
        ]

    def test_split(self):
        spec = TransitionSpec("n", "m", ("t1", "t3"), {})
        aborted, remjobs = abort_and_collect(self._jobs(), spec)
        assert [j.job_id for j in remjobs] == ["n.t1.2"]
        assert [j.job_id for j in aborted] == ["n.t1.1", "n.t2.2"]
        assert remjobs[0].exec_req == 3 and remjobs[0].abs_deadline == 16


class TestRunTransition:

    def test_worst_case_common_enablement(self, two_cpu_system):
        remjobs = build_worst_case_remjobs(two_cpu_system, "normal", "degraded")
        result = run_transition(two_cpu_system, "normal", "degraded", remjobs, 0)
        assert result.t_enable == 6 and result.delay == 6
        assert {v.enabled_at for v in result.enablement_report} == {6}
        assert [v.deadline for v in result.enablement_report] == [8, 9, 10]
        assert result.enablement_met and result.remjob_deadline_report.all_met
        assert result.delay <= 7

    def test_shifted_mcr(self, two_cpu_system):
        remjobs = [
            JobInstance("normal.t3.2", 8, 2, 16, task="t3", task_index=2, job_index=2, rel_deadline=8),
            JobInstance("normal.t4.2", 8, 3, 16, task="t4", task_index=3, job_index=2, rel_deadline=8),
        ]
        result = run_transition(two_cpu_system, "normal", "degraded", remjobs, 11)
        assert result.t_enable == 14 and result.delay == 3
        assert [v.deadline for v in result.enablement_report] == [19, 20, 21]
        assert result.all_met

    def test_no_remjobs_enables_at_mcr(self, boundary_system):
        result = run_transition(boundary_system, "landing", "cruise", [], 4)
        assert result.t_enable == 4 and result.delay == 0 and result.all_met

    def test_boundary_enablement_meets_deadline(self, boundary_system):
        remjobs = build_worst_case_remjobs(boundary_system, "cruise", "landing")
        result = run_transition(boundary_system, "cruise", "landing", remjobs, 0)
        assert result.t_enable == 8
        assert result.enablement_met

    def test_late_enablement_is_reported(self, tight_system):
        remjobs = build_worst_case_remjobs(tight_system, "old", "new")
        result = run_transition(tight_system, "old", "new", remjobs, 0)
        assert result.t_enable == 8
        assert not result.enablement_met and not result.all_met

    def test_rejects_task_outside_complete_set(self, two_cpu_system):
        job = JobInstance("degraded.u1.rem", 0, 3, 10, task="u1")
        with pytest.raises(NotCompletableTaskError, match="not a completable task"):
            run_transition(two_cpu_system, "degraded", "normal", [job], 0)

    def test_rejects_duplicate_and_future_remjobs(self, two_cpu_system):
        a = JobInstance("x1", 0, 1, 12, task="u2")
        b = JobInstance("x2", 1, 1, 13, task="u2")
        with pytest.raises(ProtocolError):
            run_transition(two_cpu_system, "degraded", "normal", [a, b], 2)
        with pytest.raises(ProtocolError):
            run_transition(two_cpu_system, "degraded", "normal", [b], 0)

    def test_undeclared_transition(self, tight_system):
        with pytest.raises(UnknownTransitionError):
            run_transition(tight_system, "new", "old", [], 0)

    def test_given_priorities_are_restricted(self, two_cpu_system):
        remjobs = build_worst_case_remjobs(two_cpu_system, "normal", "degraded")
        prio = assign_priorities("fifo", list(reversed(remjobs)) + [JobInstance("other", 0, 1, None)])
        result = run_transition(two_cpu_system, "normal", "degraded", remjobs, 0, prio=prio)
        assert result.t_enable <= 7


class TestRunMultimode:

    def test_scripted_run(self, two_cpu_system):
        mcrs = [MCREvent(11, "degraded"), MCREvent(30, "normal")]
        run = run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 40), mcrs)
        assert [(p.kind, p.mode, p.start, p.end) for p in run.phases[:4]] == [
            ("steady", "normal", 0, 11),
            ("transition", "normal", 11, 14),
            ("steady", "degraded", 14, 30),
            ("transition", "degraded", 30, 32),
        ]
        assert run.phases[4].mode == "normal" and run.phases[4].start == 32
        assert [j.job_id for j in run.transitions[0].rem_jobs] == ["normal.t3.2", "normal.t4.2"]
        assert run.transitions[1].rem_jobs[0].job_id == "degraded.u2.2"
        assert run.all_met

    def test_job_ids_unique_across_revisits(self, two_cpu_system):
        mcrs = [MCREvent(11, "degraded"), MCREvent(30, "normal")]
        run = run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 40), mcrs)
        ids = [v.job_id for v in run.deadline_report.verdicts]
        assert len(ids) == len(set(ids))
        assert "normal.t1.3" in ids

    def test_aborts_tasks_outside_complete_set(self, two_cpu_system):
        run = run_multimode(two_cpu_system, "degraded", _periodic(two_cpu_system, 30), [MCREvent(15, "normal")])
        # u1 and u3 released at 10 complete by 13; u2 released at 12 runs [13, 18)
        assert run.aborted_jobs == []
        assert [j.job_id for j in run.transitions[0].rem_jobs] == ["degraded.u2.2"]
        run = run_multimode(two_cpu_system, "degraded", _periodic(two_cpu_system, 30), [MCREvent(11, "normal")])
        assert run.aborted_jobs == ["degraded.u1.2", "degraded.u3.2"]

    def test_combined_trace_is_wellformed_per_processor(self, two_cpu_system):
        mcrs = [MCREvent(11, "degraded")]
        run = run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 20), mcrs)
        combined = run.combined()
        per_cpu = {}
        for s in combined.slices:
            per_cpu.setdefault(s.processor, []).append(s)
        for slices in per_cpu.values():
            for prev, cur in zip(slices, slices[1:]):
                assert cur.start >= prev.end
        arrivals = [e.job_id for e in combined.events if e.kind.value == "ARRIVAL"]
        assert len(arrivals) == len(set(arrivals))

    def test_no_mcr_is_a_steady_run(self, three_mode_system):
        scenarios = _periodic(three_mode_system, 36)
        run = run_multimode(three_mode_system, "patrol", scenarios, [])
        assert len(run.phases) == 1 and run.transitions == []
        assert run.all_met

        mode = three_mode_system.mode("patrol")
        jobs = scenarios["patrol"].to_jobs(mode, three_mode_system.mode_index("patrol"))
        plain = simulate(jobs, assign_priorities(mode.policy, jobs), three_mode_system.processors)
        combined = run.combined()
        assert combined.slices == sorted(plain.slices, key=lambda s: (s.start, s.processor))
        assert combined.completions == plain.completions

    def test_empty_complete_set_enables_at_the_mcr(self, boundary_system):
        run = run_multimode(boundary_system, "landing", _periodic(boundary_system, 40), [MCREvent(7, "cruise")])
        assert run.transitions[0].rem_jobs == []
        assert run.transitions[0].t_enable == 7
        assert [(p.kind, p.start) for p in run.phases[:2]] == [("steady", 0), ("transition", 7)]
        assert run.phases[1].end == 7
        last = run.phases[-1]
        assert (last.kind, last.mode, last.start) == ("steady", "cruise", 7)
        assert run.all_met

    def test_rejects_out_of_order_mcrs(self, two_cpu_system):
        with pytest.raises(ProtocolError):
            run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 40), [MCREvent(11, "degraded"), MCREvent(11, "normal")])
        with pytest.raises(ProtocolError):
            run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 40), [MCREvent(-1, "degraded")])

    def test_mcr_before_enablement(self, two_cpu_system):
        with pytest.raises(ProtocolError, match="out of model"):
            run_multimode(two_cpu_system, "normal", _periodic(two_cpu_system, 40), [MCREvent(11, "degraded"), MCREvent(12, "normal")])

    def test_invalid_system(self, two_cpu_system):
        broken = MultiModeSystem(0, two_cpu_system.modes, two_cpu_system.transitions)
        with pytest.raises(InvalidSystemError):
            run_multimode(broken, "normal", _periodic(two_cpu_system, 10), [])

    def test_missing_scenario(self, two_cpu_system):
        scenarios = {"normal": ArrivalScenario(10, {})}
        with pytest.raises(ModeChangeError, match="no arrival scenario"):
            run_multimode(two_cpu_system, "normal", scenarios, [MCREvent(2, "degraded")])
