"""
Tests for the makespan bound and the transition condition
"""
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.analysis.condition import (
    check_system,
    check_transition_condition,
    is_valid_protocol,
    undeclared_transitions,
)
from src.analysis.makespan import JobSetSummary, min_enablement_deadline, upms
from src.errors import InvalidSystemError, UnknownTransitionError
from src.model.tasks import TaskSpec, TransitionSpec

times = st.lists(st.integers(min_value=0, max_value=30), max_size=10)
processors = st.integers(min_value=1, max_value=8)


class TestUpms:

    @pytest.mark.parametrize("ps, m, expected", [
        ([3, 5], 4, Fraction(5)),
        ([4, 4, 4], 2, Fraction(8)),
        ([], 3, Fraction(0)),
        ([3, 3, 3], 2, Fraction(6)),
        ([2, 3, 4], 1, Fraction(9)),
        ([1, 2, 3, 4], 3, Fraction(10, 3) + Fraction(2, 3) * 4),
    ])
    def test_known_values(self, ps, m, expected):
        assert upms(JobSetSummary.of(ps), m) == expected

    def test_exact_rational(self):
        value = upms(JobSetSummary.of([1, 1, 2]), 2)
        assert value == Fraction(3)
        assert upms(JobSetSummary.of([1, 2, 2]), 2) == Fraction(7, 2)

    def test_rejects_zero_processors(self):
        with pytest.raises(ValueError):
            upms(JobSetSummary.of([1]), 0)

    @given(ps=times, m=processors, extra=st.integers(min_value=0, max_value=30))
    @settings(max_examples=200)
    def test_monotone_in_jobs(self, ps, m, extra):
        assert upms(JobSetSummary.of(ps), m) <= upms(JobSetSummary.of(ps + [extra]), m)

    @given(ps=times, m=processors, data=st.data())
    @settings(max_examples=200)
    def test_monotone_in_processing_times(self, ps, m, data):
        bumped = [p + data.draw(st.integers(min_value=0, max_value=5)) for p in ps]
        assert upms(JobSetSummary.of(ps), m) <= upms(JobSetSummary.of(bumped), m)

    @given(ps=times, m=processors)
    @settings(max_examples=200)
    def test_antitone_in_processors(self, ps, m):
        assert upms(JobSetSummary.of(ps), m + 1) <= upms(JobSetSummary.of(ps), m)

    @given(ps=times, m=processors, k=st.integers(min_value=1, max_value=5))
    @settings(max_examples=100)
    def test_scales_linearly(self, ps, m, k):
        js = JobSetSummary.of(ps)
        assert upms(js.scaled(k), m) == k * upms(js, m)

    @given(ps=times, m=processors)
    @settings(max_examples=100)
    def test_between_trivial_bounds(self, ps, m):
        js = JobSetSummary.of(ps)
        assert max(Fraction(js.total, m), js.p_max) <= upms(js, m) <= js.total

    def test_min_enablement_deadline(self):
        assert min_enablement_deadline(TransitionSpec("a", "b", (), {"x": 9, "y": 4})) == 4
        with pytest.raises(ValueError):
            min_enablement_deadline(TransitionSpec("a", "b", (), {}))


class TestCondition:

    def test_two_cpu_transition(self, two_cpu_system):
        report = check_transition_condition(two_cpu_system, "normal", "degraded")
        assert report.upms_value == 7
        assert report.min_enable_deadline == 8
        assert report.satisfied
        assert report.slack == 1
        assert report.simulated_delay == 6
        assert report.worst_case_jobset.processing_times == (3, 2, 3, 3)

    def test_boundary_is_inclusive(self, boundary_system):
        report = check_transition_condition(boundary_system, "cruise", "landing")
        assert report.upms_value == 8 == report.min_enable_deadline
        assert report.satisfied and report.slack == 0

    def test_empty_complete_set_with_zero_deadlines(self, boundary_system):
        report = check_transition_condition(boundary_system, "landing", "cruise")
        assert report.upms_value == 0 and report.satisfied
        assert report.simulated_delay == 0

    def test_violated_transition(self, tight_system):
        report = check_transition_condition(tight_system, "old", "new")
        assert not report.satisfied
        assert report.slack == -1
        assert not is_valid_protocol(check_system(tight_system))

    def test_check_system_declaration_order(self, three_mode_system):
        reports = check_system(three_mode_system)
        assert [(r.from_mode, r.to_mode) for r in reports] == [(t.from_mode, t.to_mode) for t in three_mode_system.transitions]
        assert is_valid_protocol(reports)
        alert_idle = reports[4]
        assert alert_idle.upms_value == 6 and alert_idle.min_enable_deadline == 6

    def test_simulated_delay_never_exceeds_bound(self, three_mode_system, two_cpu_system, boundary_system):
        for system in (three_mode_system, two_cpu_system, boundary_system):
            for report in check_system(system):
                assert report.simulated_delay <= report.upms_value

    def test_unknown_transition(self, two_cpu_system):
        with pytest.raises(UnknownTransitionError):
            check_transition_condition(two_cpu_system, "degraded", "ghost")

    def test_invalid_system_rejected(self, two_cpu_system):
        mode = replace(two_cpu_system.modes[1], tasks=(TaskSpec("u1", 3, 2, 10),) + two_cpu_system.modes[1].tasks[1:])
        with pytest.raises(InvalidSystemError):
            check_system(replace(two_cpu_system, modes=(two_cpu_system.modes[0], mode)))

    def test_undeclared_transitions(self, two_cpu_system, tight_system):
        assert undeclared_transitions(two_cpu_system) == []
        assert undeclared_transitions(tight_system) == [("new", "old")]
