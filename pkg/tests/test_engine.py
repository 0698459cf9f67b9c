import numpy as np
import pytest

from votesim.core import SimParams, init_world
from votesim.engine import (
    ReplayReport,
    ScenarioSchedule,
    ScheduleEntry,
    SweepCell,
    replay,
    run,
    sweep,
)


def small_params(**overrides):
    defaults = dict(num_voters=12, num_candidates=2, seed=5)
    defaults.update(overrides)
    return SimParams(**defaults)


class TestScheduleValidation:
    def test_entries_must_be_sorted(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            ScenarioSchedule(
                entries=(
                    ScheduleEntry(step=5, candidate=0, potential=0.5),
                    ScheduleEntry(step=2, candidate=0, potential=0.5),
                ),
                run_length=10,
            )

    def test_steps_must_fit_run_length(self):
        with pytest.raises(ValueError, match="step"):
            ScenarioSchedule(entries=(ScheduleEntry(step=10, candidate=0, potential=0.5),), run_length=10)

    def test_potential_range(self):
        with pytest.raises(ValueError, match="potential"):
            ScenarioSchedule(entries=(ScheduleEntry(step=0, candidate=0, potential=1.5),), run_length=10)

    def test_unknown_candidate_detected_at_run(self):
        schedule = ScenarioSchedule(entries=(ScheduleEntry(step=0, candidate=9, potential=0.5),), run_length=2)
        with pytest.raises(ValueError, match="unknown candidate"):
            run(small_params(), schedule=schedule)


class TestRun:
    def test_zero_length_run_records_initial_state_only(self):
        result = run(small_params(), schedule=ScenarioSchedule(run_length=0))
        assert len(result.trajectory.records) == 1
        assert result.trajectory.records[0].time == 0
        assert result.metrics.final == result.trajectory.records[0].tally
        assert len(result.metrics.abstention_series) == 1

    def test_everyone_near_a_clean_candidate_votes(self):
        # one candidate, long run, attraction only: every voter arrives and votes
        params = small_params(
            num_voters=30, num_candidates=1, max_openness=0.5, social_step=0.0, seed=21
        )
        world = init_world(params)
        assert world.voter_openness.min() > 0.02  # seed chosen so no voter is blind
        result = run(params, schedule=ScenarioSchedule(run_length=400))
        assert result.metrics.final.abstentions == 0

    def test_deterministic_repetition(self):
        params = small_params(num_voters=25, seed=99)
        schedule = ScenarioSchedule(
            entries=(ScheduleEntry(step=3, candidate=1, potential=0.7),), run_length=20
        )
        a = run(params, schedule=schedule, record_voters=True)
        b = run(params, schedule=schedule, record_voters=True)
        assert a.world == b.world
        for ra, rb in zip(a.trajectory.records, b.trajectory.records):
            assert ra.time == rb.time
            assert ra.repulsions == rb.repulsions
            assert ra.scandals == rb.scandals
            assert ra.tally == rb.tally
            assert np.array_equal(ra.voter_positions, rb.voter_positions)

    def test_scheduled_trigger_lands_at_next_step(self):
        params = small_params(appeasement_delta=0.0, falloff_rate=0.1)
        schedule = ScenarioSchedule(
            entries=(ScheduleEntry(step=3, candidate=0, potential=0.6),), run_length=6
        )
        records = run(params, schedule=schedule).trajectory.records
        assert all(r.repulsions == (0.0, 0.0) for r in records[: 3 + 1])
        assert records[4].repulsions[0] == pytest.approx(0.5)
        assert records[4].scandals == ((0, 0, pytest.approx(0.5)),)

    def test_metrics_conservation_every_step(self):
        params = small_params(num_voters=17)
        schedule = ScenarioSchedule(
            entries=(ScheduleEntry(step=1, candidate=0, potential=1.0),), run_length=15
        )
        result = run(params, schedule=schedule)
        assert [r.time for r in result.trajectory.records] == list(range(16))
        for record in result.trajectory.records:
            assert sum(record.tally.votes.values()) + record.tally.abstentions == 17

    def test_share_series_shape(self):
        result = run(small_params(), schedule=ScenarioSchedule(run_length=4))
        assert set(result.metrics.share_series) == {0, 1}
        assert all(len(s) == 5 for s in result.metrics.share_series.values())
        assert len(result.metrics.abstention_series) == 5


class TestReplay:
    def _fresh(self, record_voters=False):
        params = small_params(num_voters=8, seed=31)
        schedule = ScenarioSchedule(
            entries=(ScheduleEntry(step=2, candidate=1, potential=0.9),), run_length=10
        )
        result = run(params, schedule=schedule, record_voters=record_voters)
        return params, schedule, result

    def test_replay_of_fresh_run_is_clean(self):
        params, schedule, result = self._fresh()
        report = replay(result.trajectory, params, schedule=schedule)
        assert report == ReplayReport(ok=True, detail="all 11 records match")

    def test_tampered_repulsion_detected_at_exact_step(self):
        from dataclasses import replace

        params, schedule, result = self._fresh()
        records = list(result.trajectory.records)
        bad = replace(
            records[6],
            repulsions=(records[6].repulsions[0], records[6].repulsions[1] + 1e-9),
        )
        records[6] = bad
        tampered = replace(result.trajectory, records=tuple(records))
        report = replay(tampered, params, schedule=schedule)
        assert not report.ok
        assert report.first_divergence == 6
        assert "repulsions" in report.detail

    def test_wrong_seed_diverges_immediately(self):
        params, schedule, result = self._fresh(record_voters=True)
        report = replay(result.trajectory, SimParams(num_voters=8, num_candidates=2, seed=32), schedule=schedule)
        assert not report.ok
        assert report.first_divergence in (0, 1)

    def test_structural_mismatch_raises(self):
        params, schedule, result = self._fresh()
        with pytest.raises(ValueError, match="voter count"):
            replay(result.trajectory, SimParams(num_voters=9, num_candidates=2, seed=31), schedule=schedule)
        with pytest.raises(ValueError, match="records"):
            replay(result.trajectory, params, schedule=ScenarioSchedule(run_length=5))


class TestSweep:
    def test_singleton_sweep_equals_run(self):
        params = small_params(num_voters=10, seed=3)
        schedule = ScenarioSchedule(
            entries=(ScheduleEntry(step=1, candidate=0, potential=0.5),), run_length=8
        )
        cells = sweep(params, None, schedule, "scandal-potential", [0.5], [3])
        assert len(cells) == 1
        direct = run(SimParams(**{**params.__dict__, "seed": 3}), None, schedule)
        assert cells[0] == SweepCell(
            axis="scandal-potential", value=0.5, seed=3, metrics=direct.metrics
        )

    def test_zero_potential_matches_no_scandal_baseline(self):
        params = small_params(num_voters=15)
        template = ScenarioSchedule(
            entries=(ScheduleEntry(step=2, candidate=1, potential=0.8),), run_length=10
        )
        cells = sweep(params, None, template, "scandal-potential", [0.0], [1, 2])
        for cell in cells:
            baseline = run(
                SimParams(**{**params.__dict__, "seed": cell.seed}),
                None,
                ScenarioSchedule(run_length=10),
            )
            assert cell.metrics == baseline.metrics

    def test_param_axis_changes_field(self):
        params = small_params(num_voters=10)
        cells = sweep(params, None, ScenarioSchedule(run_length=3), "num-voters", [4, 6], [0])
        assert [c.metrics.final.num_voters for c in cells] == [4, 6]

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError, match="unknown sweep axis"):
            sweep(small_params(), None, ScenarioSchedule(run_length=2), "charisma", [1], [0])

    def test_parallel_equals_serial(self):
        params = small_params(num_voters=10)
        template = ScenarioSchedule(
            entries=(ScheduleEntry(step=0, candidate=0, potential=0.5),), run_length=6
        )
        serial = sweep(params, None, template, "falloff-rate", [0.0, 0.2], [1, 2])
        parallel = sweep(params, None, template, "falloff-rate", [0.0, 0.2], [1, 2], jobs=2)
        assert serial == parallel
