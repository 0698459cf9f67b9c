"""Run loops over the core kernel: schedules, trajectories, metrics, sweeps, replay."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import (
    ElectionResult,
    SimParams,
    WorldState,
    init_world,
    step,
    tally,
    trigger_scandal,
)

DEFAULT_RUN_LENGTH = 1000

#: Parameters a sweep may vary, mapped to the SimParams field (None means the
#: value replaces every scheduled scandal potential instead).
SWEEP_AXES: dict[str, str | None] = {
    "scandal-potential": None,
    "appeasement-delta": "appeasement_delta",
    "falloff-rate": "falloff_rate",
    "max-openness": "max_openness",
    "max-tolerance": "max_tolerance",
    "num-voters": "num_voters",
}


@dataclass(frozen=True)
class ScheduleEntry:
    step: int
    candidate: int
    potential: float


@dataclass(frozen=True)
class ScenarioSchedule:
    """Scripted scandal injections for headless, replayable runs."""

    entries: tuple[ScheduleEntry, ...] = ()
    run_length: int = DEFAULT_RUN_LENGTH

    def __post_init__(self) -> None:
        if self.run_length < 0:
            raise ValueError(f"run_length: must be >= 0, got {self.run_length}")
        prev = -1
        for i, entry in enumerate(self.entries):
            if entry.step < prev:
                raise ValueError(f"entries[{i}]: steps must be non-decreasing")
            prev = entry.step
            if not (0 <= entry.step < self.run_length):
                raise ValueError(
                    f"entries[{i}].step: must be in [0, {self.run_length}), got {entry.step}"
                )
            if not (0.0 <= entry.potential <= 1.0):
                raise ValueError(
                    f"entries[{i}].potential: must be within [0, 1], got {entry.potential}"
                )

    def for_step(self, t: int) -> tuple[ScheduleEntry, ...]:
        return tuple(e for e in self.entries if e.step == t)


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """State digest at one time index: repulsions, scandals, tally, optional voters."""

    time: int
    repulsions: tuple[float, ...]
    scandals: tuple[tuple[int, int, float], ...]  # (scandal id, target id, potential)
    tally: ElectionResult
    voter_positions: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    candidate_ids: tuple[int, ...]
    num_voters: int
    record_voters: bool
    records: tuple[TrajectoryRecord, ...]


@dataclass(frozen=True)
class RunMetrics:
    """Final outcome plus the per-step abstention / vote-share series."""

    final: ElectionResult
    abstention_series: tuple[float, ...]
    share_series: dict[int, tuple[float, ...]]


@dataclass(frozen=True, eq=False)
class RunResult:
    world: WorldState
    trajectory: Trajectory
    metrics: RunMetrics


@dataclass(frozen=True)
class ReplayReport:
    ok: bool
    first_divergence: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class SweepCell:
    axis: str
    value: float
    seed: int
    metrics: RunMetrics


def _record(world: WorldState, record_voters: bool) -> TrajectoryRecord:
    return TrajectoryRecord(
        time=world.time,
        repulsions=tuple(c.repulsion for c in world.candidates),
        scandals=tuple((s.id, s.target, s.potential) for s in world.scandals),
        tally=tally(world),
        voter_positions=world.voter_positions.copy() if record_voters else None,
    )


def run(
    params: SimParams,
    candidate_positions: Sequence[Sequence[float]] | None = None,
    schedule: ScenarioSchedule | None = None,
    record_voters: bool = False,
    labels: Sequence[str] | None = None,
) -> RunResult:
    """Initialize a world and advance it through the schedule.

    Scheduled scandals for step t are injected while the world is at time t,
    before that step runs, so their repulsion lands at time t+1. The
    trajectory holds one record per time index including the initial state.
    """
    if schedule is None:
        schedule = ScenarioSchedule()
    world = init_world(params, candidate_positions, labels)
    known = {c.id for c in world.candidates}
    for i, entry in enumerate(schedule.entries):
        if entry.candidate not in known:
            raise ValueError(f"schedule entries[{i}]: unknown candidate {entry.candidate}")

    by_step: dict[int, list[ScheduleEntry]] = {}
    for entry in schedule.entries:
        by_step.setdefault(entry.step, []).append(entry)

    records = [_record(world, record_voters)]
    for t in range(schedule.run_length):
        for entry in by_step.get(t, ()):
            world = trigger_scandal(world, entry.candidate, entry.potential)
        world = step(world)
        records.append(_record(world, record_voters))

    trajectory = Trajectory(
        candidate_ids=tuple(c.id for c in world.candidates),
        num_voters=world.num_voters,
        record_voters=record_voters,
        records=tuple(records),
    )
    return RunResult(world=world, trajectory=trajectory, metrics=_metrics(trajectory))


def _metrics(trajectory: Trajectory) -> RunMetrics:
    abstention = tuple(r.tally.abstention_rate for r in trajectory.records)
    shares = {
        cid: tuple(r.tally.share(cid) for r in trajectory.records)
        for cid in trajectory.candidate_ids
    }
    return RunMetrics(
        final=trajectory.records[-1].tally,
        abstention_series=abstention,
        share_series=shares,
    )


def replay(
    trajectory: Trajectory,
    params: SimParams,
    candidate_positions: Sequence[Sequence[float]] | None = None,
    schedule: ScenarioSchedule | None = None,
    labels: Sequence[str] | None = None,
) -> ReplayReport:
    """Re-execute a run and compare it record-by-record against a trajectory.

    Raises ValueError when the trajectory cannot have come from these run
    parameters (shape mismatch); content differences yield a report naming
    the first divergent step.
    """
    if schedule is None:
        schedule = ScenarioSchedule()
    fresh = run(params, candidate_positions, schedule, trajectory.record_voters, labels).trajectory
    if fresh.candidate_ids != trajectory.candidate_ids:
        raise ValueError("replay: candidate ids do not match the run parameters")
    if fresh.num_voters != trajectory.num_voters:
        raise ValueError("replay: voter count does not match the run parameters")
    if len(fresh.records) != len(trajectory.records):
        raise ValueError(
            f"replay: trajectory has {len(trajectory.records)} records, "
            f"run produces {len(fresh.records)}"
        )
    for expected, got in zip(fresh.records, trajectory.records):
        field = _first_record_difference(expected, got)
        if field is not None:
            return ReplayReport(
                ok=False,
                first_divergence=expected.time,
                detail=f"divergence at step {expected.time}: {field}",
            )
    return ReplayReport(ok=True, detail=f"all {len(fresh.records)} records match")


def _first_record_difference(a: TrajectoryRecord, b: TrajectoryRecord) -> str | None:
    if a.time != b.time:
        return "time"
    if a.repulsions != b.repulsions:
        return "repulsions"
    if a.scandals != b.scandals:
        return "scandals"
    if a.tally != b.tally:
        return "tally"
    if (a.voter_positions is None) != (b.voter_positions is None):
        return "voter_positions presence"
    if a.voter_positions is not None and not np.array_equal(a.voter_positions, b.voter_positions):
        return "voter_positions"
    return None


def _apply_axis(
    base: SimParams, schedule: ScenarioSchedule, axis: str, value: float, seed: int
) -> tuple[SimParams, ScenarioSchedule]:
    field = SWEEP_AXES[axis]
    params = replace(base, seed=seed)
    if field is None:
        entries = tuple(replace(e, potential=float(value)) for e in schedule.entries)
        return params, replace(schedule, entries=entries)
    if field == "num_voters":
        count = int(value)
        if count != value:
            raise ValueError(f"num-voters axis: values must be integers, got {value}")
        return replace(params, num_voters=count), schedule
    return replace(params, **{field: float(value)}), schedule


def _sweep_cell(
    spec: tuple[SimParams, tuple[tuple[float, float], ...] | None, ScenarioSchedule, str, float, int],
) -> SweepCell:
    base, positions, schedule, axis, value, seed = spec
    params, cell_schedule = _apply_axis(base, schedule, axis, value, seed)
    metrics = run(params, positions, cell_schedule).metrics
    return SweepCell(axis=axis, value=value, seed=seed, metrics=metrics)


def sweep(
    base: SimParams,
    candidate_positions: Sequence[Sequence[float]] | None,
    schedule_template: ScenarioSchedule,
    axis: str,
    values: Sequence[float],
    seeds: Sequence[int],
    jobs: int | None = None,
) -> list[SweepCell]:
    """Full cross product of values x seeds, one run per cell.

    Cells are independent; ``jobs`` > 1 computes them in worker processes.
    The returned order is (value, seed) row-major regardless of execution
    order.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {sorted(SWEEP_AXES)}")
    positions = (
        tuple(tuple(float(x) for x in p) for p in candidate_positions)
        if candidate_positions is not None
        else None
    )
    specs = [
        (base, positions, schedule_template, axis, float(value), int(seed))
        for value in values
        for seed in seeds
    ]
    if jobs is not None and jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, specs))
    return [_sweep_cell(spec) for spec in specs]
