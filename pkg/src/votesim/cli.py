"""``simcli``: headless runs, parameter sweeps, and trajectory replay."""

from __future__ import annotations

import csv
import os
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import engine
from .engine import RunMetrics
from .scenario import ScenarioError, ScenarioFile, load_scenario
from .trajectory import TrajectoryFormatError, read_trajectory, write_trajectory

TRAJECTORY_FILENAME = "trajectory.bin-v1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _color_enabled() -> bool:
    return not os.environ.get("SIMCLI_NO_COLOR")


def _fail(code: str, message: str, exit_code: int = EXIT_ERROR) -> None:
    text = f"error[{code}]: {message}"
    if _color_enabled():
        text = click.style(text, fg="red")
    click.echo(text, err=True)
    sys.exit(exit_code)


def _ok(message: str) -> None:
    if _color_enabled():
        message = click.style(message, fg="green")
    click.echo(message)


def _load(scenario_path: str) -> ScenarioFile:
    try:
        return load_scenario(scenario_path)
    except ScenarioError as exc:
        _fail("SIMCLI_SCHEMA", str(exc), EXIT_USAGE)
        raise AssertionError("unreachable")


def _effective(scenario: ScenarioFile, seed: int | None) -> ScenarioFile:
    if seed is None:
        return scenario
    return replace(scenario, params=replace(scenario.params, seed=seed))


def _writer(path: Path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def _write_result_csv(path: Path, seed: int, metrics: RunMetrics, labels: dict[int, str]) -> None:
    fh, w = _writer(path)
    with fh:
        w.writerow(["seed", "kind", "id", "label", "votes", "share"])
        for cid in sorted(metrics.final.votes):
            w.writerow(
                [seed, "candidate", cid, labels[cid], metrics.final.votes[cid],
                 metrics.final.share(cid)]
            )
        w.writerow([seed, "abstention", "", "", metrics.final.abstentions,
                    metrics.final.abstention_rate])


def _write_series_csv(path: Path, seed: int, metrics: RunMetrics) -> None:
    candidate_ids = sorted(metrics.share_series)
    fh, w = _writer(path)
    with fh:
        w.writerow(["seed", "step", "abstention_rate"] + [f"share_{cid}" for cid in candidate_ids])
        for step_idx, rate in enumerate(metrics.abstention_series):
            row = [seed, step_idx, rate]
            row += [metrics.share_series[cid][step_idx] for cid in candidate_ids]
            w.writerow(row)


@click.group()
def main() -> None:
    """Deterministic election simulator: run scenarios, sweep parameters, replay."""


@main.command("run")
@click.argument("scenario_path", metavar="SCENARIO", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_dir", default="out", help="Output directory.", show_default=True)
@click.option("--record-voters", is_flag=True, help="Record voter positions in the trajectory.")
def cmd_run(scenario_path: str, seed: int | None, out_dir: str, record_voters: bool) -> None:
    """Execute one scenario and write result.csv, series.csv and the trajectory."""
    scenario = _effective(_load(scenario_path), seed)
    record = record_voters or scenario.record_voters
    try:
        result = engine.run(
            scenario.params,
            scenario.candidate_positions,
            scenario.schedule,
            record_voters=record,
            labels=scenario.labels,
        )
    except ValueError as exc:
        _fail("SIMCLI_RUN", str(exc))
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        labels = {c.id: c.label for c in result.world.candidates}
        _write_result_csv(out / "result.csv", scenario.params.seed, result.metrics, labels)
        _write_series_csv(out / "series.csv", scenario.params.seed, result.metrics)
        if scenario.write_trajectory:
            write_trajectory(out / TRAJECTORY_FILENAME, result.trajectory)
    except OSError as exc:
        _fail("SIMCLI_IO", f"cannot write outputs: {exc}")
    final = result.metrics.final
    _ok(
        f"run ok: {scenario.schedule.run_length} steps, seed {scenario.params.seed}, "
        f"abstention {final.abstention_rate:.4f} -> {out}"
    )


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        _fail("SIMCLI_USAGE", f"cannot parse --values {text!r}", EXIT_USAGE)
        raise AssertionError("unreachable")


def _parse_seeds(text: str) -> list[int]:
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        _fail("SIMCLI_USAGE", f"cannot parse --seeds {text!r}", EXIT_USAGE)
    if not out:
        _fail("SIMCLI_USAGE", "--seeds produced an empty list", EXIT_USAGE)
    return out


@main.command("sweep")
@click.argument("scenario_path", metavar="SCENARIO", type=click.Path(dir_okay=False))
@click.option("--axis", required=True, help=f"One of: {', '.join(sorted(engine.SWEEP_AXES))}.")
@click.option("--values", required=True, help="Comma-separated axis values.")
@click.option("--seeds", required=True, help="Comma-separated seeds; a..b ranges allowed.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel worker processes.")
@click.option("--out", "out_dir", default="out", help="Output directory.", show_default=True)
def cmd_sweep(scenario_path: str, axis: str, values: str, seeds: str, jobs: int, out_dir: str) -> None:
    """Run the cross product of axis values and seeds; write sweep.csv and sweep_agg.csv."""
    scenario = _load(scenario_path)
    value_list = _parse_values(values)
    seed_list = _parse_seeds(seeds)
    if axis not in engine.SWEEP_AXES:
        _fail(
            "SIMCLI_AXIS",
            f"unknown axis {axis!r}; expected one of {', '.join(sorted(engine.SWEEP_AXES))}",
            EXIT_USAGE,
        )
    try:
        cells = engine.sweep(
            scenario.params,
            scenario.candidate_positions,
            scenario.schedule,
            axis,
            value_list,
            seed_list,
            jobs=jobs,
        )
    except ValueError as exc:
        _fail("SIMCLI_RUN", str(exc))
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        candidate_ids = sorted(cells[0].metrics.share_series) if cells else []
        share_cols = [f"share_{cid}" for cid in candidate_ids]

        fh, w = _writer(out / "sweep.csv")
        with fh:
            w.writerow(["axis", "value", "seed", "abstention_rate"] + share_cols)
            for cell in cells:
                row = [cell.axis, cell.value, cell.seed, cell.metrics.final.abstention_rate]
                row += [cell.metrics.final.share(cid) for cid in candidate_ids]
                w.writerow(row)

        fh, w = _writer(out / "sweep_agg.csv")
        with fh:
            w.writerow(["axis", "value", "mean_abstention_rate"] + [f"mean_{c}" for c in share_cols])
            for value in value_list:
                group = [c for c in cells if c.value == value]
                n = len(group)
                row = [axis, value, sum(c.metrics.final.abstention_rate for c in group) / n]
                row += [
                    sum(c.metrics.final.share(cid) for c in group) / n for cid in candidate_ids
                ]
                w.writerow(row)
    except OSError as exc:
        _fail("SIMCLI_IO", f"cannot write outputs: {exc}")
    _ok(f"sweep ok: {len(cells)} runs ({len(value_list)} values x {len(seed_list)} seeds) -> {out}")


@main.command("replay")
@click.argument("trajectory_path", metavar="TRAJECTORY", type=click.Path(dir_okay=False))
@click.argument("scenario_path", metavar="SCENARIO", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
def cmd_replay(trajectory_path: str, scenario_path: str, seed: int | None) -> None:
    """Re-execute a scenario and verify it reproduces a recorded trajectory."""
    scenario = _effective(_load(scenario_path), seed)
    try:
        trajectory = read_trajectory(trajectory_path)
    except (TrajectoryFormatError, OSError) as exc:
        _fail("SIMCLI_FORMAT", f"cannot read trajectory: {exc}")
    try:
        report = engine.replay(
            trajectory,
            scenario.params,
            scenario.candidate_positions,
            scenario.schedule,
            labels=scenario.labels,
        )
    except ValueError as exc:
        _fail("SIMCLI_MISMATCH", str(exc))
    if not report.ok:
        _fail("SIMCLI_REPLAY_DIVERGENCE", report.detail)
    _ok(f"replay ok: {report.detail}")


if __name__ == "__main__":
    main()
