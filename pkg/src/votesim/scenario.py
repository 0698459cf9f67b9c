"""Scenario files: a strict, versioned JSON schema for headless runs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core import Candidate, SimParams
from .engine import DEFAULT_RUN_LENGTH, ScenarioSchedule, ScheduleEntry

SCHEMA_VERSION = 1

_PARAM_KEYS = {
    "num_voters",
    "num_candidates",
    "appeasement_delta",
    "falloff_rate",
    "max_openness",
    "max_tolerance",
    "candidate_attraction_step",
    "social_step",
    "social_sign",
    "seed",
}
_TOP_KEYS = {"schema_version", "params", "candidates", "schedule", "output"}
_CANDIDATE_KEYS = {"id", "label", "position"}
_ENTRY_KEYS = {"step", "candidate", "potential"}
_OUTPUT_KEYS = {"record_voters", "trajectory"}


class ScenarioError(ValueError):
    """Schema violation; carries the JSON path of the offending field."""

    def __init__(self, path: str, message: str):
        self.schema_path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ScenarioFile:
    """Validated scenario: parameters, candidate layout, schedule, output options."""

    params: SimParams
    candidates: tuple[Candidate, ...] | None
    schedule: ScenarioSchedule
    record_voters: bool = False
    write_trajectory: bool = True

    @property
    def candidate_positions(self) -> tuple[tuple[float, float], ...] | None:
        if self.candidates is None:
            return None
        return tuple(c.position for c in self.candidates)

    @property
    def labels(self) -> tuple[str, ...] | None:
        if self.candidates is None:
            return None
        return tuple(c.label for c in self.candidates)


def _require_keys(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ScenarioError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown key")


def _require_type(value, types, path: str, what: str):
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ScenarioError(path, f"expected {what}")
    if not isinstance(value, types):
        raise ScenarioError(path, f"expected {what}")
    return value


def _parse_params(raw: dict, num_candidates_override: int | None) -> SimParams:
    _require_keys(raw, _PARAM_KEYS, "params")
    merged = dict(raw)
    if num_candidates_override is not None:
        declared = merged.get("num_candidates")
        if declared is not None and declared != num_candidates_override:
            raise ScenarioError(
                "params.num_candidates",
                f"declares {declared} but {num_candidates_override} candidates are listed",
            )
        merged["num_candidates"] = num_candidates_override
    try:
        return SimParams(**merged)
    except ValueError as exc:
        message = str(exc)
        field, _, rest = message.partition(":")
        if field in _PARAM_KEYS:
            raise ScenarioError(f"params.{field}", rest.strip() or message) from None
        raise ScenarioError("params", message) from None
    except TypeError as exc:
        raise ScenarioError("params", str(exc)) from None


def parse_candidates(raw: list, path: str = "candidates") -> tuple[Candidate, ...]:
    _require_type(raw, list, path, "an array")
    out: list[Candidate] = []
    for i, item in enumerate(raw):
        here = f"{path}[{i}]"
        _require_type(item, dict, here, "an object")
        _require_keys(item, _CANDIDATE_KEYS, here)
        if "id" not in item:
            raise ScenarioError(f"{here}.id", "required")
        cid = _require_type(item["id"], int, f"{here}.id", "an integer")
        if cid < 0:
            raise ScenarioError(f"{here}.id", "must be >= 0")
        if "position" not in item:
            raise ScenarioError(f"{here}.position", "required")
        pos = _require_type(item["position"], list, f"{here}.position", "a [x, y] array")
        if len(pos) != 2 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pos):
            raise ScenarioError(f"{here}.position", "expected a [x, y] array of numbers")
        x, y = float(pos[0]), float(pos[1])
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ScenarioError(f"{here}.position", "components must be within [0, 1]")
        label = item.get("label", f"C{cid}")
        _require_type(label, str, f"{here}.label", "a string")
        out.append(Candidate(id=cid, label=label, position=(x, y)))
    out.sort(key=lambda c: c.id)
    for a, b in zip(out, out[1:]):
        if a.id == b.id:
            raise ScenarioError(path, f"duplicate candidate id {a.id}")
    return tuple(out)


def _parse_schedule(raw: dict, known_ids: set[int]) -> ScenarioSchedule:
    _require_keys(raw, {"run_length", "entries"}, "schedule")
    run_length = raw.get("run_length", DEFAULT_RUN_LENGTH)
    _require_type(run_length, int, "schedule.run_length", "an integer")
    entries_raw = raw.get("entries", [])
    _require_type(entries_raw, list, "schedule.entries", "an array")
    entries: list[ScheduleEntry] = []
    for i, item in enumerate(entries_raw):
        here = f"schedule.entries[{i}]"
        _require_type(item, dict, here, "an object")
        _require_keys(item, _ENTRY_KEYS, here)
        for key in ("step", "candidate", "potential"):
            if key not in item:
                raise ScenarioError(f"{here}.{key}", "required")
        step = _require_type(item["step"], int, f"{here}.step", "an integer")
        candidate = _require_type(item["candidate"], int, f"{here}.candidate", "an integer")
        potential = _require_type(
            item["potential"], (int, float), f"{here}.potential", "a number"
        )
        if candidate not in known_ids:
            raise ScenarioError(f"{here}.candidate", f"unknown candidate id {candidate}")
        if not (0.0 <= potential <= 1.0):
            raise ScenarioError(f"{here}.potential", "must be within [0, 1]")
        entries.append(ScheduleEntry(step=step, candidate=candidate, potential=float(potential)))
    entries.sort(key=lambda e: e.step)  # stable: same-step order preserved
    try:
        return ScenarioSchedule(entries=tuple(entries), run_length=run_length)
    except ValueError as exc:
        raise ScenarioError("schedule", str(exc)) from None


def parse_scenario(data: object) -> ScenarioFile:
    _require_type(data, dict, "scenario", "an object")
    _require_keys(data, _TOP_KEYS, "")
    if "schema_version" not in data:
        raise ScenarioError("schema_version", "required")
    version = _require_type(data["schema_version"], int, "schema_version", "an integer")
    if version != SCHEMA_VERSION:
        raise ScenarioError("schema_version", f"unsupported version {version}, expected {SCHEMA_VERSION}")

    candidates = None
    if "candidates" in data:
        candidates = parse_candidates(data["candidates"])

    params_raw = data.get("params", {})
    _require_type(params_raw, dict, "params", "an object")
    params = _parse_params(params_raw, len(candidates) if candidates is not None else None)

    known_ids = (
        {c.id for c in candidates} if candidates is not None else set(range(params.num_candidates))
    )
    schedule_raw = data.get("schedule", {})
    _require_type(schedule_raw, dict, "schedule", "an object")
    schedule = _parse_schedule(schedule_raw, known_ids)

    output_raw = data.get("output", {})
    _require_type(output_raw, dict, "output", "an object")
    _require_keys(output_raw, _OUTPUT_KEYS, "output")
    record_voters = _require_type(
        output_raw.get("record_voters", False), bool, "output.record_voters", "a boolean"
    )
    write_trajectory = _require_type(
        output_raw.get("trajectory", True), bool, "output.trajectory", "a boolean"
    )

    return ScenarioFile(
        params=params,
        candidates=candidates,
        schedule=schedule,
        record_voters=record_voters,
        write_trajectory=write_trajectory,
    )


def load_scenario(path: str | Path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError("scenario", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("scenario", f"invalid JSON: {exc}") from None
    return parse_scenario(data)
