"""World state container, trait sampling, and world initialization."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .entities import Candidate, Scandal, Voter
from .params import SimParams

Point = tuple[float, float]

TRAIT_MEAN = 0.5
TRAIT_STD = 0.2


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class WorldState:
    """One instant of the simulation; advanced only by producing a new value.

    Voter data is stored column-wise (one array per attribute, index-aligned
    with ``voter_ids``) so a step touches arrays, not per-agent objects. The
    ``voters`` property materializes the object view on demand. Arrays are
    write-protected; treat every field as immutable.
    """

    time: int
    params: SimParams
    candidates: tuple[Candidate, ...]
    voter_ids: tuple[int, ...]
    voter_positions: np.ndarray  # (V, 2)
    voter_openness: np.ndarray  # (V,)
    voter_charisma: np.ndarray
    voter_tolerance: np.ndarray
    voter_conformity: np.ndarray
    scandals: tuple[Scandal, ...]
    scandal_seq: int
    rng_state: dict

    @property
    def num_voters(self) -> int:
        return len(self.voter_ids)

    @property
    def voters(self) -> tuple[Voter, ...]:
        return tuple(
            Voter(
                id=self.voter_ids[i],
                position=(float(self.voter_positions[i, 0]), float(self.voter_positions[i, 1])),
                openness=float(self.voter_openness[i]),
                charisma=float(self.voter_charisma[i]),
                tolerance=float(self.voter_tolerance[i]),
                conformity=float(self.voter_conformity[i]),
            )
            for i in range(self.num_voters)
        )

    def candidate_positions(self) -> np.ndarray:
        return np.array([c.position for c in self.candidates], dtype=np.float64).reshape(-1, 2)

    def candidate_repulsions(self) -> np.ndarray:
        return np.array([c.repulsion for c in self.candidates], dtype=np.float64)

    def candidate_by_id(self, candidate_id: int) -> Candidate:
        for cand in self.candidates:
            if cand.id == candidate_id:
                return cand
        raise KeyError(f"unknown candidate id {candidate_id}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorldState):
            return NotImplemented
        return (
            self.time == other.time
            and self.params == other.params
            and self.candidates == other.candidates
            and self.voter_ids == other.voter_ids
            and np.array_equal(self.voter_positions, other.voter_positions)
            and np.array_equal(self.voter_openness, other.voter_openness)
            and np.array_equal(self.voter_charisma, other.voter_charisma)
            and np.array_equal(self.voter_tolerance, other.voter_tolerance)
            and np.array_equal(self.voter_conformity, other.voter_conformity)
            and self.scandals == other.scandals
            and self.scandal_seq == other.scandal_seq
            and self.rng_state == other.rng_state
        )


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def sample_trait(rng: np.random.Generator, scale: float) -> float:
    """One trait draw: a Normal(0.5, 0.2^2) variate clamped to [0,1], times scale."""
    if scale < 0:
        raise ValueError(f"scale: must be >= 0, got {scale}")
    return clamp01(float(rng.normal(TRAIT_MEAN, TRAIT_STD))) * scale


def default_candidate_positions(n: int) -> tuple[Point, ...]:
    """Even left-right spread on the horizontal midline, x in [0.1, 0.9]."""
    if n <= 0:
        return ()
    if n == 1:
        return ((0.5, 0.5),)
    xs = np.linspace(0.1, 0.9, n)
    return tuple((float(x), 0.5) for x in xs)


def _validate_point(p: Sequence[float], what: str) -> Point:
    if len(p) != 2:
        raise ValueError(f"{what}: expected a 2D point, got {p!r}")
    x, y = float(p[0]), float(p[1])
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"{what}: components must be within [0, 1], got ({x}, {y})")
    return (x, y)


def init_world(
    params: SimParams,
    candidate_positions: Iterable[Sequence[float]] | None = None,
    labels: Sequence[str] | None = None,
) -> WorldState:
    """Build the time-0 world.

    Candidates sit at the given positions (default placement when omitted)
    with zero repulsion. Voters are placed i.i.d. uniform on [0,1]^2; their
    traits come from ``sample_trait`` in the fixed draw order
    (position.x, position.y, openness, charisma, tolerance, conformity),
    voters in index order.
    """
    if candidate_positions is None:
        positions = default_candidate_positions(params.num_candidates)
    else:
        positions = tuple(_validate_point(p, f"candidate_positions[{i}]")
                          for i, p in enumerate(candidate_positions))
    if len(positions) != params.num_candidates:
        raise ValueError(
            f"candidate_positions: expected {params.num_candidates} entries, got {len(positions)}"
        )
    if labels is not None and len(labels) != params.num_candidates:
        raise ValueError(f"labels: expected {params.num_candidates} entries, got {len(labels)}")

    candidates = tuple(
        Candidate(
            id=i,
            label=labels[i] if labels is not None else f"C{i}",
            position=positions[i],
            repulsion=0.0,
        )
        for i in range(params.num_candidates)
    )

    rng = np.random.default_rng(params.seed)
    v = params.num_voters
    pos = np.empty((v, 2), dtype=np.float64)
    openness = np.empty(v, dtype=np.float64)
    charisma = np.empty(v, dtype=np.float64)
    tolerance = np.empty(v, dtype=np.float64)
    conformity = np.empty(v, dtype=np.float64)
    for i in range(v):
        pos[i, 0] = rng.uniform(0.0, 1.0)
        pos[i, 1] = rng.uniform(0.0, 1.0)
        openness[i] = sample_trait(rng, params.max_openness)
        charisma[i] = sample_trait(rng, 1.0)
        tolerance[i] = sample_trait(rng, params.max_tolerance)
        conformity[i] = sample_trait(rng, 1.0)

    return WorldState(
        time=0,
        params=params,
        candidates=candidates,
        voter_ids=tuple(range(v)),
        voter_positions=_frozen(pos),
        voter_openness=_frozen(openness),
        voter_charisma=_frozen(charisma),
        voter_tolerance=_frozen(tolerance),
        voter_conformity=_frozen(conformity),
        scandals=(),
        scandal_seq=0,
        rng_state=rng.bit_generator.state,
    )


def world_from_agents(
    params: SimParams,
    candidates: Sequence[Candidate],
    voters: Sequence[Voter],
    scandals: Sequence[Scandal] = (),
    time: int = 0,
) -> WorldState:
    """Assemble a world from explicit agents (fixed layouts, tests, replays).

    Candidates must be sorted by strictly increasing id; counts must match
    ``params``. Ranges are validated the same way ``init_world`` guarantees
    them.
    """
    candidates = tuple(candidates)
    if len(candidates) != params.num_candidates:
        raise ValueError(
            f"candidates: expected {params.num_candidates} entries, got {len(candidates)}"
        )
    if len(voters) != params.num_voters:
        raise ValueError(f"voters: expected {params.num_voters} entries, got {len(voters)}")
    for i, cand in enumerate(candidates):
        if i > 0 and candidates[i - 1].id >= cand.id:
            raise ValueError("candidates: ids must be strictly increasing")
        _validate_point(cand.position, f"candidates[{i}].position")
        if not (0.0 <= cand.repulsion <= 1.0):
            raise ValueError(f"candidates[{i}].repulsion: must be within [0, 1]")
    known = {c.id for c in candidates}
    for s in scandals:
        if s.target not in known:
            raise ValueError(f"scandal {s.id}: unknown target candidate {s.target}")
        if not (0.0 <= s.potential <= 1.0):
            raise ValueError(f"scandal {s.id}: potential must be within [0, 1]")

    v = len(voters)
    pos = np.empty((v, 2), dtype=np.float64)
    openness = np.empty(v, dtype=np.float64)
    charisma = np.empty(v, dtype=np.float64)
    tolerance = np.empty(v, dtype=np.float64)
    conformity = np.empty(v, dtype=np.float64)
    for i, voter in enumerate(voters):
        pos[i] = _validate_point(voter.position, f"voters[{i}].position")
        openness[i] = voter.openness
        charisma[i] = voter.charisma
        tolerance[i] = voter.tolerance
        conformity[i] = voter.conformity

    scandal_seq = max((s.id for s in scandals), default=-1) + 1
    return WorldState(
        time=time,
        params=params,
        candidates=candidates,
        voter_ids=tuple(voter.id for voter in voters),
        voter_positions=_frozen(pos),
        voter_openness=_frozen(openness),
        voter_charisma=_frozen(charisma),
        voter_tolerance=_frozen(tolerance),
        voter_conformity=_frozen(conformity),
        scandals=tuple(scandals),
        scandal_seq=scandal_seq,
        rng_state=np.random.default_rng(params.seed).bit_generator.state,
    )


def with_voter_positions(world: WorldState, positions: np.ndarray) -> WorldState:
    """New state sharing everything but the voter position array."""
    return replace(world, voter_positions=_frozen(positions))
