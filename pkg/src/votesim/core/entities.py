"""Model agents and the tally outcome."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Candidate:
    """A candidate: fixed position, accumulated repulsion in [0,1]."""

    id: int
    label: str
    position: tuple[float, float]
    repulsion: float = 0.0


@dataclass(frozen=True)
class Voter:
    """A voter at a point of the opinion plane with immutable traits."""

    id: int
    position: tuple[float, float]
    openness: float
    charisma: float
    tolerance: float
    conformity: float


@dataclass(frozen=True)
class Scandal:
    """A decaying-potential event attached to one candidate."""

    id: int
    target: int
    potential: float
    onset_time: int


@dataclass(frozen=True)
class ElectionResult:
    """Per-candidate vote counts plus the abstention count and rate."""

    votes: dict[int, int]
    abstentions: int
    abstention_rate: float = field(init=False)

    def __post_init__(self) -> None:
        total = sum(self.votes.values()) + self.abstentions
        rate = self.abstentions / total if total > 0 else 0.0
        object.__setattr__(self, "abstention_rate", rate)

    @property
    def num_voters(self) -> int:
        return sum(self.votes.values()) + self.abstentions

    def share(self, candidate_id: int) -> float:
        """Vote share of one candidate over the full electorate (0 when empty)."""
        total = self.num_voters
        return self.votes[candidate_id] / total if total > 0 else 0.0
