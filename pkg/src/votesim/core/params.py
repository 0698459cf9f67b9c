"""Global simulation parameters and their validation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MAX_SEED = 2**64 - 1


class SocialSign(str, Enum):
    """Orientation of the peer-influence term.

    ATTRACT pulls a voter toward its neighbours (conformity); REPEL_LITERAL
    keeps the opposite orientation available for comparison runs.
    """

    ATTRACT = "attract"
    REPEL_LITERAL = "repel-literal"


@dataclass(frozen=True)
class SimParams:
    """All global knobs of a simulation, plus determinism controls.

    Distances are expressed in canonical [0,1]^2 units throughout.
    """

    num_voters: int = 100
    num_candidates: int = 3
    appeasement_delta: float = 0.01
    falloff_rate: float = 0.05
    max_openness: float = 0.3
    max_tolerance: float = 1.0
    candidate_attraction_step: float = 0.005
    social_step: float = 0.01
    social_sign: SocialSign = SocialSign.ATTRACT
    seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.social_sign, str) and not isinstance(self.social_sign, SocialSign):
            try:
                object.__setattr__(self, "social_sign", SocialSign(self.social_sign))
            except ValueError:
                raise ValueError(
                    f"social_sign: expected one of {[s.value for s in SocialSign]}, "
                    f"got {self.social_sign!r}"
                ) from None
        self._check_int("num_voters", self.num_voters, minimum=0)
        self._check_int("num_candidates", self.num_candidates, minimum=0)
        self._check_range("appeasement_delta", self.appeasement_delta, 0.0, 1.0)
        self._check_range("falloff_rate", self.falloff_rate, 0.0, 1.0)
        self._check_nonneg("max_openness", self.max_openness)
        self._check_nonneg("max_tolerance", self.max_tolerance)
        if not self.candidate_attraction_step > 0.0:
            raise ValueError(
                f"candidate_attraction_step: must be > 0, got {self.candidate_attraction_step}"
            )
        self._check_nonneg("social_step", self.social_step)
        self._check_int("seed", self.seed, minimum=0, maximum=MAX_SEED)

    @staticmethod
    def _check_int(name: str, value: object, minimum: int, maximum: int | None = None) -> None:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{name}: must be an integer, got {value!r}")
        if value < minimum or (maximum is not None and value > maximum):
            hi = f", {maximum}" if maximum is not None else ""
            raise ValueError(f"{name}: must be in [{minimum}{hi or ', inf'}], got {value}")

    @staticmethod
    def _check_range(name: str, value: float, lo: float, hi: float) -> None:
        if not (lo <= value <= hi):
            raise ValueError(f"{name}: must be within [{lo}, {hi}], got {value}")

    @staticmethod
    def _check_nonneg(name: str, value: float) -> None:
        if not value >= 0.0:
            raise ValueError(f"{name}: must be >= 0, got {value}")
