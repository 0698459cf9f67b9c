"""Pure, deterministic state-transition kernel of the election model."""

from .dynamics import decay_scandals, step, trigger_scandal, update_repulsion, update_voter
from .entities import Candidate, ElectionResult, Scandal, Voter
from .params import SimParams, SocialSign
from .tally import tally
from .world import (
    WorldState,
    default_candidate_positions,
    init_world,
    sample_trait,
    world_from_agents,
)

__all__ = [
    "Candidate",
    "ElectionResult",
    "Scandal",
    "SimParams",
    "SocialSign",
    "Voter",
    "WorldState",
    "decay_scandals",
    "default_candidate_positions",
    "init_world",
    "sample_trait",
    "step",
    "tally",
    "trigger_scandal",
    "update_repulsion",
    "update_voter",
    "world_from_agents",
]
