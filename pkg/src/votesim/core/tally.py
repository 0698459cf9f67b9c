"""Proximity vote counting with abstention."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .entities import ElectionResult
from .world import WorldState


def tally(world: WorldState) -> ElectionResult:
    """Count votes at the world's current instant.

    A voter considers candidates within its openness radius (inclusive)
    whose repulsion is below its tolerance, and votes for the closest one
    (ties go to the lowest candidate id). An empty consideration set is an
    abstention.
    """
    votes = {c.id: 0 for c in world.candidates}
    v = world.num_voters
    if v == 0:
        return ElectionResult(votes=votes, abstentions=0)
    if not world.candidates:
        return ElectionResult(votes=votes, abstentions=v)

    dists = cdist(world.voter_positions, world.candidate_positions())
    considered = (dists <= world.voter_openness[:, None]) & (
        world.candidate_repulsions()[None, :] < world.voter_tolerance[:, None]
    )
    dists = np.where(considered, dists, np.inf)
    choice = np.argmin(dists, axis=1)  # first minimum: lowest candidate id
    has_choice = considered.any(axis=1)
    counts = np.bincount(choice[has_choice], minlength=len(world.candidates))
    for i, cand in enumerate(world.candidates):
        votes[cand.id] = int(counts[i])
    return ElectionResult(votes=votes, abstentions=int(v - counts.sum()))
