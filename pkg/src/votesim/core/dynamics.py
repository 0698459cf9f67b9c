"""The per-step update rules: scandal decay, repulsion, voter movement."""

from __future__ import annotations

import math
import threading
from dataclasses import replace

import numpy as np
from scipy.spatial.distance import cdist

from .entities import Candidate, Scandal, Voter
from .params import SocialSign
from .world import WorldState, clamp01, with_voter_positions

Point = tuple[float, float]


class _Workspace(threading.local):
    """Reusable per-thread scratch buffers for the voter-voter pass.

    Allocating the (V,V) temporaries fresh every step costs more in page
    faults than the arithmetic itself; every buffer is fully overwritten on
    each use, so reuse cannot leak state between steps.
    """

    def __init__(self) -> None:
        self.size = -1
        self.dist2: np.ndarray | None = None
        self.mask: np.ndarray | None = None
        self.maskf: np.ndarray | None = None
        self.weighted: np.ndarray | None = None
        self.sums: np.ndarray | None = None

    def resize(self, v: int) -> None:
        if self.size != v:
            self.size = v
            self.dist2 = np.empty((v, v), dtype=np.float64)
            self.mask = np.empty((v, v), dtype=bool)
            self.maskf = np.empty((v, v), dtype=np.float64)
            self.weighted = np.empty((v, 4), dtype=np.float64)
            self.sums = np.empty((v, 4), dtype=np.float64)


_workspace = _Workspace()


def decay_scandals(world: WorldState) -> WorldState:
    """Lower every active scandal's potential by the falloff rate.

    Potentials clamp at 0 and a scandal that reaches 0 leaves the active set.
    """
    rate = world.params.falloff_rate
    survivors = []
    for s in world.scandals:
        p = clamp01(s.potential - rate)
        if p > 0.0:
            survivors.append(replace(s, potential=p))
    return replace(world, scandals=tuple(survivors))


def update_repulsion(world: WorldState) -> WorldState:
    """Advance candidate repulsions from already-decayed scandal potentials.

    Each candidate relaxes by the appeasement delta and absorbs the summed
    potential of the scandals targeting it; the result clamps to [0,1].
    Expects ``decay_scandals`` to have run for this step already.
    """
    delta = world.params.appeasement_delta
    pressure: dict[int, float] = {}
    for s in world.scandals:
        pressure[s.target] = pressure.get(s.target, 0.0) + s.potential
    candidates = tuple(
        replace(c, repulsion=clamp01(c.repulsion - delta + pressure.get(c.id, 0.0)))
        for c in world.candidates
    )
    return replace(world, candidates=candidates)


def update_voter(voter: Voter, world: WorldState) -> Point:
    """New position for one voter, reading positions at the world's time.

    Expects candidate repulsions already advanced for this step. The voter
    takes a bounded step toward the nearest tolerated candidate, damped by
    that candidate's repulsion, plus a peer term averaged over neighbours
    within its openness radius. The result clamps to [0,1]^2.
    """
    params = world.params
    px, py = voter.position
    dx_total, dy_total = 0.0, 0.0

    target: Candidate | None = None
    target_dist = math.inf
    for cand in world.candidates:
        if cand.repulsion < voter.tolerance:
            d = math.sqrt((px - cand.position[0]) ** 2 + (py - cand.position[1]) ** 2)
            if d < target_dist:
                target, target_dist = cand, d
    lam_c = params.candidate_attraction_step
    if target is not None and target_dist >= lam_c:
        scale = lam_c / (1.0 + target.repulsion) / target_dist
        dx_total += (target.position[0] - px) * scale
        dy_total += (target.position[1] - py) * scale

    lam_s = params.social_step
    if lam_s > 0.0:
        sig2 = voter.openness * voter.openness
        sx, sy, s0, n = 0.0, 0.0, 0.0, 0
        pos = world.voter_positions
        for j in range(world.num_voters):
            if world.voter_ids[j] == voter.id:
                continue
            ddx = px - pos[j, 0]
            ddy = py - pos[j, 1]
            if ddx * ddx + ddy * ddy < sig2:
                k = world.voter_charisma[j]
                sx += k * pos[j, 0]
                sy += k * pos[j, 1]
                s0 += k
                n += 1
        sign = 1.0 if params.social_sign is SocialSign.ATTRACT else -1.0
        w = sign * lam_s * voter.conformity / max(1, n)
        dx_total += w * (sx - px * s0)
        dy_total += w * (sy - py * s0)

    return (clamp01(px + dx_total), clamp01(py + dy_total))


def _advance_positions(world: WorldState) -> np.ndarray:
    """Vectorized ``update_voter`` over the whole electorate."""
    params = world.params
    pos = world.voter_positions
    v = pos.shape[0]
    new = pos.copy()
    if v == 0:
        return new

    if world.candidates:
        cand_pos = world.candidate_positions()
        cand_rep = world.candidate_repulsions()
        dists = cdist(pos, cand_pos)
        tolerated = cand_rep[None, :] < world.voter_tolerance[:, None]
        dists = np.where(tolerated, dists, np.inf)
        target = np.argmin(dists, axis=1)  # first minimum: lowest candidate id
        target_dist = dists[np.arange(v), target]
        lam_c = params.candidate_attraction_step
        moving = np.isfinite(target_dist) & (target_dist >= lam_c)
        if np.any(moving):
            mi = np.nonzero(moving)[0]
            towards = cand_pos[target[mi]] - pos[mi]
            scale = lam_c / (1.0 + cand_rep[target[mi]]) / target_dist[mi]
            new[mi] += towards * scale[:, None]

    lam_s = params.social_step
    if lam_s > 0.0 and v > 1:
        ws = _workspace
        ws.resize(v)
        cdist(pos, pos, "sqeuclidean", out=ws.dist2)
        np.less(ws.dist2, (world.voter_openness * world.voter_openness)[:, None], out=ws.mask)
        np.fill_diagonal(ws.mask, False)
        np.copyto(ws.maskf, ws.mask)
        ws.weighted[:, 0] = 1.0
        ws.weighted[:, 1] = world.voter_charisma
        np.multiply(world.voter_charisma, pos[:, 0], out=ws.weighted[:, 2])
        np.multiply(world.voter_charisma, pos[:, 1], out=ws.weighted[:, 3])
        sums = np.matmul(ws.maskf, ws.weighted, out=ws.sums)
        counts, s0, s1 = sums[:, 0], sums[:, 1], sums[:, 2:4]
        sign = 1.0 if params.social_sign is SocialSign.ATTRACT else -1.0
        w = sign * lam_s * world.voter_conformity / np.maximum(1.0, counts)
        new += w[:, None] * (s1 - pos * s0[:, None])

    np.clip(new, 0.0, 1.0, out=new)
    return new


def step(world: WorldState) -> WorldState:
    """One synchronous tick: decay scandals, update repulsions, move voters.

    All voters read positions from the incoming state; the result is a new
    state at time+1. Pure function of its input.
    """
    advanced = update_repulsion(decay_scandals(world))
    new_positions = _advance_positions(advanced)
    return replace(with_voter_positions(advanced, new_positions), time=world.time + 1)


def trigger_scandal(world: WorldState, target: int, potential: float) -> WorldState:
    """Attach a fresh scandal to a candidate; it acts from the next step on."""
    if not any(c.id == target for c in world.candidates):
        raise KeyError(f"unknown candidate id {target}")
    if not (0.0 <= potential <= 1.0):
        raise ValueError(f"potential: must be within [0, 1], got {potential}")
    scandal = Scandal(
        id=world.scandal_seq, target=target, potential=potential, onset_time=world.time
    )
    return replace(world, scandals=world.scandals + (scandal,), scandal_seq=world.scandal_seq + 1)
